#ifndef IMOG_DIAGNOSTIC_HPP
#define IMOG_DIAGNOSTIC_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "imog/model.hpp"

namespace imog {

enum class Severity { Error, Warning, Info };

std::string_view to_string(Severity severity);
std::optional<Severity> severity_from_string(std::string_view text);

/// Finding emitted by every checker (validation, trace, structural consistency).
struct Diagnostic {
    Severity severity = Severity::Error;
    std::string code;
    std::optional<ElementId> element_id;
    std::string message;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// Stable diagnostic codes. docs/diagnostics.md lists the same registry.
namespace codes {
// identifiers and references
inline constexpr std::string_view kIdEmpty = "ID-EMPTY";
inline constexpr std::string_view kIdDuplicate = "ID-DUP";
inline constexpr std::string_view kDanglingReference = "REF-DANGLING";
inline constexpr std::string_view kReferenceKind = "REF-KIND";
// shared value types
inline constexpr std::string_view kCustomLevel = "LEVEL-CUSTOM";
inline constexpr std::string_view kPropertyName = "PROP-NAME";
inline constexpr std::string_view kPropertyDuplicate = "PROP-DUP";
inline constexpr std::string_view kPropertyKind = "PROP-KIND";
// strategy and knowledge
inline constexpr std::string_view kStrategyElement = "SG-ELEMENT";
inline constexpr std::string_view kKnowledgeEntry = "KN-ENTRY";
// functional perspective
inline constexpr std::string_view kFpName = "FP-NAME";
inline constexpr std::string_view kFpArity = "FP-ARITY";
inline constexpr std::string_view kFpCardinality = "FP-CARD";
inline constexpr std::string_view kFpRefinementCardinality = "FP-REFCARD";
inline constexpr std::string_view kFpParentChildType = "FP-PCTYPE";
inline constexpr std::string_view kFpVariationPoint = "FP-VP";
inline constexpr std::string_view kFpVpDerivation = "FP-VPDERIV";
inline constexpr std::string_view kFpVpCycle = "FP-VPCYCLE";
inline constexpr std::string_view kFpMultipleParents = "FP-PARENT";
inline constexpr std::string_view kFpRoot = "FP-ROOT";
inline constexpr std::string_view kFpCycle = "FP-CYCLE";
inline constexpr std::string_view kFpGroup = "FP-GROUP";
// quality perspective
inline constexpr std::string_view kQpSatisfiability = "QP-SAT";
inline constexpr std::string_view kQpParentCycle = "QP-CYCLE";
inline constexpr std::string_view kQpStatus = "QP-STATUS";
inline constexpr std::string_view kQpDuplicateTarget = "QP-DUPTARGET";
inline constexpr std::string_view kQpConstrainsLinks = "QP-CONSTRAINS";
// structural perspective
inline constexpr std::string_view kSpVariantParent = "SP-VARPARENT";
inline constexpr std::string_view kSpPropertyDisjoint = "SP-PROPDISJOINT";
inline constexpr std::string_view kSpSelectedVariant = "SP-SELVARIANT";
inline constexpr std::string_view kSpRefinementEmpty = "SP-REFEMPTY";
inline constexpr std::string_view kSpSelectedRefinement = "SP-REFSEL";
inline constexpr std::string_view kSpRelation = "SP-REL";
inline constexpr std::string_view kSpSse = "SP-SSE";
inline constexpr std::string_view kSpSseOverlap = "SP-SSEOVERLAP";
inline constexpr std::string_view kSpProperty = "SP-PROP";
inline constexpr std::string_view kSpRequirementConflict = "SP-REQCONFLICT";
// traces
inline constexpr std::string_view kTraceKind = "TRACE-KIND";
inline constexpr std::string_view kTraceUnallocatedFunction = "TR-UNALLOC-FN";
inline constexpr std::string_view kTraceUnallocatedFeature = "TR-UNALLOC-FEAT";
inline constexpr std::string_view kTraceDangling = "TR-DANGLING";
inline constexpr std::string_view kTraceOrphanRequirement = "TR-ORPHAN";
}  // namespace codes

struct DiagnosticCodeInfo {
    std::string_view code;
    Severity severity;
    std::string_view summary;
};

const std::vector<DiagnosticCodeInfo>& diagnostic_registry();
bool is_registered_code(std::string_view code);

/// Stable sort by (code, element id); ties keep discovery order.
void sort_diagnostics(std::vector<Diagnostic>& diagnostics);

std::size_t count_severity(const std::vector<Diagnostic>& diagnostics, Severity severity);
bool has_errors(const std::vector<Diagnostic>& diagnostics);

/// "ERROR FP-CARD [r.choice] min <= max violated"
std::string format_diagnostic(const Diagnostic& diagnostic);

}  // namespace imog

#endif  // IMOG_DIAGNOSTIC_HPP
