#include "imog/diagnostic.hpp"

#include <algorithm>

#include "imog/errors.hpp"

namespace imog {

std::string_view to_string(Severity severity) {
    switch (severity) {
    case Severity::Error: return "Error";
    case Severity::Warning: return "Warning";
    case Severity::Info: return "Info";
    }
    return "?";
}

std::optional<Severity> severity_from_string(std::string_view text) {
    if (text == "Error") return Severity::Error;
    if (text == "Warning") return Severity::Warning;
    if (text == "Info") return Severity::Info;
    return std::nullopt;
}

const std::vector<DiagnosticCodeInfo>& diagnostic_registry() {
    using namespace codes;
    static const std::vector<DiagnosticCodeInfo> registry = {
        {kIdEmpty, Severity::Error, "element without an id"},
        {kIdDuplicate, Severity::Error, "id used by more than one element"},
        {kDanglingReference, Severity::Error, "reference to an id that does not exist"},
        {kReferenceKind, Severity::Error, "reference resolves to an element of the wrong kind"},
        {kCustomLevel, Severity::Error, "custom abstraction level is empty or reuses a predefined name"},
        {kPropertyName, Severity::Error, "property without a name"},
        {kPropertyDuplicate, Severity::Error, "property name repeated within one owner"},
        {kPropertyKind, Severity::Error, "Availability/Feasibility value of the wrong kind"},
        {kStrategyElement, Severity::Error, "identifiable element without category or text"},
        {kKnowledgeEntry, Severity::Error, "knowledge entry without name or type"},
        {kFpName, Severity::Error, "functional block without a name"},
        {kFpArity, Severity::Error, "relation has the wrong number of children"},
        {kFpCardinality, Severity::Error, "Or cardinality missing or outside 1 <= min <= max <= |children|"},
        {kFpRefinementCardinality, Severity::Error, "Refinement-typed Or relation is not [1,1]"},
        {kFpParentChildType, Severity::Error, "parent-child type on a relation that is not parent-child"},
        {kFpVariationPoint, Severity::Error, "variation point misplaced or option labels inconsistent"},
        {kFpVpDerivation, Severity::Error, "derivation between variation points with different option labels"},
        {kFpVpCycle, Severity::Error, "cycle among variation point derivations"},
        {kFpMultipleParents, Severity::Error, "functional block has more than one parent relation"},
        {kFpRoot, Severity::Error, "root list disagrees with the parent-child structure"},
        {kFpCycle, Severity::Error, "cycle among parent-child relations"},
        {kFpGroup, Severity::Error, "group with fewer than two distinct members"},
        {kQpSatisfiability, Severity::Error, "satisfiability outside [0,1]"},
        {kQpParentCycle, Severity::Error, "cycle in the requirement parent chain"},
        {kQpStatus, Severity::Error, "more than one requirement status stereotype"},
        {kQpDuplicateTarget, Severity::Error, "requirement lists the same target twice"},
        {kQpConstrainsLinks, Severity::Error, "Constrains links out of sync with requirement targets"},
        {kSpVariantParent, Severity::Error, "variant does not point back to its owning block"},
        {kSpPropertyDisjoint, Severity::Error, "property declared by a block and one of its refinement groups"},
        {kSpSelectedVariant, Severity::Error, "selected variant is not a variant of the block"},
        {kSpRefinementEmpty, Severity::Error, "refinement group without refinement blocks"},
        {kSpSelectedRefinement, Severity::Error, "selected refinement is not a member of the group"},
        {kSpRelation, Severity::Error, "structural relation fields inconsistent with its kind"},
        {kSpSse, Severity::Error, "solution space description lists a property as input and output"},
        {kSpSseOverlap, Severity::Info, "variant SSE shares more than one property with its block; selection replaces"},
        {kSpProperty, Severity::Warning, "requirement attribute differs from the effective block property"},
        {kSpRequirementConflict, Severity::Error, "confirmed requirements demand different values"},
        {kTraceKind, Severity::Error, "trace link endpoints of the wrong kind"},
        {kTraceUnallocatedFunction, Severity::Warning, "function not allocated to any structural block"},
        {kTraceUnallocatedFeature, Severity::Info, "feature not allocated to any structural block"},
        {kTraceDangling, Severity::Error, "trace link with unresolved or mistyped endpoint"},
        {kTraceOrphanRequirement, Severity::Info, "requirement without targets"},
    };
    return registry;
}

bool is_registered_code(std::string_view code) {
    const auto& reg = diagnostic_registry();
    return std::any_of(reg.begin(), reg.end(), [&](const auto& info) { return info.code == code; });
}

void sort_diagnostics(std::vector<Diagnostic>& diagnostics) {
    std::stable_sort(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& a, const Diagnostic& b) {
        if (a.code != b.code) return a.code < b.code;
        return a.element_id < b.element_id;
    });
}

std::size_t count_severity(const std::vector<Diagnostic>& diagnostics, Severity severity) {
    return static_cast<std::size_t>(std::count_if(diagnostics.begin(), diagnostics.end(),
                                                  [&](const Diagnostic& d) { return d.severity == severity; }));
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
    return count_severity(diagnostics, Severity::Error) > 0;
}

std::string format_diagnostic(const Diagnostic& d) {
    std::string out;
    switch (d.severity) {
    case Severity::Error: out = "ERROR "; break;
    case Severity::Warning: out = "WARNING "; break;
    case Severity::Info: out = "INFO "; break;
    }
    out += d.code;
    if (d.element_id) out += " [" + d.element_id->str() + "]";
    out += " " + d.message;
    return out;
}

// errors.hpp

namespace {
std::string join_diagnostics(const std::vector<Diagnostic>& diagnostics) {
    std::string out = "model has " + std::to_string(count_severity(diagnostics, Severity::Error)) + " error(s)";
    for (const auto& d : diagnostics) {
        if (d.severity == Severity::Error) {
            out += "\n  " + format_diagnostic(d);
        }
    }
    return out;
}
}  // namespace

SyntaxError::SyntaxError(std::size_t line_, std::size_t column_, const std::string& detail)
    : Error("syntax error at line " + std::to_string(line_) + ", column " + std::to_string(column_) + ": " + detail),
      line(line_),
      column(column_) {}

SchemaError::SchemaError(std::string path_, std::string expected_, std::string got_)
    : Error("schema error at " + path_ + ": expected " + expected_ + ", got " + got_),
      path(std::move(path_)),
      expected(std::move(expected_)),
      got(std::move(got_)) {}

DuplicateIdError::DuplicateIdError(ElementId id_) : Error("duplicate id '" + id_.str() + "'"), id(std::move(id_)) {}

NotFoundError::NotFoundError(ElementId id_, const std::string& what)
    : Error(what + " '" + id_.str() + "' not found"), id(std::move(id_)) {}

InvalidModelError::InvalidModelError(std::vector<Diagnostic> diagnostics_)
    : Error(join_diagnostics(diagnostics_)), diagnostics(std::move(diagnostics_)) {}

CapExceededError::CapExceededError(std::size_t blocks_, std::size_t cap_)
    : Error("model has " + std::to_string(blocks_) + " blocks, more than the enumeration cap of " +
            std::to_string(cap_) + " (set a result cap or raise IMOG_CAP)"),
      blocks(blocks_),
      cap(cap_) {}

IllegalSelectionError::IllegalSelectionError(ElementId owner_, const std::string& detail)
    : Error("illegal selection for '" + owner_.str() + "': " + detail), owner(std::move(owner_)) {}

UnknownFieldError::UnknownFieldError(std::string field_)
    : Error("unknown requirement field '" + field_ + "'"), field(std::move(field_)) {}

}  // namespace imog
