#ifndef IMOG_TRACE_ENGINE_HPP
#define IMOG_TRACE_ENGINE_HPP

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "imog/diagnostic.hpp"
#include "imog/model.hpp"

namespace imog::trace {

struct KnowledgeReuse {
    ElementId block;
    ElementId entry;

    friend bool operator==(const KnowledgeReuse&, const KnowledgeReuse&) = default;
    friend auto operator<=>(const KnowledgeReuse&, const KnowledgeReuse&) = default;
};

/// All lists are sorted by id.
struct TraceReport {
    std::vector<ElementId> unallocated_functions;
    std::vector<ElementId> unallocated_features;
    std::vector<TraceLink> dangling_links;
    std::vector<ElementId> orphan_requirements;
    std::vector<KnowledgeReuse> knowledge_reuse;

    friend bool operator==(const TraceReport&, const TraceReport&) = default;
};

/// Works on any model; links whose endpoints are missing or of the wrong
/// kind are reported as dangling rather than rejected. Only well-formed
/// Allocate links count as allocations.
TraceReport build_trace_report(const Model& model);

/// TR-UNALLOC-FN (Warning), TR-UNALLOC-FEAT (Info), TR-DANGLING (Error),
/// TR-ORPHAN (Info), sorted.
std::vector<Diagnostic> trace_diagnostics(const TraceReport& report);

enum class Op { Eq, Ne, Lt, Le, Gt, Ge, Contains };

std::string_view to_string(Op op);

struct Predicate {
    std::string field;  // document field name, e.g. "satisfiability"
    Op op = Op::Eq;
    std::string value;  // coerced to the field's type when evaluated

    friend bool operator==(const Predicate&, const Predicate&) = default;
};

/// Parses "field op value", e.g. "satisfiability >= 1" or "stereotypes contains Proposed".
/// Accepts = == != <> < <= > >= and the symbols ≠ ≤ ≥. Throws InvalidPredicateError
/// on malformed text and UnknownFieldError on an unknown field.
Predicate parse_predicate(std::string_view text);

/// Requirement field names that predicates may use.
const std::vector<std::string_view>& queryable_fields();

/// Requirements matching every predicate, ordered by id. Absent optional
/// fields never match (SQL NULL). For futureAvailability, Now sorts before
/// every year. List fields only support contains.
std::vector<Requirement> query_requirements(const Model& model, const std::vector<Predicate>& predicates);

}  // namespace imog::trace

#endif  // IMOG_TRACE_ENGINE_HPP
