#include "imog/trace_engine.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <variant>

#include "imog/errors.hpp"
#include "imog/model_index.hpp"

namespace imog::trace {

namespace {

bool well_formed(const TraceLink& t, const ModelIndex& index) {
    const auto* src = index.find(t.source);
    const auto* dst = index.find(t.target);
    if (!src || !dst) return false;
    switch (t.kind) {
    case TraceKind::Allocate: return src->kind == ElementKind::FpBlock && dst->kind == ElementKind::SpBlock;
    case TraceKind::Constrains:
        return src->kind == ElementKind::Requirement &&
               (dst->kind == ElementKind::FpBlock || dst->kind == ElementKind::SpBlock);
    case TraceKind::References:
        return (src->kind == ElementKind::FpBlock && dst->kind == ElementKind::IdentifiableElement) ||
               (src->kind == ElementKind::SpBlock && dst->kind == ElementKind::KnowledgeEntry);
    }
    return false;
}

}  // namespace

TraceReport build_trace_report(const Model& model) {
    ModelIndex index(model);
    TraceReport report;
    std::set<ElementId> allocated;
    for (const auto& t : model.traces) {
        if (!well_formed(t, index)) {
            report.dangling_links.push_back(t);
            continue;
        }
        if (t.kind == TraceKind::Allocate) allocated.insert(t.source);
        if (t.kind == TraceKind::References && index.is(t.target, ElementKind::KnowledgeEntry)) {
            report.knowledge_reuse.push_back({t.source, t.target});
        }
    }
    for (const auto& b : model.functional.blocks) {
        if (allocated.count(b.id)) continue;
        (b.kind == FpBlockKind::Function ? report.unallocated_functions : report.unallocated_features).push_back(b.id);
    }
    for (const auto& r : model.quality) {
        if (r.targets.empty()) report.orphan_requirements.push_back(r.id);
    }

    std::sort(report.unallocated_functions.begin(), report.unallocated_functions.end());
    std::sort(report.unallocated_features.begin(), report.unallocated_features.end());
    std::sort(report.orphan_requirements.begin(), report.orphan_requirements.end());
    std::sort(report.knowledge_reuse.begin(), report.knowledge_reuse.end());
    report.knowledge_reuse.erase(std::unique(report.knowledge_reuse.begin(), report.knowledge_reuse.end()),
                                 report.knowledge_reuse.end());
    std::stable_sort(report.dangling_links.begin(), report.dangling_links.end(),
                     [](const TraceLink& a, const TraceLink& b) { return a.id < b.id; });
    return report;
}

std::vector<Diagnostic> trace_diagnostics(const TraceReport& report) {
    std::vector<Diagnostic> out;
    for (const auto& id : report.unallocated_functions) {
        out.push_back({Severity::Warning, std::string(codes::kTraceUnallocatedFunction), id,
                       "function is not allocated to any structural block"});
    }
    for (const auto& id : report.unallocated_features) {
        out.push_back({Severity::Info, std::string(codes::kTraceUnallocatedFeature), id,
                       "feature is not allocated to any structural block"});
    }
    for (const auto& t : report.dangling_links) {
        out.push_back({Severity::Error, std::string(codes::kTraceDangling), t.id,
                       std::string(to_string(t.kind)) + " link '" + t.source.str() + "' -> '" + t.target.str() +
                           "' does not connect the required element kinds"});
    }
    for (const auto& id : report.orphan_requirements) {
        out.push_back({Severity::Info, std::string(codes::kTraceOrphanRequirement), id, "requirement has no targets"});
    }
    sort_diagnostics(out);
    return out;
}

// ---------------------------------------------------------------------------
// Requirement queries

std::string_view to_string(Op op) {
    switch (op) {
    case Op::Eq: return "=";
    case Op::Ne: return "!=";
    case Op::Lt: return "<";
    case Op::Le: return "<=";
    case Op::Gt: return ">";
    case Op::Ge: return ">=";
    case Op::Contains: return "contains";
    }
    return "=";
}

const std::vector<std::string_view>& queryable_fields() {
    static const std::vector<std::string_view> fields = {
        "id",       "priority", "name",     "text",            "satisfiability", "futureAvailability",
        "stereotypes", "level", "assignee", "parent",          "parentType",     "targets",
        "customAttributes", "reasoning", "discussion", "version"};
    return fields;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

void check_field(const std::string& field) {
    const auto& f = queryable_fields();
    if (std::find(f.begin(), f.end(), field) == f.end()) throw UnknownFieldError(field);
}

// Longest spellings first so that "<=" wins over "<".
const std::vector<std::pair<std::string_view, Op>>& op_spellings() {
    static const std::vector<std::pair<std::string_view, Op>> ops = {
        {"≠", Op::Ne}, {"≤", Op::Le}, {"≥", Op::Ge}, {"!=", Op::Ne}, {"<>", Op::Ne}, {"<=", Op::Le},
        {">=", Op::Ge}, {"==", Op::Eq}, {"=", Op::Eq}, {"<", Op::Lt}, {">", Op::Gt}};
    return ops;
}

std::optional<double> parse_number(std::string_view text) {
    text = trim(text);
    if (text.empty()) return std::nullopt;
    double v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

template <class T>
bool compare(const T& a, Op op, const T& b) {
    switch (op) {
    case Op::Eq: return a == b;
    case Op::Ne: return !(a == b);
    case Op::Lt: return a < b;
    case Op::Le: return a < b || a == b;
    case Op::Gt: return b < a;
    case Op::Ge: return b < a || a == b;
    case Op::Contains: return false;
    }
    return false;
}

// A predicate compiled against its field's type.
class Matcher {
public:
    explicit Matcher(const Predicate& p) : p_(p) {
        check_field(p.field);
        kind_ = kind_of(p.field);
        if (kind_ == Kind::List && p.op != Op::Contains) {
            throw InvalidPredicateError("field '" + p.field + "' is a list and only supports contains");
        }
        if (kind_ == Kind::Number) {
            if (p.op == Op::Contains) throw InvalidPredicateError("field '" + p.field + "' is numeric, contains is not defined");
            number_ = parse_number(p.value);
            if (!number_) throw InvalidPredicateError("field '" + p.field + "' expects a number, got '" + p.value + "'");
        }
        if (kind_ == Kind::Availability) {
            if (p.op == Op::Contains) throw InvalidPredicateError("field 'futureAvailability' does not support contains");
            if (p.value == "Now") {
                availability_ = FutureAvailability::now();
            } else {
                auto n = parse_number(p.value);
                if (!n || *n != std::floor(*n)) {
                    throw InvalidPredicateError("futureAvailability expects Now or a year, got '" + p.value + "'");
                }
                availability_ = FutureAvailability::in_year(static_cast<int>(*n));
            }
        }
    }

    bool operator()(const Requirement& r) const {
        switch (kind_) {
        case Kind::Number: {
            std::optional<double> v;
            if (p_.field == "satisfiability") v = r.satisfiability;
            if (p_.field == "priority" && r.priority) v = static_cast<double>(*r.priority);
            return v && compare(*v, p_.op, *number_);
        }
        case Kind::Availability: return compare(r.future_availability, p_.op, availability_);
        case Kind::List: {
            if (p_.field == "customAttributes") {
                return std::any_of(r.custom_attributes.begin(), r.custom_attributes.end(),
                                   [&](const Property& a) { return a.name == p_.value; });
            }
            auto has = [&](const auto& list) {
                return std::any_of(list.begin(), list.end(), [&](const auto& x) { return std::string_view(text_of(x)) == p_.value; });
            };
            if (p_.field == "stereotypes") return has(r.stereotypes);
            if (p_.field == "targets") return has(r.targets);
            return has(r.discussion);
        }
        case Kind::Text: {
            auto v = text_field(r);
            if (!v) return false;
            if (p_.op == Op::Contains) return v->find(p_.value) != std::string::npos;
            return compare(*v, p_.op, p_.value);
        }
        }
        return false;
    }

private:
    enum class Kind { Number, Availability, List, Text };

    static Kind kind_of(const std::string& f) {
        if (f == "priority" || f == "satisfiability") return Kind::Number;
        if (f == "futureAvailability") return Kind::Availability;
        if (f == "stereotypes" || f == "targets" || f == "customAttributes" || f == "discussion") return Kind::List;
        return Kind::Text;
    }

    static const std::string& text_of(const std::string& s) { return s; }
    static const std::string& text_of(const ElementId& id) { return id.str(); }

    std::optional<std::string> text_field(const Requirement& r) const {
        const auto& f = p_.field;
        if (f == "id") return r.id.str();
        if (f == "name") return r.name;
        if (f == "text") return r.text;
        if (f == "level") return r.level.name();
        if (f == "assignee") return r.assignee ? std::optional<std::string>(r.assignee->name()) : std::nullopt;
        if (f == "parent") return r.parent ? std::optional<std::string>(r.parent->str()) : std::nullopt;
        if (f == "parentType") {
            return r.parent_type ? std::optional<std::string>(std::string(to_string(*r.parent_type))) : std::nullopt;
        }
        if (f == "reasoning") return r.reasoning;
        return r.version;
    }

    Predicate p_;
    Kind kind_ = Kind::Text;
    std::optional<double> number_;
    FutureAvailability availability_;
};

}  // namespace

Predicate parse_predicate(std::string_view text) {
    const auto s = trim(text);
    // Word operator first: "stereotypes contains Proposed".
    if (auto pos = s.find(" contains "); pos != std::string_view::npos) {
        Predicate p{std::string(trim(s.substr(0, pos))), Op::Contains, std::string(trim(s.substr(pos + 10)))};
        if (p.field.empty()) throw InvalidPredicateError("missing field in '" + std::string(text) + "'");
        check_field(p.field);
        return p;
    }
    // Earliest operator position wins; at equal positions, the longest spelling.
    std::size_t best = std::string_view::npos;
    std::string_view best_spelling;
    Op best_op = Op::Eq;
    for (const auto& [spelling, op] : op_spellings()) {
        auto pos = s.find(spelling);
        if (pos == std::string_view::npos) continue;
        if (pos < best || (pos == best && spelling.size() > best_spelling.size())) {
            best = pos;
            best_spelling = spelling;
            best_op = op;
        }
    }
    if (best == std::string_view::npos) {
        throw InvalidPredicateError("no operator in '" + std::string(text) + "'");
    }
    Predicate p{std::string(trim(s.substr(0, best))), best_op, std::string(trim(s.substr(best + best_spelling.size())))};
    if (p.field.empty()) throw InvalidPredicateError("missing field in '" + std::string(text) + "'");
    check_field(p.field);
    return p;
}

std::vector<Requirement> query_requirements(const Model& model, const std::vector<Predicate>& predicates) {
    std::vector<Matcher> matchers;
    matchers.reserve(predicates.size());
    for (const auto& p : predicates) matchers.emplace_back(p);

    std::vector<Requirement> out;
    for (const auto& r : model.quality) {
        if (std::all_of(matchers.begin(), matchers.end(), [&](const Matcher& m) { return m(r); })) out.push_back(r);
    }
    std::stable_sort(out.begin(), out.end(), [](const Requirement& a, const Requirement& b) { return a.id < b.id; });
    return out;
}

}  // namespace imog::trace
