#include "imog/validate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "imog/errors.hpp"
#include "imog/model_index.hpp"

namespace imog {
namespace {

using Graph = std::map<ElementId, std::vector<ElementId>>;

// Strongly connected components that contain a cycle (size > 1 or a self
// loop). Each component is sorted; components are ordered by first member.
std::vector<std::vector<ElementId>> cyclic_components(const Graph& graph) {
    std::map<ElementId, int> index;
    std::map<ElementId, int> low;
    std::set<ElementId> on_stack;
    std::vector<ElementId> stack;
    std::vector<std::vector<ElementId>> result;
    int counter = 0;

    std::function<void(const ElementId&)> connect = [&](const ElementId& v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack.insert(v);
        if (auto it = graph.find(v); it != graph.end()) {
            for (const auto& w : it->second) {
                if (!index.count(w)) {
                    connect(w);
                    low[v] = std::min(low[v], low[w]);
                } else if (on_stack.count(w)) {
                    low[v] = std::min(low[v], index[w]);
                }
            }
        }
        if (low[v] == index[v]) {
            std::vector<ElementId> component;
            ElementId w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack.erase(w);
                component.push_back(w);
            } while (w != v);
            bool self_loop = false;
            if (auto it = graph.find(v); it != graph.end()) {
                self_loop = std::find(it->second.begin(), it->second.end(), v) != it->second.end();
            }
            if (component.size() > 1 || self_loop) {
                std::sort(component.begin(), component.end());
                result.push_back(std::move(component));
            }
        }
    };

    for (const auto& [node, _] : graph) {
        if (!index.count(node)) connect(node);
    }
    std::sort(result.begin(), result.end());
    return result;
}

std::string join_ids(const std::vector<ElementId>& ids) {
    std::string out;
    for (const auto& id : ids) {
        if (!out.empty()) out += " -> ";
        out += id.str();
    }
    return out;
}

std::string kind_name(ElementKind kind) { return std::string(to_string(kind)); }

class Validator {
public:
    explicit Validator(const Model& model) : model_(model), index_(model) {}

    std::vector<Diagnostic> run() {
        check_ids();
        check_strategy();
        check_functional();
        check_quality();
        check_structural();
        check_knowledge();
        check_traces();
        sort_diagnostics(out_);
        return std::move(out_);
    }

private:
    void emit(std::string_view code, const ElementId& id, std::string message) {
        Severity severity = Severity::Error;
        for (const auto& info : diagnostic_registry()) {
            if (info.code == code) severity = info.severity;
        }
        std::optional<ElementId> element;
        if (!id.empty()) element = id;
        out_.push_back({severity, std::string(code), element, std::move(message)});
    }

    // Reference from `owner` (field `field`) to `target`, which must be one of `allowed`.
    bool check_ref(const ElementId& owner, std::string_view field, const ElementId& target,
                   std::initializer_list<ElementKind> allowed) {
        const auto* h = index_.find(target);
        if (!h) {
            emit(codes::kDanglingReference, owner,
                 std::string(field) + " '" + target.str() + "' does not resolve");
            return false;
        }
        if (std::find(allowed.begin(), allowed.end(), h->kind) == allowed.end()) {
            std::string expected;
            for (auto k : allowed) {
                if (!expected.empty()) expected += " or ";
                expected += to_string(k);
            }
            emit(codes::kReferenceKind, owner,
                 std::string(field) + " '" + target.str() + "' is a " + kind_name(h->kind) + ", expected " +
                     expected);
            return false;
        }
        return true;
    }

    void check_level(const ElementId& owner, const AbstractionLevel& level) {
        if (level.kind != AbstractionLevel::Kind::Custom) return;
        if (level.custom_name.empty()) {
            emit(codes::kCustomLevel, owner, "custom abstraction level has an empty name");
        } else if (is_predefined_level_name(level.custom_name)) {
            emit(codes::kCustomLevel, owner,
                 "custom abstraction level '" + level.custom_name + "' reuses a predefined name");
        }
    }

    void check_properties(const ElementId& owner, const std::vector<Property>& properties) {
        std::set<std::string> seen;
        for (const auto& p : properties) {
            if (p.name.empty()) {
                emit(codes::kPropertyName, owner, "property without a name");
                continue;
            }
            if (!seen.insert(p.name).second) {
                emit(codes::kPropertyDuplicate, owner, "property '" + p.name + "' declared more than once");
            }
            if (p.name == kAvailabilityProperty) {
                if (!std::holds_alternative<std::int64_t>(p.value) && !std::holds_alternative<std::string>(p.value)) {
                    emit(codes::kPropertyKind, owner, "Availability must be a year or a timestamp string");
                }
            } else if (p.name == kFeasibilityProperty) {
                auto number = scalar_number(p.value);
                if (!number || !(*number >= 0.0 && *number <= 1.0)) {
                    emit(codes::kPropertyKind, owner, "Feasibility must be a number in [0,1]");
                }
            }
        }
    }

    void check_ids() {
        for (const auto& h : index_.all()) {
            if (h.id.empty()) {
                out_.push_back({Severity::Error, std::string(codes::kIdEmpty), std::nullopt,
                                std::string(to_string(h.kind)) + " without an id"});
            }
        }
        for (const auto& id : index_.duplicates()) {
            if (id.empty()) continue;
            std::size_t n = 0;
            for (const auto& h : index_.all()) n += h.id == id ? 1 : 0;
            emit(codes::kIdDuplicate, id, "id used by " + std::to_string(n) + " elements");
        }
    }

    void check_strategy() {
        for (const auto& div : model_.strategy) {
            for (const auto& e : div.embedded_elements) {
                if (e.category.empty() || e.text.empty()) {
                    emit(codes::kStrategyElement, e.id, "identifiable element needs a category and a text");
                }
            }
        }
    }

    void check_functional() {
        const auto& fp = model_.functional;
        for (const auto& b : fp.blocks) {
            if (b.name.empty()) emit(codes::kFpName, b.id, "functional block without a name");
            check_level(b.id, b.level);
            check_properties(b.id, b.custom_properties);
        }
        for (const auto& r : fp.relations) check_relation(r);
        check_derivations();
        check_forest();
        for (const auto& g : fp.groups) {
            std::set<ElementId> distinct;
            for (const auto& m : g.members) {
                check_ref(g.id, "member", m, {ElementKind::FpBlock});
                if (!distinct.insert(m).second) {
                    emit(codes::kFpGroup, g.id, "member '" + m.str() + "' listed twice");
                }
            }
            if (distinct.size() < 2) emit(codes::kFpGroup, g.id, "a group needs at least two members");
        }
    }

    void check_relation(const FpRelation& r) {
        const auto kind = r.kind;
        const bool one_to_n = kind == FpRelationKind::Alternative || kind == FpRelationKind::Or;
        if (one_to_n) {
            if (r.children.size() < 2) {
                emit(codes::kFpArity, r.id,
                     std::string(to_string(kind)) + " needs at least two children, has " +
                         std::to_string(r.children.size()));
            }
        } else if (r.children.size() != 1) {
            emit(codes::kFpArity, r.id,
                 std::string(to_string(kind)) + " needs exactly one child, has " + std::to_string(r.children.size()));
        }

        const auto endpoint = connects_variation_points(kind) ? ElementKind::VariationPoint : ElementKind::FpBlock;
        check_ref(r.id, "parent", r.parent, {endpoint});
        for (const auto& c : r.children) check_ref(r.id, "child", c, {endpoint});

        if (r.pc_type && !is_parent_child(kind)) {
            emit(codes::kFpParentChildType, r.id,
                 "parent-child type given on a " + std::string(to_string(kind)) + " relation");
        }

        if (kind == FpRelationKind::Or) {
            if (!r.cardinality) {
                emit(codes::kFpCardinality, r.id, "Or relation without cardinality");
            } else {
                const auto& c = *r.cardinality;
                const auto n = static_cast<int>(r.children.size());
                const std::string card = "[" + std::to_string(c.min) + "," + std::to_string(c.max) + "]";
                if (c.min > c.max) {
                    emit(codes::kFpCardinality, r.id, "cardinality " + card + ": min ≤ max violated");
                } else if (c.min < 1) {
                    emit(codes::kFpCardinality, r.id, "cardinality " + card + ": min must be at least 1");
                } else if (c.max > n) {
                    emit(codes::kFpCardinality, r.id,
                         "cardinality " + card + ": max exceeds the " + std::to_string(n) + " children");
                }
                if (r.pc_type == ParentChildType::Refinement && !(c.min == 1 && c.max == 1)) {
                    emit(codes::kFpRefinementCardinality, r.id,
                         "Refinement-typed Or relation must have cardinality [1,1], has " + card);
                }
            }
        } else if (r.cardinality) {
            emit(codes::kFpCardinality, r.id, "cardinality is only allowed on Or relations");
        }

        if (r.variation_point) {
            const auto& vp = *r.variation_point;
            if (!one_to_n) {
                emit(codes::kFpVariationPoint, r.id, "variation points belong to Alternative or Or relations");
            }
            if (vp.option_labels.size() != r.children.size()) {
                emit(codes::kFpVariationPoint, r.id,
                     "variation point '" + vp.label + "' has " + std::to_string(vp.option_labels.size()) +
                         " option labels for " + std::to_string(r.children.size()) + " children");
            }
            std::set<std::string> labels(vp.option_labels.begin(), vp.option_labels.end());
            if (labels.size() != vp.option_labels.size()) {
                emit(codes::kFpVariationPoint, r.id, "variation point '" + vp.label + "' repeats an option label");
            }
        }
    }

    void check_derivations() {
        Graph graph;
        for (const auto& r : model_.functional.relations) {
            if (r.kind != FpRelationKind::VpDerivation || r.children.size() != 1) continue;
            const auto* src = index_.get<VariationPoint>(r.parent);
            const auto* dst = index_.get<VariationPoint>(r.children.front());
            if (!src || !dst) continue;
            std::set<std::string> a(src->option_labels.begin(), src->option_labels.end());
            std::set<std::string> b(dst->option_labels.begin(), dst->option_labels.end());
            if (a != b) {
                emit(codes::kFpVpDerivation, r.id,
                     "variation points '" + src->label + "' and '" + dst->label + "' offer different options");
            }
            graph[r.parent].push_back(r.children.front());
        }
        for (const auto& cycle : cyclic_components(graph)) {
            emit(codes::kFpVpCycle, cycle.front(), "variation point derivations form a cycle: " + join_ids(cycle));
        }
    }

    void check_forest() {
        const auto& fp = model_.functional;
        std::map<ElementId, int> parent_count;
        Graph graph;
        for (const auto& r : fp.relations) {
            if (!is_parent_child(r.kind)) continue;
            for (const auto& c : r.children) {
                if (!index_.is(c, ElementKind::FpBlock)) continue;
                ++parent_count[c];
                if (index_.is(r.parent, ElementKind::FpBlock)) graph[r.parent].push_back(c);
            }
        }
        for (const auto& [block, count] : parent_count) {
            if (count > 1) {
                emit(codes::kFpMultipleParents, block,
                     "block is the child of " + std::to_string(count) + " parent-child relations");
            }
        }
        std::set<ElementId> roots;
        for (const auto& root : fp.roots) {
            if (!check_ref(root, "root", root, {ElementKind::FpBlock})) continue;
            if (!roots.insert(root).second) emit(codes::kFpRoot, root, "root listed twice");
            if (parent_count.count(root)) emit(codes::kFpRoot, root, "root has a parent relation");
        }
        for (const auto& b : fp.blocks) {
            if (!parent_count.count(b.id) && !roots.count(b.id)) {
                emit(codes::kFpRoot, b.id, "block has no parent and is not listed as a root");
            }
        }
        for (const auto& cycle : cyclic_components(graph)) {
            emit(codes::kFpCycle, cycle.front(), "parent-child relations form a cycle: " + join_ids(cycle));
        }
    }

    void check_quality() {
        Graph parents;
        for (const auto& req : model_.quality) {
            if (!(req.satisfiability >= 0.0 && req.satisfiability <= 1.0)) {
                emit(codes::kQpSatisfiability, req.id, "satisfiability must lie in [0,1]");
            }
            check_level(req.id, req.level);
            check_properties(req.id, req.custom_attributes);
            int statuses = 0;
            for (const auto& s : req.stereotypes) {
                statuses += (s == kStatusDiscarded || s == kStatusProposed || s == kStatusConfirmed) ? 1 : 0;
            }
            if (statuses > 1) emit(codes::kQpStatus, req.id, "more than one requirement status stereotype");
            if (req.parent && check_ref(req.id, "parent", *req.parent, {ElementKind::Requirement})) {
                parents[req.id].push_back(*req.parent);
            }
            std::set<ElementId> seen;
            for (const auto& t : req.targets) {
                check_ref(req.id, "target", t, {ElementKind::FpBlock, ElementKind::SpBlock});
                if (!seen.insert(t).second) emit(codes::kQpDuplicateTarget, req.id, "target '" + t.str() + "' listed twice");
            }
        }
        for (const auto& cycle : cyclic_components(parents)) {
            emit(codes::kQpParentCycle, cycle.front(), "requirement parents form a cycle: " + join_ids(cycle));
        }

        Model expected;
        expected.quality = model_.quality;
        materialize_constrains_links(expected);
        std::vector<TraceLink> actual;
        for (const auto& t : model_.traces) {
            if (t.kind == TraceKind::Constrains) actual.push_back(t);
        }
        if (actual != expected.traces) {
            emit(codes::kQpConstrainsLinks, ElementId{},
                 "Constrains links do not mirror requirement targets (" + std::to_string(actual.size()) +
                     " links, " + std::to_string(expected.traces.size()) + " expected)");
        }
    }

    static void collect_group_properties(const RefinementGroup& group, std::set<std::string>& names) {
        for (const auto& rb : group.blocks) {
            for (const auto& p : rb.properties) names.insert(p.name);
            for (const auto& nested : rb.refinement_groups) collect_group_properties(nested, names);
        }
    }

    // Own properties and each refinement group's properties must not share names.
    void check_disjoint(const ElementId& owner, const std::vector<Property>& own,
                        const std::vector<RefinementGroup>& groups) {
        std::map<std::string, std::vector<std::string>> declared_by;
        for (const auto& p : own) declared_by[p.name].push_back(owner.str());
        for (const auto& g : groups) {
            std::set<std::string> names;
            collect_group_properties(g, names);
            for (const auto& n : names) declared_by[n].push_back(g.id.str());
        }
        for (const auto& [name, owners] : declared_by) {
            std::set<std::string> distinct(owners.begin(), owners.end());
            if (distinct.size() > 1) {
                std::string list;
                for (const auto& o : owners) list += (list.empty() ? "" : ", ") + o;
                emit(codes::kSpPropertyDisjoint, owner, "property '" + name + "' declared by " + list);
            }
        }
    }

    void check_refinement_group(const RefinementGroup& g) {
        if (g.blocks.empty()) emit(codes::kSpRefinementEmpty, g.id, "refinement group has no refinement blocks");
        if (g.selected_refinement) {
            bool member = std::any_of(g.blocks.begin(), g.blocks.end(),
                                      [&](const RefinementBlock& rb) { return rb.id == *g.selected_refinement; });
            if (!member) {
                emit(codes::kSpSelectedRefinement, g.id,
                     "selected refinement '" + g.selected_refinement->str() + "' is not a member");
            }
        }
        for (const auto& rb : g.blocks) {
            check_properties(rb.id, rb.properties);
            check_disjoint(rb.id, rb.properties, rb.refinement_groups);
            for (const auto& nested : rb.refinement_groups) check_refinement_group(nested);
        }
    }

    static std::set<std::string> sse_names(const SolutionSpaceDescription& sse) {
        std::set<std::string> names(sse.input_properties.begin(), sse.input_properties.end());
        names.insert(sse.output_properties.begin(), sse.output_properties.end());
        return names;
    }

    void check_sp_block(const SpBlock& b, const SpBlock* owner) {
        check_level(b.id, b.level);
        check_properties(b.id, b.properties);
        check_disjoint(b.id, b.properties, b.refinement_groups);
        for (const auto& g : b.refinement_groups) check_refinement_group(g);
        if (owner && b.parent_block != owner->id) {
            emit(codes::kSpVariantParent, b.id,
                 "variant of '" + owner->id.str() + "' has parentBlock '" +
                     (b.parent_block ? b.parent_block->str() : std::string("<none>")) + "'");
        }
        if (!owner && b.parent_block) {
            emit(codes::kSpVariantParent, b.id,
                 "block is not a variant but names parentBlock '" + b.parent_block->str() + "'");
        }
        if (b.selected_variant) {
            bool member = std::any_of(b.variants.begin(), b.variants.end(),
                                      [&](const SpBlock& v) { return v.id == *b.selected_variant; });
            if (!member) {
                emit(codes::kSpSelectedVariant, b.id,
                     "selected variant '" + b.selected_variant->str() + "' is not a variant of this block");
            }
        }
        if (b.sse) {
            std::set<std::string> in(b.sse->input_properties.begin(), b.sse->input_properties.end());
            for (const auto& o : b.sse->output_properties) {
                if (in.count(o)) emit(codes::kSpSse, b.id, "property '" + o + "' is both SSE input and output");
            }
            if (owner && owner->sse) {
                auto mine = sse_names(*b.sse);
                auto theirs = sse_names(*owner->sse);
                std::vector<std::string> common;
                std::set_intersection(mine.begin(), mine.end(), theirs.begin(), theirs.end(),
                                      std::back_inserter(common));
                if (common.size() > 1) {
                    emit(codes::kSpSseOverlap, b.id,
                         "variant SSE shares " + std::to_string(common.size()) + " properties with '" +
                             owner->id.str() + "'; selecting the variant replaces the block SSE");
                }
            }
        }
    }

    void check_sp_relation(const SpRelation& r) {
        check_properties(r.id, r.properties);
        if (r.kind == SpRelationKind::Channel) {
            check_ref(r.id, "source", r.source, {ElementKind::SpBlock});
            check_ref(r.id, "target", r.target, {ElementKind::SpBlock});
            if (r.direction) emit(codes::kSpRelation, r.id, "channels carry no direction");
        } else {
            check_ref(r.id, "source", r.source, {ElementKind::SpBlock, ElementKind::Package});
            check_ref(r.id, "target", r.target, {ElementKind::SpBlock, ElementKind::Package});
            if (!r.direction) emit(codes::kSpRelation, r.id, std::string(to_string(r.kind)) + " needs a direction");
        }
        if ((r.kind == SpRelationKind::Effect) != r.effect_type.has_value()) {
            emit(codes::kSpRelation, r.id, "effectType is required on Effect relations and forbidden otherwise");
        }
        if (r.endpoint_type && r.kind != SpRelationKind::Effect) {
            emit(codes::kSpRelation, r.id, "endpointType is only allowed on Effect relations");
        }
    }

    void check_sp_elements(const std::vector<DecompositionElement>& elements) {
        for (const auto& element : elements) {
            if (const auto* r = std::get_if<SpRelation>(&element.value)) {
                check_sp_relation(*r);
            } else if (const auto* p = std::get_if<Package>(&element.value)) {
                check_sp_elements(p->elements);
            } else if (const auto* b = std::get_if<SpBlock>(&element.value)) {
                check_sp_nested(*b);
            }
        }
    }

    void check_sp_nested(const SpBlock& b) {
        if (b.decomposition) check_sp_elements(b.decomposition->elements);
        for (const auto& v : b.variants) check_sp_nested(v);
    }

    void check_structural() {
        for_each_sp_block(model_, [&](const SpBlock& b, const SpBlock* owner) { check_sp_block(b, owner); });
        for (const auto& top : model_.structural.top_models) check_sp_elements(top.elements);
    }

    void check_knowledge() {
        for (const auto& k : model_.knowledge) {
            if (k.name.empty() || k.type.empty()) emit(codes::kKnowledgeEntry, k.id, "knowledge entry needs a name and a type");
            check_properties(k.id, k.properties);
        }
    }

    void check_traces() {
        for (const auto& t : model_.traces) {
            const auto* src = index_.find(t.source);
            const auto* dst = index_.find(t.target);
            if (!src) emit(codes::kDanglingReference, t.id, "source '" + t.source.str() + "' does not resolve");
            if (!dst) emit(codes::kDanglingReference, t.id, "target '" + t.target.str() + "' does not resolve");
            if (!src || !dst) continue;
            bool ok = false;
            std::string expected;
            switch (t.kind) {
            case TraceKind::Allocate:
                ok = src->kind == ElementKind::FpBlock && dst->kind == ElementKind::SpBlock;
                expected = "FpBlock -> SpBlock";
                break;
            case TraceKind::Constrains:
                ok = src->kind == ElementKind::Requirement &&
                     (dst->kind == ElementKind::FpBlock || dst->kind == ElementKind::SpBlock);
                expected = "Requirement -> FpBlock|SpBlock";
                break;
            case TraceKind::References:
                ok = (src->kind == ElementKind::FpBlock && dst->kind == ElementKind::IdentifiableElement) ||
                     (src->kind == ElementKind::SpBlock && dst->kind == ElementKind::KnowledgeEntry);
                expected = "FpBlock -> IdentifiableElement or SpBlock -> KnowledgeEntry";
                break;
            }
            if (!ok) {
                emit(codes::kTraceKind, t.id,
                     std::string(to_string(t.kind)) + " link " + std::string(to_string(src->kind)) + " -> " +
                         std::string(to_string(dst->kind)) + ", expected " + expected);
            }
        }
    }

    const Model& model_;
    ModelIndex index_;
    std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> validate_model(const Model& model) { return Validator(model).run(); }

void require_valid(const Model& model) {
    auto diagnostics = validate_model(model);
    if (has_errors(diagnostics)) throw InvalidModelError(std::move(diagnostics));
}

}  // namespace imog
