#include "imog/filter.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "imog/errors.hpp"
#include "imog/model_index.hpp"

namespace imog {
namespace {

class LevelFilter {
public:
    explicit LevelFilter(const std::vector<AbstractionLevel>& levels) : levels_(levels) {}

    bool keeps(const AbstractionLevel& level) const {
        return std::find(levels_.begin(), levels_.end(), level) != levels_.end();
    }

    std::vector<DecompositionElement> filter_elements(const std::vector<DecompositionElement>& elements) const {
        std::vector<DecompositionElement> out;
        for (const auto& element : elements) {
            if (const auto* block = std::get_if<SpBlock>(&element.value)) {
                if (keeps(block->level)) {
                    out.push_back({filter_block(*block)});
                } else if (block->decomposition) {
                    auto hoisted = filter_elements(block->decomposition->elements);
                    std::move(hoisted.begin(), hoisted.end(), std::back_inserter(out));
                }
            } else if (const auto* package = std::get_if<Package>(&element.value)) {
                Package copy{package->id, package->name, filter_elements(package->elements)};
                out.push_back({std::move(copy)});
            } else {
                out.push_back(element);
            }
        }
        return out;
    }

    SpBlock filter_block(const SpBlock& block) const {
        SpBlock copy = block;
        if (copy.decomposition) copy.decomposition->elements = filter_elements(block.decomposition->elements);
        copy.variants.clear();
        for (const auto& v : block.variants) {
            if (keeps(v.level)) copy.variants.push_back(filter_block(v));
        }
        if (copy.selected_variant) {
            bool kept = std::any_of(copy.variants.begin(), copy.variants.end(),
                                    [&](const SpBlock& v) { return v.id == *copy.selected_variant; });
            if (!kept) copy.selected_variant.reset();
        }
        return copy;
    }

private:
    const std::vector<AbstractionLevel>& levels_;
};

void drop_unresolved_relations(std::vector<DecompositionElement>& elements, const ModelIndex& index);

void drop_in_block(SpBlock& block, const ModelIndex& index) {
    if (block.decomposition) drop_unresolved_relations(block.decomposition->elements, index);
    for (auto& v : block.variants) drop_in_block(v, index);
}

void drop_unresolved_relations(std::vector<DecompositionElement>& elements, const ModelIndex& index) {
    std::erase_if(elements, [&](const DecompositionElement& e) {
        const auto* r = std::get_if<SpRelation>(&e.value);
        return r && (!index.contains(r->source) || !index.contains(r->target));
    });
    for (auto& e : elements) {
        if (auto* b = std::get_if<SpBlock>(&e.value)) {
            drop_in_block(*b, index);
        } else if (auto* p = std::get_if<Package>(&e.value)) {
            drop_unresolved_relations(p->elements, index);
        }
    }
}

}  // namespace

Model filter_by_abstraction_level(const Model& model, const std::vector<AbstractionLevel>& levels) {
    if (levels.empty()) throw EmptyFilterError();
    LevelFilter filter(levels);

    Model view;
    view.imog_version = model.imog_version;
    view.strategy = model.strategy;
    view.knowledge = model.knowledge;

    // Functional perspective.
    std::set<ElementId> blocks;
    for (const auto& b : model.functional.blocks) {
        if (filter.keeps(b.level)) {
            view.functional.blocks.push_back(b);
            blocks.insert(b.id);
        }
    }
    auto all_kept = [&](const FpRelation& r) {
        return blocks.count(r.parent) &&
               std::all_of(r.children.begin(), r.children.end(), [&](const ElementId& c) { return blocks.count(c) > 0; });
    };
    std::set<ElementId> kept_vps;
    for (const auto& r : model.functional.relations) {
        if (!connects_variation_points(r.kind) && all_kept(r)) {
            view.functional.relations.push_back(r);
            if (r.variation_point) kept_vps.insert(r.variation_point->id);
        }
    }
    for (const auto& r : model.functional.relations) {
        if (connects_variation_points(r.kind) && kept_vps.count(r.parent) &&
            std::all_of(r.children.begin(), r.children.end(), [&](const ElementId& c) { return kept_vps.count(c) > 0; })) {
            view.functional.relations.push_back(r);
        }
    }
    // Relations were appended in two passes; restore document order.
    {
        std::vector<FpRelation> ordered;
        for (const auto& r : model.functional.relations) {
            auto it = std::find_if(view.functional.relations.begin(), view.functional.relations.end(),
                                   [&](const FpRelation& k) { return k.id == r.id; });
            if (it != view.functional.relations.end()) ordered.push_back(*it);
        }
        view.functional.relations = std::move(ordered);
    }
    for (const auto& g : model.functional.groups) {
        if (std::all_of(g.members.begin(), g.members.end(), [&](const ElementId& m) { return blocks.count(m) > 0; })) {
            view.functional.groups.push_back(g);
        }
    }
    std::set<ElementId> has_parent;
    for (const auto& r : view.functional.relations) {
        if (is_parent_child(r.kind)) has_parent.insert(r.children.begin(), r.children.end());
    }
    std::set<ElementId> roots;
    for (const auto& root : model.functional.roots) {
        if (blocks.count(root) && roots.insert(root).second) view.functional.roots.push_back(root);
    }
    for (const auto& b : view.functional.blocks) {
        if (!has_parent.count(b.id) && roots.insert(b.id).second) view.functional.roots.push_back(b.id);
    }

    // Structural perspective.
    for (const auto& top : model.structural.top_models) {
        view.structural.top_models.push_back({filter.filter_elements(top.elements)});
    }

    // Quality perspective; targets and parents are pruned against the view below.
    for (const auto& req : model.quality) {
        if (filter.keeps(req.level)) view.quality.push_back(req);
    }

    ModelIndex index(view);
    for (auto& top : view.structural.top_models) drop_unresolved_relations(top.elements, index);
    std::set<ElementId> requirements;
    for (const auto& req : view.quality) requirements.insert(req.id);
    for (auto& req : view.quality) {
        std::erase_if(req.targets, [&](const ElementId& t) { return !index.contains(t); });
        if (req.parent && !requirements.count(*req.parent)) {
            req.parent.reset();
            req.parent_type.reset();
        }
    }

    for (const auto& t : model.traces) {
        if (t.kind == TraceKind::Constrains) continue;
        if (index.contains(t.source) && index.contains(t.target)) view.traces.push_back(t);
    }
    materialize_constrains_links(view);
    return view;
}

AbstractionLevel parse_level_name(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "context") return AbstractionLevel::context();
    if (lower == "system") return AbstractionLevel::system();
    if (lower == "component") return AbstractionLevel::component();
    return AbstractionLevel::custom(std::string(name));
}

std::vector<AbstractionLevel> parse_level_list(std::string_view csv) {
    std::vector<AbstractionLevel> out;
    while (!csv.empty()) {
        auto comma = csv.find(',');
        auto item = csv.substr(0, comma);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (!item.empty()) out.push_back(parse_level_name(item));
        if (comma == std::string_view::npos) break;
        csv.remove_prefix(comma + 1);
    }
    return out;
}

}  // namespace imog
