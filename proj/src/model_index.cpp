#include "imog/model_index.hpp"

#include "imog/errors.hpp"

namespace imog {

std::string_view to_string(Perspective perspective) {
    switch (perspective) {
    case Perspective::Strategy: return "Strategy";
    case Perspective::Functional: return "Functional";
    case Perspective::Quality: return "Quality";
    case Perspective::Structural: return "Structural";
    case Perspective::Knowledge: return "Knowledge";
    case Perspective::Trace: return "Trace";
    }
    return "?";
}

std::string_view to_string(ElementKind kind) {
    switch (kind) {
    case ElementKind::IdentifiableElement: return "IdentifiableElement";
    case ElementKind::FpBlock: return "FpBlock";
    case ElementKind::FpRelation: return "FpRelation";
    case ElementKind::VariationPoint: return "VariationPoint";
    case ElementKind::FpGroup: return "FpGroup";
    case ElementKind::Requirement: return "Requirement";
    case ElementKind::SpBlock: return "SpBlock";
    case ElementKind::RefinementGroup: return "RefinementGroup";
    case ElementKind::RefinementBlock: return "RefinementBlock";
    case ElementKind::SpRelation: return "SpRelation";
    case ElementKind::Package: return "Package";
    case ElementKind::Note: return "Note";
    case ElementKind::KnowledgeEntry: return "KnowledgeEntry";
    case ElementKind::TraceLink: return "TraceLink";
    }
    return "?";
}

ModelIndex::ModelIndex(const Model& model) {
    for (const auto& div : model.strategy) {
        for (const auto& e : div.embedded_elements) {
            add({e.id, Perspective::Strategy, ElementKind::IdentifiableElement, &e});
        }
    }
    const auto& fp = model.functional;
    for (const auto& b : fp.blocks) add({b.id, Perspective::Functional, ElementKind::FpBlock, &b});
    for (const auto& r : fp.relations) {
        add({r.id, Perspective::Functional, ElementKind::FpRelation, &r});
        if (r.variation_point) {
            add({r.variation_point->id, Perspective::Functional, ElementKind::VariationPoint, &*r.variation_point,
                 &r});
        }
    }
    for (const auto& g : fp.groups) add({g.id, Perspective::Functional, ElementKind::FpGroup, &g});
    for (const auto& req : model.quality) add({req.id, Perspective::Quality, ElementKind::Requirement, &req});
    for (const auto& top : model.structural.top_models) walk_decomposition(top.elements);
    for (const auto& k : model.knowledge) add({k.id, Perspective::Knowledge, ElementKind::KnowledgeEntry, &k});
    for (const auto& t : model.traces) add({t.id, Perspective::Trace, ElementKind::TraceLink, &t});
}

void ModelIndex::add(ElementHandle handle) {
    all_.push_back(handle);
    auto [it, inserted] = first_.emplace(handle.id, all_.size() - 1);
    if (!inserted) {
        bool already = false;
        for (const auto& d : duplicates_) already = already || d == handle.id;
        if (!already) duplicates_.push_back(handle.id);
    }
}

void ModelIndex::walk_decomposition(const std::vector<DecompositionElement>& elements) {
    for (const auto& element : elements) {
        std::visit(
            [&](const auto& value) {
                using T = std::decay_t<decltype(value)>;
                if constexpr (std::is_same_v<T, SpBlock>) {
                    walk_sp_block(value, nullptr);
                } else if constexpr (std::is_same_v<T, SpRelation>) {
                    add({value.id, Perspective::Structural, ElementKind::SpRelation, &value});
                } else if constexpr (std::is_same_v<T, Package>) {
                    add({value.id, Perspective::Structural, ElementKind::Package, &value});
                    walk_decomposition(value.elements);
                } else {
                    add({value.id, Perspective::Structural, ElementKind::Note, &value});
                }
            },
            element.value);
    }
}

void ModelIndex::walk_sp_block(const SpBlock& block, const SpBlock* owner) {
    add({block.id, Perspective::Structural, ElementKind::SpBlock, &block, owner});
    for (const auto& g : block.refinement_groups) walk_refinement_group(g);
    if (block.decomposition) walk_decomposition(block.decomposition->elements);
    for (const auto& v : block.variants) walk_sp_block(v, &block);
}

void ModelIndex::walk_refinement_group(const RefinementGroup& group) {
    add({group.id, Perspective::Structural, ElementKind::RefinementGroup, &group});
    for (const auto& rb : group.blocks) {
        add({rb.id, Perspective::Structural, ElementKind::RefinementBlock, &rb, &group});
        for (const auto& nested : rb.refinement_groups) walk_refinement_group(nested);
    }
}

const ElementHandle* ModelIndex::find(const ElementId& id) const {
    auto it = first_.find(id);
    return it == first_.end() ? nullptr : &all_[it->second];
}

bool ModelIndex::is(const ElementId& id, ElementKind kind) const {
    const auto* h = find(id);
    return h && h->kind == kind;
}

const FpRelation* ModelIndex::relation_of_variation_point(const ElementId& vp) const {
    const auto* h = find(vp);
    if (!h || h->kind != ElementKind::VariationPoint) return nullptr;
    return static_cast<const FpRelation*>(h->owner);
}

ElementHandle resolve_reference(const Model& model, const ElementId& id) {
    ModelIndex index(model);
    const auto* h = index.find(id);
    if (!h) throw NotFoundError(id);
    return *h;
}

}  // namespace imog
