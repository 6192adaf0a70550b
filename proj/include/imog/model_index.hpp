#ifndef IMOG_MODEL_INDEX_HPP
#define IMOG_MODEL_INDEX_HPP

#include <optional>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "imog/model.hpp"

namespace imog {

enum class Perspective { Strategy, Functional, Quality, Structural, Knowledge, Trace };

std::string_view to_string(Perspective perspective);

enum class ElementKind {
    IdentifiableElement,
    FpBlock,
    FpRelation,
    VariationPoint,
    FpGroup,
    Requirement,
    SpBlock,
    RefinementGroup,
    RefinementBlock,
    SpRelation,
    Package,
    Note,
    KnowledgeEntry,
    TraceLink,
};

std::string_view to_string(ElementKind kind);

/// Non-owning view of one identified element. Valid while the Model lives.
struct ElementHandle {
    using Pointer = std::variant<const IdentifiableElement*, const FpBlock*, const FpRelation*, const VariationPoint*,
                                 const FpGroup*, const Requirement*, const SpBlock*, const RefinementGroup*,
                                 const RefinementBlock*, const SpRelation*, const Package*, const Note*,
                                 const KnowledgeEntry*, const TraceLink*>;

    ElementId id;
    Perspective perspective = Perspective::Strategy;
    ElementKind kind = ElementKind::IdentifiableElement;
    Pointer element;
    /// Relation owning a variation point, or block owning a variant.
    const void* owner = nullptr;

    template <class T>
    const T* as() const {
        if (const auto* p = std::get_if<const T*>(&element)) return *p;
        return nullptr;
    }
};

/// Id lookup over every identified element of a Model, built in one walk.
class ModelIndex {
public:
    explicit ModelIndex(const Model& model);

    const ElementHandle* find(const ElementId& id) const;
    bool contains(const ElementId& id) const { return find(id) != nullptr; }
    bool is(const ElementId& id, ElementKind kind) const;

    template <class T>
    const T* get(const ElementId& id) const {
        const auto* h = find(id);
        return h ? h->as<T>() : nullptr;
    }

    /// Every element in document order, duplicates included.
    const std::vector<ElementHandle>& all() const { return all_; }
    /// Ids seen more than once, in first-seen order.
    const std::vector<ElementId>& duplicates() const { return duplicates_; }

    /// Owning relation for a variation point id.
    const FpRelation* relation_of_variation_point(const ElementId& vp) const;

private:
    void add(ElementHandle handle);
    void walk_decomposition(const std::vector<DecompositionElement>& elements);
    void walk_sp_block(const SpBlock& block, const SpBlock* owner);
    void walk_refinement_group(const RefinementGroup& group);

    std::vector<ElementHandle> all_;
    std::unordered_map<ElementId, std::size_t> first_;
    std::vector<ElementId> duplicates_;
};

/// Throws NotFoundError when no element has this id.
ElementHandle resolve_reference(const Model& model, const ElementId& id);

/// Calls fn(block, owner) for every SpBlock reachable in the structural
/// perspective, depth first in document order; owner is the block a variant
/// belongs to, or nullptr.
template <class Fn>
void for_each_sp_block(const std::vector<DecompositionElement>& elements, Fn&& fn);

namespace detail {
template <class Fn>
void visit_sp_block(const SpBlock& block, const SpBlock* owner, Fn& fn);

template <class Fn>
void visit_sp_elements(const std::vector<DecompositionElement>& elements, Fn& fn) {
    for (const auto& element : elements) {
        if (const auto* block = std::get_if<SpBlock>(&element.value)) {
            visit_sp_block(*block, nullptr, fn);
        } else if (const auto* package = std::get_if<Package>(&element.value)) {
            visit_sp_elements(package->elements, fn);
        }
    }
}

template <class Fn>
void visit_sp_block(const SpBlock& block, const SpBlock* owner, Fn& fn) {
    fn(block, owner);
    if (block.decomposition) visit_sp_elements(block.decomposition->elements, fn);
    for (const auto& variant : block.variants) visit_sp_block(variant, &block, fn);
}
}  // namespace detail

template <class Fn>
void for_each_sp_block(const std::vector<DecompositionElement>& elements, Fn&& fn) {
    detail::visit_sp_elements(elements, fn);
}

template <class Fn>
void for_each_sp_block(const Model& model, Fn&& fn) {
    for (const auto& top : model.structural.top_models) detail::visit_sp_elements(top.elements, fn);
}

}  // namespace imog

#endif  // IMOG_MODEL_INDEX_HPP
