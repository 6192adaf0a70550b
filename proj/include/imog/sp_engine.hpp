#ifndef IMOG_SP_ENGINE_HPP
#define IMOG_SP_ENGINE_HPP

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "imog/diagnostic.hpp"
#include "imog/model.hpp"

namespace imog::sp {

/// What-if choices layered over the selections stored in the model.
/// A variant choice of nullopt means "no variant", overriding a stored default.
struct SelectionState {
    std::map<ElementId, std::optional<ElementId>> variant_choices;
    std::map<ElementId, ElementId> refinement_choices;

    friend bool operator==(const SelectionState&, const SelectionState&) = default;
};

enum class PropertyOrigin { Base, Variant, Refinement };

std::string_view to_string(PropertyOrigin origin);

struct EffectiveProperty {
    Property property;
    PropertyOrigin origin = PropertyOrigin::Base;
    ElementId source;  // block, variant or refinement block that supplied the value

    friend bool operator==(const EffectiveProperty&, const EffectiveProperty&) = default;
};

struct ProvenanceStep {
    std::string rule;  // variant, property, sse, decomposition, refinement-group, refinement
    ElementId source;
    std::string detail;

    friend bool operator==(const ProvenanceStep&, const ProvenanceStep&) = default;
};

struct EffectiveBlock {
    ElementId id;
    std::string name;
    std::string description;
    AbstractionLevel level;
    std::optional<SpBlockStereotype> stereotype;
    std::vector<std::string> discussion;
    std::string version;
    std::vector<EffectiveProperty> properties;
    std::optional<DecompositionModel> decomposition;
    /// Empty when no SSE applies; several parts when a variant extends the base.
    std::vector<SolutionSpaceDescription> sse;
    /// selected_refinement reflects the choice actually used.
    std::vector<RefinementGroup> refinement_groups;
    /// Variant first, then its owner.
    std::vector<std::string> internal_model_refs;
    /// Chain of applied variants, outermost first.
    std::vector<ElementId> applied_variants;
    std::vector<ProvenanceStep> provenance;

    const EffectiveProperty* property(std::string_view name) const;

    friend bool operator==(const EffectiveBlock&, const EffectiveBlock&) = default;
};

/// Applies the variant and refinement selections to one structural block.
/// Throws NotFoundError when block_id is not a structural block and
/// IllegalSelectionError when a choice does not name a member of its owner.
EffectiveBlock resolve_effective_block(const Model& model, const ElementId& block_id, const SelectionState& sel = {});

/// Every structural block (variants included) resolved under sel.
std::map<ElementId, EffectiveBlock> resolve_all(const Model& model, const SelectionState& sel = {});

/// SP-PROP and SP-REQCONFLICT findings, sorted.
std::vector<Diagnostic> check_sp_consistency(const Model& model, const std::map<ElementId, EffectiveBlock>& resolved);

}  // namespace imog::sp

#endif  // IMOG_SP_ENGINE_HPP
