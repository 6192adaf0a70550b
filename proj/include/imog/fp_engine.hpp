#ifndef IMOG_FP_ENGINE_HPP
#define IMOG_FP_ENGINE_HPP

// Configuration semantics of the functional perspective.
//
// A model is normalized into a BasicFeatureTree (plain feature tree plus
// Require/Exclude constraints). Every analysis is exact: it searches the
// space of block selections by backtracking, so results do not depend on
// heuristics. The search size is bounded by EnumerationOptions::max_blocks.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "imog/model.hpp"

namespace imog::fp {

struct Configuration {
    std::set<ElementId> selected;
    /// Chosen option label per Alternative variation point whose parent is selected.
    std::map<ElementId, std::string> vp_choices;

    friend bool operator==(const Configuration&, const Configuration&) = default;
};

enum class GroupKind { Mandatory, Optional, Alternative, Or };

std::string_view to_string(GroupKind kind);

/// One parent-child relation of the tree. Mandatory and Optional groups have
/// one child. Block references are indices into BasicFeatureTree::blocks.
struct TreeGroup {
    ElementId relation;
    GroupKind kind = GroupKind::Mandatory;
    std::size_t parent = 0;
    std::vector<std::size_t> children;
    Cardinality cardinality;  // Alternative: [1,1]; Or: as declared
    std::optional<VariationPoint> variation_point;
};

enum class CrossTreeKind { Require, Exclude };

std::string_view to_string(CrossTreeKind kind);

struct CrossTreeConstraint {
    CrossTreeKind kind = CrossTreeKind::Require;
    std::size_t from = 0;
    std::size_t to = 0;
    /// Relation, group or derivation that produced the constraint.
    ElementId origin;
};

/// Relation that carries no configuration semantics (custom kinds).
struct IgnoredRelation {
    ElementId relation;
    std::string reason;
};

struct BasicFeatureTree {
    /// Block ids sorted ascending; the index is the bit position used for
    /// ordering configurations.
    std::vector<ElementId> blocks;
    std::vector<std::size_t> roots;
    std::vector<TreeGroup> groups;
    std::vector<CrossTreeConstraint> cross_tree;
    std::vector<IgnoredRelation> ignored;

    /// Throws NotFoundError for ids that are not blocks of the tree.
    std::size_t index_of(const ElementId& id) const;
    std::optional<std::size_t> find(const ElementId& id) const;
    std::size_t size() const { return blocks.size(); }
};

/// Rewrites the functional perspective into a basic feature tree.
///
/// Enabled groups become Require constraints between every two members (both
/// directions) when `groups_enabled` is set. A VpDerivation src -> dst adds
/// Require(child of src labelled L -> child of dst labelled L) for each label.
/// Custom relations are listed in `ignored`; a Custom1to1 child keeps its
/// place in the tree as an optional child.
///
/// Throws InvalidModelError when the model has validation errors.
BasicFeatureTree normalize(const Model& model, bool groups_enabled);

struct Violation {
    std::string rule;  // "root", "parent", "mandatory", "alternative", "or", "require", "exclude", "vp-choice"
    std::optional<ElementId> element;
    std::string message;

    friend bool operator==(const Violation&, const Violation&) = default;
};

/// Empty result means the configuration is valid. Throws NotFoundError for
/// selected ids or vp choice keys that the tree does not know.
std::vector<Violation> is_valid_configuration(const BasicFeatureTree& tree, const Configuration& cfg);

struct EnumerationOptions {
    /// Stop after this many configurations; nullopt means all.
    std::optional<std::size_t> max_results;
    /// Largest tree searched without a result cap.
    std::size_t max_blocks = 64;
};

struct EnumerationResult {
    std::vector<Configuration> configurations;
    bool truncated = false;
};

/// All valid configurations in lexicographic order of their selection bit
/// vectors (bit i = blocks[i], unselected before selected).
///
/// Throws CapExceededError when max_results is unset and the tree has more
/// than max_blocks blocks.
EnumerationResult enumerate_configurations(const BasicFeatureTree& tree, const EnumerationOptions& options = {});

struct CountResult {
    std::uint64_t count = 0;
    bool truncated = false;
};

CountResult count_configurations(const BasicFeatureTree& tree, const EnumerationOptions& options = {});

/// Blocks contained in no valid configuration.
std::set<ElementId> dead_blocks(const BasicFeatureTree& tree, const EnumerationOptions& options = {});

bool is_void(const BasicFeatureTree& tree, const EnumerationOptions& options = {});

enum class Decision { In, Out };

std::string_view to_string(Decision decision);
std::optional<Decision> decision_from_string(std::string_view text);

using Decisions = std::map<ElementId, Decision>;

struct Conflict {
    /// Smallest subset of the decisions that is still contradictory.
    Decisions decisions;
    /// A single constraint that contradicts those decisions on its own, if any.
    std::optional<ElementId> constraint;
    std::string message;

    friend bool operator==(const Conflict&, const Conflict&) = default;
};

struct PropagationResult {
    std::set<ElementId> forced_in;
    std::set<ElementId> forced_out;
    std::optional<Conflict> conflict;  // forced sets are empty when set

    friend bool operator==(const PropagationResult&, const PropagationResult&) = default;
};

/// forced_in: blocks selected in every valid configuration consistent with
/// the decisions; forced_out: blocks selected in none.
PropagationResult propagate(const BasicFeatureTree& tree, const Decisions& decisions,
                            const EnumerationOptions& options = {});

}  // namespace imog::fp

#endif  // IMOG_FP_ENGINE_HPP
