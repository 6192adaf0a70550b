#ifndef IMOG_MODEL_HPP
#define IMOG_MODEL_HPP

// Domain types for the five IMoG perspectives and the trace links between them.
//
// Models are plain values. Nested structures (variants, decompositions,
// refinement groups) are owned by their container, so containment is a tree
// by construction. Cross references are ElementIds resolved through
// ModelIndex.

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace imog {

/// Author-assigned identifier, unique across every element of one Model.
class ElementId {
public:
    ElementId() = default;
    ElementId(std::string value) : value_(std::move(value)) {}
    ElementId(const char* value) : value_(value) {}

    const std::string& str() const noexcept { return value_; }
    bool empty() const noexcept { return value_.empty(); }

    friend bool operator==(const ElementId&, const ElementId&) = default;
    friend auto operator<=>(const ElementId&, const ElementId&) = default;

private:
    std::string value_;
};

inline std::string_view to_string_view(const ElementId& id) { return id.str(); }

struct AbstractionLevel {
    enum class Kind { Context, System, Component, Custom };

    Kind kind = Kind::Context;
    std::string custom_name;  // only meaningful for Kind::Custom

    static AbstractionLevel context() { return {Kind::Context, {}}; }
    static AbstractionLevel system() { return {Kind::System, {}}; }
    static AbstractionLevel component() { return {Kind::Component, {}}; }
    static AbstractionLevel custom(std::string name) { return {Kind::Custom, std::move(name)}; }

    /// "Context", "System", "Component" or the custom name.
    std::string name() const;

    friend bool operator==(const AbstractionLevel&, const AbstractionLevel&) = default;
    friend auto operator<=>(const AbstractionLevel&, const AbstractionLevel&) = default;
};

bool is_predefined_level_name(std::string_view name);

/// Property and attribute values. Integers and reals are kept apart so that
/// documents round-trip without reformatting numbers.
using Scalar = std::variant<std::int64_t, double, std::string, bool>;

/// Equality that treats 12 and 12.0 as the same number.
bool scalar_equal(const Scalar& a, const Scalar& b);
std::optional<double> scalar_number(const Scalar& value);
std::string scalar_to_string(const Scalar& value);

struct Property {
    std::string name;
    Scalar value;
    std::optional<std::string> unit;

    friend bool operator==(const Property&, const Property&) = default;
};

inline constexpr std::string_view kAvailabilityProperty = "Availability";
inline constexpr std::string_view kFeasibilityProperty = "Feasibility";

// ---------------------------------------------------------------------------
// Strategy perspective

struct IdentifiableElement {
    ElementId id;
    std::string category;
    std::string text;
    std::optional<Scalar> value;
    std::vector<std::string> discussion;
    std::string version;

    friend bool operator==(const IdentifiableElement&, const IdentifiableElement&) = default;
};

struct StrategyDiv {
    std::optional<std::string> name;
    std::string html_content;  // opaque, round-tripped verbatim
    std::vector<IdentifiableElement> embedded_elements;

    friend bool operator==(const StrategyDiv&, const StrategyDiv&) = default;
};

// ---------------------------------------------------------------------------
// Functional perspective

enum class FpBlockKind { Feature, Function };

struct FpBlock {
    ElementId id;
    std::string name;
    FpBlockKind kind = FpBlockKind::Feature;
    AbstractionLevel level;
    std::optional<std::string> custom_block_type;
    std::string description;
    std::vector<Property> custom_properties;
    std::vector<std::string> user_stories;
    std::vector<std::string> discussion;
    std::string version;

    friend bool operator==(const FpBlock&, const FpBlock&) = default;
};

enum class FpRelationKind {
    Mandatory,
    Optional,
    Alternative,
    Or,
    Require,
    Exclude,
    CustomConstraint,
    Custom1to1,
    VpDerivation,
    CustomVp,
};

std::string_view to_string(FpRelationKind kind);
std::optional<FpRelationKind> fp_relation_kind_from_string(std::string_view text);

/// Kinds whose parent/children describe the feature tree.
bool is_parent_child(FpRelationKind kind);
/// Kinds that carry a user supplied type name.
bool is_custom_kind(FpRelationKind kind);
/// Kinds whose endpoints are variation point ids rather than block ids.
bool connects_variation_points(FpRelationKind kind);

enum class ParentChildType { Decomposition, Refinement };

struct Cardinality {
    int min = 1;
    int max = 1;

    friend bool operator==(const Cardinality&, const Cardinality&) = default;
};

struct VariationPoint {
    ElementId id;
    std::string label;
    std::vector<std::string> option_labels;  // option_labels[i] names children[i]

    friend bool operator==(const VariationPoint&, const VariationPoint&) = default;
};

/// One relation of the functional perspective. For constraint kinds the
/// parent is the constraining block (A in A -> B) and the single child is
/// the constrained one. For variation point kinds both endpoints are
/// variation point ids.
struct FpRelation {
    ElementId id;
    FpRelationKind kind = FpRelationKind::Mandatory;
    std::string custom_type;
    ElementId parent;
    std::vector<ElementId> children;
    std::optional<ParentChildType> pc_type;
    std::optional<Cardinality> cardinality;
    std::optional<VariationPoint> variation_point;

    friend bool operator==(const FpRelation&, const FpRelation&) = default;
};

struct FpGroup {
    ElementId id;
    std::vector<ElementId> members;
    bool enabled = true;

    friend bool operator==(const FpGroup&, const FpGroup&) = default;
};

struct FunctionalModel {
    std::vector<FpBlock> blocks;
    std::vector<FpRelation> relations;
    std::vector<FpGroup> groups;
    std::vector<ElementId> roots;

    friend bool operator==(const FunctionalModel&, const FunctionalModel&) = default;
};

// ---------------------------------------------------------------------------
// Quality perspective

struct FutureAvailability {
    std::optional<int> year;  // nullopt means "Now"

    static FutureAvailability now() { return {}; }
    static FutureAvailability in_year(int y) { return {y}; }
    bool is_now() const { return !year.has_value(); }

    friend bool operator==(const FutureAvailability&, const FutureAvailability&) = default;
    // Now orders before every year.
    friend auto operator<=>(const FutureAvailability&, const FutureAvailability&) = default;
};

struct Assignee {
    enum class Kind { OEM, Tier1, Tier2, Custom };
    Kind kind = Kind::OEM;
    std::string custom_name;

    std::string name() const;

    friend bool operator==(const Assignee&, const Assignee&) = default;
};

inline constexpr std::string_view kStatusDiscarded = "Discarded";
inline constexpr std::string_view kStatusProposed = "Proposed";
inline constexpr std::string_view kStatusConfirmed = "Confirmed";

/// Predefined requirement stereotypes: categorization first, then status.
const std::vector<std::string_view>& predefined_requirement_stereotypes();

enum class RequirementStatus { Confirmed, Proposed, Discarded };

struct Requirement {
    ElementId id;
    std::optional<std::int64_t> priority;
    std::string name;
    std::string text;
    double satisfiability = 1.0;
    FutureAvailability future_availability;
    std::vector<std::string> stereotypes;
    AbstractionLevel level;
    std::optional<Assignee> assignee;
    std::optional<ElementId> parent;
    std::optional<ParentChildType> parent_type;
    std::vector<ElementId> targets;
    std::vector<Property> custom_attributes;
    std::string reasoning;
    std::vector<std::string> discussion;
    std::string version;

    /// First status stereotype found; Confirmed when none is given.
    RequirementStatus status() const;

    friend bool operator==(const Requirement&, const Requirement&) = default;
};

// ---------------------------------------------------------------------------
// Structural perspective

struct SolutionSpaceDescription {
    std::string payload;  // PMML document, never interpreted
    std::vector<std::string> input_properties;
    std::vector<std::string> output_properties;

    friend bool operator==(const SolutionSpaceDescription&, const SolutionSpaceDescription&) = default;
};

struct SpBlockStereotype {
    enum class Kind { Environment, Innovation, Logic, Service, Part, Hardware, Software, Custom };
    Kind kind = Kind::Part;
    std::string custom_name;

    std::string name() const;

    friend bool operator==(const SpBlockStereotype&, const SpBlockStereotype&) = default;
};

struct RefinementStereotype {
    enum class Kind { Technology, MissionProfile, Application, Custom };
    Kind kind = Kind::Technology;
    std::string custom_name;

    std::string name() const;

    friend bool operator==(const RefinementStereotype&, const RefinementStereotype&) = default;
};

struct RefinementGroup;

struct RefinementBlock {
    ElementId id;
    std::string name;
    std::string description;
    std::optional<RefinementStereotype> stereotype;
    std::vector<Property> properties;
    std::vector<RefinementGroup> refinement_groups;
    std::vector<std::string> discussion;
    std::string version;

    friend bool operator==(const RefinementBlock&, const RefinementBlock&);
};

struct RefinementGroup {
    ElementId id;
    std::string name;
    std::vector<RefinementBlock> blocks;
    std::optional<ElementId> selected_refinement;

    friend bool operator==(const RefinementGroup&, const RefinementGroup&) = default;
};

enum class SpRelationKind { Channel, Arrow, Effect };
enum class Direction { Unidirectional, Bidirectional };
enum class EffectType { Desired, Undesired, Misuse };

struct SpRelation {
    ElementId id;
    SpRelationKind kind = SpRelationKind::Channel;
    ElementId source;
    ElementId target;
    std::optional<Direction> direction;
    std::optional<std::string> label;
    std::string description;
    std::optional<std::string> stereotype;
    std::vector<Property> properties;
    std::optional<EffectType> effect_type;
    std::optional<std::string> endpoint_type;
    std::vector<std::string> notes;
    std::vector<std::string> discussion;
    std::string version;

    friend bool operator==(const SpRelation&, const SpRelation&) = default;
};

struct Note {
    ElementId id;
    std::string text;

    friend bool operator==(const Note&, const Note&) = default;
};

struct DecompositionElement;

struct DecompositionModel {
    std::vector<DecompositionElement> elements;

    friend bool operator==(const DecompositionModel&, const DecompositionModel&);
};

struct Package {
    ElementId id;
    std::string name;
    std::vector<DecompositionElement> elements;

    friend bool operator==(const Package&, const Package&);
};

struct SpBlock {
    ElementId id;
    std::string name;
    std::string description;
    AbstractionLevel level;
    std::optional<SpBlockStereotype> stereotype;
    std::vector<Property> properties;
    std::optional<SolutionSpaceDescription> sse;
    std::optional<std::string> internal_model_ref;
    std::optional<DecompositionModel> decomposition;
    std::vector<RefinementGroup> refinement_groups;
    std::vector<SpBlock> variants;
    std::optional<ElementId> parent_block;
    std::optional<ElementId> selected_variant;
    std::vector<std::string> discussion;
    std::string version;

    friend bool operator==(const SpBlock&, const SpBlock&);
};

struct DecompositionElement {
    std::variant<SpBlock, SpRelation, Package, Note> value;

    friend bool operator==(const DecompositionElement&, const DecompositionElement&) = default;
};

struct StructuralModel {
    std::vector<DecompositionModel> top_models;

    friend bool operator==(const StructuralModel&, const StructuralModel&) = default;
};

// ---------------------------------------------------------------------------
// Domain knowledge and traces

struct KnowledgeEntry {
    ElementId id;
    std::string name;
    std::string type;
    std::optional<int> year_of_availability;
    std::vector<Property> properties;

    friend bool operator==(const KnowledgeEntry&, const KnowledgeEntry&) = default;
};

enum class TraceKind { References, Constrains, Allocate };

struct TraceLink {
    ElementId id;
    TraceKind kind = TraceKind::Allocate;
    ElementId source;
    ElementId target;

    friend bool operator==(const TraceLink&, const TraceLink&) = default;
};

inline constexpr std::string_view kImogVersion = "1.4";

struct Model {
    std::string imog_version{kImogVersion};
    std::vector<StrategyDiv> strategy;
    FunctionalModel functional;
    std::vector<Requirement> quality;
    StructuralModel structural;
    std::vector<KnowledgeEntry> knowledge;
    std::vector<TraceLink> traces;

    friend bool operator==(const Model&, const Model&) = default;
};

/// Id given to the Constrains link derived from a requirement target.
ElementId constrains_link_id(const ElementId& requirement, const ElementId& target);

/// Rebuilds the Constrains links from Requirement::targets: one link per
/// distinct target, appended after the other links in requirement order.
void materialize_constrains_links(Model& model);

std::string_view to_string(FpBlockKind kind);
std::string_view to_string(ParentChildType type);
std::string_view to_string(SpRelationKind kind);
std::string_view to_string(Direction direction);
std::string_view to_string(EffectType type);
std::string_view to_string(TraceKind kind);
std::string_view to_string(RequirementStatus status);

}  // namespace imog

template <>
struct std::hash<imog::ElementId> {
    std::size_t operator()(const imog::ElementId& id) const noexcept {
        return std::hash<std::string>{}(id.str());
    }
};

#endif  // IMOG_MODEL_HPP
