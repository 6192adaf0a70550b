#include "imog/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace imog {

bool operator==(const RefinementBlock&, const RefinementBlock&) = default;
bool operator==(const DecompositionModel&, const DecompositionModel&) = default;
bool operator==(const Package&, const Package&) = default;
bool operator==(const SpBlock&, const SpBlock&) = default;

std::string AbstractionLevel::name() const {
    switch (kind) {
    case Kind::Context: return "Context";
    case Kind::System: return "System";
    case Kind::Component: return "Component";
    case Kind::Custom: return custom_name;
    }
    return {};
}

bool is_predefined_level_name(std::string_view name) {
    return name == "Context" || name == "System" || name == "Component";
}

std::optional<double> scalar_number(const Scalar& value) {
    if (const auto* i = std::get_if<std::int64_t>(&value)) return static_cast<double>(*i);
    if (const auto* d = std::get_if<double>(&value)) return *d;
    return std::nullopt;
}

bool scalar_equal(const Scalar& a, const Scalar& b) {
    auto na = scalar_number(a);
    auto nb = scalar_number(b);
    if (na && nb) return *na == *nb;
    return a == b;
}

std::string scalar_to_string(const Scalar& value) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>) {
                return v;
            } else if constexpr (std::is_same_v<T, bool>) {
                return v ? "true" : "false";
            } else if constexpr (std::is_same_v<T, double>) {
                std::ostringstream out;
                out.precision(17);
                out << v;
                return out.str();
            } else {
                return std::to_string(v);
            }
        },
        value);
}

std::string_view to_string(FpRelationKind kind) {
    switch (kind) {
    case FpRelationKind::Mandatory: return "Mandatory";
    case FpRelationKind::Optional: return "Optional";
    case FpRelationKind::Alternative: return "Alternative";
    case FpRelationKind::Or: return "Or";
    case FpRelationKind::Require: return "Require";
    case FpRelationKind::Exclude: return "Exclude";
    case FpRelationKind::CustomConstraint: return "CustomConstraint";
    case FpRelationKind::Custom1to1: return "Custom1to1";
    case FpRelationKind::VpDerivation: return "VpDerivation";
    case FpRelationKind::CustomVp: return "CustomVp";
    }
    return "?";
}

std::optional<FpRelationKind> fp_relation_kind_from_string(std::string_view text) {
    static constexpr FpRelationKind all[] = {
        FpRelationKind::Mandatory,        FpRelationKind::Optional,   FpRelationKind::Alternative,
        FpRelationKind::Or,               FpRelationKind::Require,    FpRelationKind::Exclude,
        FpRelationKind::CustomConstraint, FpRelationKind::Custom1to1, FpRelationKind::VpDerivation,
        FpRelationKind::CustomVp,
    };
    for (auto kind : all) {
        if (to_string(kind) == text) return kind;
    }
    return std::nullopt;
}

bool is_parent_child(FpRelationKind kind) {
    switch (kind) {
    case FpRelationKind::Mandatory:
    case FpRelationKind::Optional:
    case FpRelationKind::Alternative:
    case FpRelationKind::Or:
    case FpRelationKind::Custom1to1:
        return true;
    default:
        return false;
    }
}

bool is_custom_kind(FpRelationKind kind) {
    return kind == FpRelationKind::CustomConstraint || kind == FpRelationKind::Custom1to1 ||
           kind == FpRelationKind::CustomVp;
}

bool connects_variation_points(FpRelationKind kind) {
    return kind == FpRelationKind::VpDerivation || kind == FpRelationKind::CustomVp;
}

std::string Assignee::name() const {
    switch (kind) {
    case Kind::OEM: return "OEM";
    case Kind::Tier1: return "Tier1";
    case Kind::Tier2: return "Tier2";
    case Kind::Custom: return custom_name;
    }
    return {};
}

const std::vector<std::string_view>& predefined_requirement_stereotypes() {
    static const std::vector<std::string_view> names = {
        "Quality Requirement",
        "Performance Requirement",
        "Technical Professional Guess",
        "User Need (non functional)",
        "Constraint",
        "Safety Requirement",
        "Security Requirement",
        "Legal Constraint",
        "Technology Requirement",
        kStatusDiscarded,
        kStatusProposed,
        kStatusConfirmed,
    };
    return names;
}

RequirementStatus Requirement::status() const {
    for (const auto& s : stereotypes) {
        if (s == kStatusDiscarded) return RequirementStatus::Discarded;
        if (s == kStatusProposed) return RequirementStatus::Proposed;
        if (s == kStatusConfirmed) return RequirementStatus::Confirmed;
    }
    return RequirementStatus::Confirmed;
}

std::string SpBlockStereotype::name() const {
    switch (kind) {
    case Kind::Environment: return "Environment";
    case Kind::Innovation: return "Innovation";
    case Kind::Logic: return "Logic";
    case Kind::Service: return "Service";
    case Kind::Part: return "Part";
    case Kind::Hardware: return "Hardware";
    case Kind::Software: return "Software";
    case Kind::Custom: return custom_name;
    }
    return {};
}

std::string RefinementStereotype::name() const {
    switch (kind) {
    case Kind::Technology: return "Technology";
    case Kind::MissionProfile: return "MissionProfile";
    case Kind::Application: return "Application";
    case Kind::Custom: return custom_name;
    }
    return {};
}

ElementId constrains_link_id(const ElementId& requirement, const ElementId& target) {
    return ElementId(requirement.str() + "/constrains/" + target.str());
}

void materialize_constrains_links(Model& model) {
    std::erase_if(model.traces, [](const TraceLink& l) { return l.kind == TraceKind::Constrains; });
    for (const auto& req : model.quality) {
        std::set<ElementId> seen;
        for (const auto& target : req.targets) {
            if (!seen.insert(target).second) continue;
            model.traces.push_back({constrains_link_id(req.id, target), TraceKind::Constrains, req.id, target});
        }
    }
}

std::string_view to_string(FpBlockKind kind) {
    return kind == FpBlockKind::Feature ? "Feature" : "Function";
}

std::string_view to_string(ParentChildType type) {
    return type == ParentChildType::Decomposition ? "Decomposition" : "Refinement";
}

std::string_view to_string(SpRelationKind kind) {
    switch (kind) {
    case SpRelationKind::Channel: return "Channel";
    case SpRelationKind::Arrow: return "Arrow";
    case SpRelationKind::Effect: return "Effect";
    }
    return "?";
}

std::string_view to_string(Direction direction) {
    return direction == Direction::Unidirectional ? "Unidirectional" : "Bidirectional";
}

std::string_view to_string(EffectType type) {
    switch (type) {
    case EffectType::Desired: return "Desired";
    case EffectType::Undesired: return "Undesired";
    case EffectType::Misuse: return "Misuse";
    }
    return "?";
}

std::string_view to_string(TraceKind kind) {
    switch (kind) {
    case TraceKind::References: return "References";
    case TraceKind::Constrains: return "Constrains";
    case TraceKind::Allocate: return "Allocate";
    }
    return "?";
}

std::string_view to_string(RequirementStatus status) {
    switch (status) {
    case RequirementStatus::Confirmed: return "Confirmed";
    case RequirementStatus::Proposed: return "Proposed";
    case RequirementStatus::Discarded: return "Discarded";
    }
    return "?";
}

}  // namespace imog
