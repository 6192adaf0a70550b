#include "imog/sp_engine.hpp"

#include <algorithm>
#include <set>

#include "imog/errors.hpp"
#include "imog/model_index.hpp"

namespace imog::sp {

std::string_view to_string(PropertyOrigin origin) {
    switch (origin) {
    case PropertyOrigin::Base: return "Base";
    case PropertyOrigin::Variant: return "Variant";
    case PropertyOrigin::Refinement: return "Refinement";
    }
    return "Base";
}

const EffectiveProperty* EffectiveBlock::property(std::string_view name) const {
    for (const auto& p : properties) {
        if (p.property.name == name) return &p;
    }
    return nullptr;
}

namespace {

std::string describe(const Property& p) {
    return scalar_to_string(p.value) + (p.unit ? " " + *p.unit : "");
}

std::set<std::string> sse_names(const std::vector<SolutionSpaceDescription>& parts) {
    std::set<std::string> names;
    for (const auto& s : parts) {
        names.insert(s.input_properties.begin(), s.input_properties.end());
        names.insert(s.output_properties.begin(), s.output_properties.end());
    }
    return names;
}

// Every choice must name a real member of its owner, whether or not the
// owner is part of the block being resolved.
void check_selection(const ModelIndex& index, const SelectionState& sel) {
    for (const auto& [owner, choice] : sel.variant_choices) {
        const auto* block = index.get<SpBlock>(owner);
        if (!block) throw IllegalSelectionError(owner, "not a structural block");
        if (!choice) continue;
        bool member = std::any_of(block->variants.begin(), block->variants.end(),
                                  [&](const SpBlock& v) { return v.id == *choice; });
        if (!member) throw IllegalSelectionError(owner, "'" + choice->str() + "' is not one of its variants");
    }
    for (const auto& [owner, choice] : sel.refinement_choices) {
        const auto* group = index.get<RefinementGroup>(owner);
        if (!group) throw IllegalSelectionError(owner, "not a refinement group");
        bool member = std::any_of(group->blocks.begin(), group->blocks.end(),
                                  [&](const RefinementBlock& rb) { return rb.id == choice; });
        if (!member) throw IllegalSelectionError(owner, "'" + choice.str() + "' is not one of its refinement blocks");
    }
}

class Resolver {
public:
    explicit Resolver(const SelectionState& sel) : sel_(sel) {}

    EffectiveBlock resolve(const SpBlock& block) {
        auto e = merge(block);
        for (auto& g : e.refinement_groups) apply_group(e, g);
        return e;
    }

private:
    static EffectiveBlock base_of(const SpBlock& b) {
        EffectiveBlock e;
        e.id = b.id;
        e.name = b.name;
        e.description = b.description;
        e.level = b.level;
        e.stereotype = b.stereotype;
        e.discussion = b.discussion;
        e.version = b.version;
        for (const auto& p : b.properties) e.properties.push_back({p, PropertyOrigin::Base, b.id});
        e.decomposition = b.decomposition;
        if (b.sse) e.sse.push_back(*b.sse);
        e.refinement_groups = b.refinement_groups;
        if (b.internal_model_ref) e.internal_model_refs.push_back(*b.internal_model_ref);
        return e;
    }

    std::optional<ElementId> chosen_variant(const SpBlock& b) const {
        auto it = sel_.variant_choices.find(b.id);
        if (it != sel_.variant_choices.end()) return it->second;
        return b.selected_variant;
    }

    // Variant rules without refinements; those apply once, on the final groups.
    EffectiveBlock merge(const SpBlock& b) {
        auto e = base_of(b);
        const auto choice = chosen_variant(b);
        if (!choice) return e;
        auto it = std::find_if(b.variants.begin(), b.variants.end(), [&](const SpBlock& v) { return v.id == *choice; });
        if (it == b.variants.end()) throw IllegalSelectionError(b.id, "'" + choice->str() + "' is not one of its variants");
        overlay(e, merge(*it));
        return e;
    }

    static void overlay(EffectiveBlock& e, EffectiveBlock v) {
        const ElementId vid = v.id;
        // The variant's own history comes first: it was applied before this step.
        std::vector<ProvenanceStep> steps = std::move(v.provenance);
        steps.push_back({"variant", vid, "variant '" + vid.str() + "' selected for '" + e.id.str() + "'"});

        auto overwrite = [&](const char* field, auto& target, const auto& value, bool present) {
            if (!present || target == value) return;
            target = value;
            steps.push_back({"variant", vid, std::string(field) + " overwritten"});
        };
        overwrite("name", e.name, v.name, !v.name.empty());
        overwrite("description", e.description, v.description, !v.description.empty());
        overwrite("level", e.level, v.level, true);
        overwrite("stereotype", e.stereotype, v.stereotype, v.stereotype.has_value());
        overwrite("discussion", e.discussion, v.discussion, !v.discussion.empty());
        overwrite("version", e.version, v.version, !v.version.empty());

        for (auto& p : v.properties) {
            p.origin = PropertyOrigin::Variant;
            auto same = std::find_if(e.properties.begin(), e.properties.end(),
                                     [&](const EffectiveProperty& q) { return q.property.name == p.property.name; });
            if (same != e.properties.end()) {
                steps.push_back({"property", p.source,
                                 "'" + p.property.name + "' " + describe(same->property) + " -> " + describe(p.property)});
                *same = std::move(p);
            } else {
                steps.push_back({"property", p.source, "'" + p.property.name + "' added"});
                e.properties.push_back(std::move(p));
            }
        }

        if (!v.sse.empty()) {
            if (e.sse.empty()) {
                e.sse = std::move(v.sse);
                steps.push_back({"sse", vid, "variant SSE used"});
            } else {
                const auto mine = sse_names(e.sse), theirs = sse_names(v.sse);
                std::size_t common = 0;
                for (const auto& n : theirs) common += mine.count(n);
                if (common <= 1) {
                    e.sse.insert(e.sse.end(), v.sse.begin(), v.sse.end());
                    steps.push_back({"sse", vid, "extended (" + std::to_string(common) + " common properties)"});
                } else {
                    e.sse = std::move(v.sse);
                    steps.push_back({"sse", vid, "replaced (" + std::to_string(common) + " common properties)"});
                }
            }
        }

        if (v.decomposition) {
            if (!e.decomposition) e.decomposition = DecompositionModel{};
            auto& into = e.decomposition->elements;
            into.insert(into.end(), v.decomposition->elements.begin(), v.decomposition->elements.end());
            steps.push_back({"decomposition", vid,
                             std::to_string(v.decomposition->elements.size()) + " elements added"});
        }

        for (auto& g : v.refinement_groups) {
            auto same = std::find_if(e.refinement_groups.begin(), e.refinement_groups.end(),
                                     [&](const RefinementGroup& h) { return h.name == g.name; });
            if (same != e.refinement_groups.end()) {
                steps.push_back({"refinement-group", g.id, "'" + g.name + "' replaces " + same->id.str()});
                *same = std::move(g);
            } else {
                steps.push_back({"refinement-group", g.id, "'" + g.name + "' added"});
                e.refinement_groups.push_back(std::move(g));
            }
        }

        v.internal_model_refs.insert(v.internal_model_refs.end(), e.internal_model_refs.begin(),
                                     e.internal_model_refs.end());
        e.internal_model_refs = std::move(v.internal_model_refs);

        e.applied_variants.insert(e.applied_variants.begin(), vid);
        e.applied_variants.insert(e.applied_variants.end(), v.applied_variants.begin(), v.applied_variants.end());
        e.provenance.insert(e.provenance.end(), steps.begin(), steps.end());
    }

    void apply_group(EffectiveBlock& e, RefinementGroup& g) {
        std::optional<ElementId> choice = g.selected_refinement;
        if (auto it = sel_.refinement_choices.find(g.id); it != sel_.refinement_choices.end()) choice = it->second;
        if (!choice) return;
        auto rb = std::find_if(g.blocks.begin(), g.blocks.end(), [&](const RefinementBlock& b) { return b.id == *choice; });
        if (rb == g.blocks.end()) throw IllegalSelectionError(g.id, "'" + choice->str() + "' is not one of its refinement blocks");
        g.selected_refinement = choice;
        e.provenance.push_back({"refinement", rb->id, "'" + rb->name + "' selected in '" + g.name + "'"});
        for (const auto& p : rb->properties) {
            auto same = std::find_if(e.properties.begin(), e.properties.end(),
                                     [&](const EffectiveProperty& q) { return q.property.name == p.name; });
            EffectiveProperty ep{p, PropertyOrigin::Refinement, rb->id};
            if (same != e.properties.end()) {
                // Disjointness forbids this in a valid model; the refinement wins.
                e.provenance.push_back({"refinement", rb->id, "'" + p.name + "' collides with " + same->source.str()});
                *same = std::move(ep);
            } else {
                e.properties.push_back(std::move(ep));
            }
        }
        for (auto& nested : rb->refinement_groups) apply_group(e, nested);
    }

    const SelectionState& sel_;
};

}  // namespace

EffectiveBlock resolve_effective_block(const Model& model, const ElementId& block_id, const SelectionState& sel) {
    ModelIndex index(model);
    const auto* block = index.get<SpBlock>(block_id);
    if (!block) throw NotFoundError(block_id, "structural block");
    check_selection(index, sel);
    return Resolver(sel).resolve(*block);
}

std::map<ElementId, EffectiveBlock> resolve_all(const Model& model, const SelectionState& sel) {
    ModelIndex index(model);
    check_selection(index, sel);
    Resolver resolver(sel);
    std::map<ElementId, EffectiveBlock> out;
    for_each_sp_block(model, [&](const SpBlock& b, const SpBlock*) { out.emplace(b.id, resolver.resolve(b)); });
    return out;
}

std::vector<Diagnostic> check_sp_consistency(const Model& model, const std::map<ElementId, EffectiveBlock>& resolved) {
    std::map<ElementId, std::vector<ElementId>> allocated;
    for (const auto& t : model.traces) {
        if (t.kind == TraceKind::Allocate) allocated[t.source].push_back(t.target);
    }

    // Requirement attributes per effective block, in requirement order.
    struct Claim {
        const Requirement* req;
        const Property* attr;
    };
    std::map<ElementId, std::vector<Claim>> claims;
    std::vector<Diagnostic> out;

    for (const auto& req : model.quality) {
        if (req.status() == RequirementStatus::Discarded || req.custom_attributes.empty()) continue;
        std::set<ElementId> blocks;
        for (const auto& target : req.targets) {
            if (resolved.count(target)) blocks.insert(target);
            if (auto it = allocated.find(target); it != allocated.end()) {
                for (const auto& b : it->second) {
                    if (resolved.count(b)) blocks.insert(b);
                }
            }
        }
        for (const auto& b : blocks) {
            const auto& eb = resolved.at(b);
            for (const auto& attr : req.custom_attributes) {
                claims[b].push_back({&req, &attr});
                const auto* p = eb.property(attr.name);
                if (!p) continue;
                if (!scalar_equal(p->property.value, attr.value) || p->property.unit != attr.unit) {
                    out.push_back({Severity::Warning, std::string(codes::kSpProperty), req.id,
                                   "requires '" + attr.name + "' = " + describe(attr) + " but block '" + b.str() +
                                       "' has " + describe(p->property)});
                }
            }
        }
    }

    for (const auto& [block, list] : claims) {
        for (std::size_t i = 0; i < list.size(); ++i) {
            for (std::size_t j = i + 1; j < list.size(); ++j) {
                const auto& a = list[i];
                const auto& c = list[j];
                if (a.req == c.req || a.attr->name != c.attr->name) continue;
                if (a.req->status() != RequirementStatus::Confirmed || c.req->status() != RequirementStatus::Confirmed) continue;
                if (scalar_equal(a.attr->value, c.attr->value) && a.attr->unit == c.attr->unit) continue;
                out.push_back({Severity::Error, std::string(codes::kSpRequirementConflict), a.req->id,
                               "'" + a.attr->name + "' on block '" + block.str() + "': " + describe(*a.attr) +
                                   " conflicts with " + describe(*c.attr) + " from requirement '" + c.req->id.str() + "'"});
            }
        }
    }
    sort_diagnostics(out);
    return out;
}

}  // namespace imog::sp
