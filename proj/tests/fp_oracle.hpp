#ifndef IMOG_TESTS_FP_ORACLE_HPP
#define IMOG_TESTS_FP_ORACLE_HPP

// Test-only reference semantics for the functional perspective, written
// straight against the Model (no normalization, no search), plus a random
// model generator.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "imog/model.hpp"

namespace imog::test {

inline bool oracle_valid(const Model& m, bool groups_enabled, const std::set<ElementId>& on) {
    auto sel = [&](const ElementId& id) { return on.count(id) > 0; };
    for (const auto& r : m.functional.roots) {
        if (!sel(r)) return false;
    }
    std::map<ElementId, const FpRelation*> vp_owner;
    for (const auto& r : m.functional.relations) {
        if (r.variation_point) vp_owner[r.variation_point->id] = &r;
    }
    for (const auto& r : m.functional.relations) {
        int count = 0;
        switch (r.kind) {
        case FpRelationKind::Mandatory:
        case FpRelationKind::Optional:
        case FpRelationKind::Custom1to1:
        case FpRelationKind::Alternative:
        case FpRelationKind::Or:
            for (const auto& c : r.children) {
                if (sel(c) && !sel(r.parent)) return false;
                count += sel(c);
            }
            if (!sel(r.parent)) break;
            if (r.kind == FpRelationKind::Mandatory && count != 1) return false;
            if (r.kind == FpRelationKind::Alternative && count != 1) return false;
            if (r.kind == FpRelationKind::Or && (count < r.cardinality->min || count > r.cardinality->max)) return false;
            break;
        case FpRelationKind::Require:
            if (sel(r.parent) && !sel(r.children[0])) return false;
            break;
        case FpRelationKind::Exclude:
            if (sel(r.parent) && sel(r.children[0])) return false;
            break;
        case FpRelationKind::VpDerivation: {
            const auto* src = vp_owner.at(r.parent);
            const auto* dst = vp_owner.at(r.children[0]);
            for (std::size_t i = 0; i < src->children.size(); ++i) {
                const auto& label = src->variation_point->option_labels[i];
                const auto& dl = dst->variation_point->option_labels;
                auto j = static_cast<std::size_t>(std::find(dl.begin(), dl.end(), label) - dl.begin());
                if (sel(src->children[i]) && !sel(dst->children[j])) return false;
            }
            break;
        }
        case FpRelationKind::CustomConstraint:
        case FpRelationKind::CustomVp: break;
        }
    }
    if (groups_enabled) {
        for (const auto& g : m.functional.groups) {
            if (!g.enabled) continue;
            std::size_t count = 0;
            for (const auto& id : g.members) count += sel(id);
            if (count != 0 && count != g.members.size()) return false;
        }
    }
    return true;
}

/// Every subset of the blocks, in lexicographic order of the bit vector over
/// the sorted block ids (first id most significant, unselected first).
template <class Fn>
void for_each_subset(const Model& m, Fn&& fn) {
    std::vector<ElementId> ids;
    for (const auto& b : m.functional.blocks) ids.push_back(b.id);
    std::sort(ids.begin(), ids.end());
    const std::size_t n = ids.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        std::set<ElementId> on;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (std::uint64_t{1} << (n - 1 - i))) on.insert(ids[i]);
        }
        fn(on);
    }
}

inline std::vector<std::set<ElementId>> oracle_configurations(const Model& m, bool groups_enabled) {
    std::vector<std::set<ElementId>> out;
    for_each_subset(m, [&](const std::set<ElementId>& on) {
        if (oracle_valid(m, groups_enabled, on)) out.push_back(on);
    });
    return out;
}

inline FpBlock make_block(const std::string& id, AbstractionLevel level = AbstractionLevel::context()) {
    FpBlock b;
    b.id = id;
    b.name = id;
    b.level = level;
    return b;
}

inline FpRelation make_relation(const std::string& id, FpRelationKind kind, const std::string& parent,
                                std::vector<ElementId> children) {
    FpRelation r;
    r.id = id;
    r.kind = kind;
    r.parent = parent;
    r.children = std::move(children);
    if (is_custom_kind(kind)) r.custom_type = "custom";
    return r;
}

/// Random valid functional model with 1..max_blocks blocks: a forest built
/// from all relation kinds, random cross-tree constraints, variation point
/// derivations and groups.
inline Model random_fp_model(std::mt19937& rng, std::size_t max_blocks = 12) {
    auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
    auto chance = [&](double p) { return std::bernoulli_distribution(p)(rng); };

    Model m;
    const std::size_t n = pick(1, max_blocks);
    // Random ids so that the sorted order differs from the tree order.
    std::vector<std::string> ids;
    std::set<std::string> used;
    while (ids.size() < n) {
        std::string id = "b";
        for (int k = 0; k < 3; ++k) id += static_cast<char>('a' + pick(0, 25));
        if (used.insert(id).second) ids.push_back(id);
    }
    for (const auto& id : ids) m.functional.blocks.push_back(make_block(id));

    std::size_t placed = 1, rel = 0, vp = 0;
    m.functional.roots.push_back(ids[0]);
    while (placed < n) {
        if (chance(0.1)) {  // extra root
            m.functional.roots.push_back(ids[placed++]);
            continue;
        }
        const auto& parent = ids[pick(0, placed - 1)];
        const std::size_t room = n - placed;
        const auto shape = pick(0, 5);
        const std::string rid = "r" + std::to_string(rel++);
        if (shape >= 4 && room >= 2) {
            const std::size_t k = pick(2, std::min<std::size_t>(room, 4));
            std::vector<ElementId> children(ids.begin() + static_cast<long>(placed), ids.begin() + static_cast<long>(placed + k));
            placed += k;
            auto r = make_relation(rid, shape == 4 ? FpRelationKind::Alternative : FpRelationKind::Or, parent, children);
            if (shape == 5) {
                const int lo = static_cast<int>(pick(1, k));
                r.cardinality = Cardinality{lo, static_cast<int>(pick(static_cast<std::size_t>(lo), k))};
            }
            if (chance(0.6)) {
                VariationPoint v;
                v.id = "vp" + std::to_string(vp++);
                v.label = "VP " + v.id.str();
                for (std::size_t i = 0; i < k; ++i) v.option_labels.push_back("o" + std::to_string(i));
                std::shuffle(v.option_labels.begin(), v.option_labels.end(), rng);
                r.variation_point = v;
            }
            m.functional.relations.push_back(std::move(r));
        } else {
            const auto kind = shape <= 1 ? FpRelationKind::Mandatory
                              : shape <= 3 ? FpRelationKind::Optional
                                           : FpRelationKind::Custom1to1;
            m.functional.relations.push_back(make_relation(rid, kind, parent, {ids[placed++]}));
        }
    }

    // Cross-tree constraints.
    if (n >= 2) {
        const auto k = pick(0, 3);
        for (std::size_t i = 0; i < k; ++i) {
            auto a = pick(0, n - 1), b = pick(0, n - 1);
            if (a == b) continue;
            const auto kind = pick(0, 4);
            auto fk = kind <= 1 ? FpRelationKind::Require : kind <= 3 ? FpRelationKind::Exclude : FpRelationKind::CustomConstraint;
            m.functional.relations.push_back(make_relation("c" + std::to_string(i), fk, ids[a], {ids[b]}));
        }
    }

    // Derivations between variation points with equal label sets, earlier to later.
    std::vector<const FpRelation*> with_vp;
    for (const auto& r : m.functional.relations) {
        if (r.variation_point) with_vp.push_back(&r);
    }
    std::vector<FpRelation> derivations;
    for (std::size_t i = 0; i < with_vp.size(); ++i) {
        for (std::size_t j = i + 1; j < with_vp.size(); ++j) {
            if (with_vp[i]->children.size() == with_vp[j]->children.size() && chance(0.5)) {
                derivations.push_back(make_relation("d" + std::to_string(derivations.size()), FpRelationKind::VpDerivation,
                                                    with_vp[i]->variation_point->id.str(), {with_vp[j]->variation_point->id}));
            }
        }
    }
    for (auto& d : derivations) m.functional.relations.push_back(std::move(d));

    if (n >= 2 && chance(0.5)) {
        FpGroup g;
        g.id = "g0";
        std::vector<std::string> pool = ids;
        std::shuffle(pool.begin(), pool.end(), rng);
        const auto k = pick(2, std::min<std::size_t>(n, 3));
        g.members.assign(pool.begin(), pool.begin() + static_cast<long>(k));
        g.enabled = chance(0.8);
        m.functional.groups.push_back(std::move(g));
    }
    return m;
}

}  // namespace imog::test

#endif
