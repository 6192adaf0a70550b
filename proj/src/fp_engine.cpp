#include "imog/fp_engine.hpp"

#include <algorithm>
#include <array>
#include <functional>

#include "imog/errors.hpp"
#include "imog/validate.hpp"

namespace imog::fp {

std::string_view to_string(GroupKind kind) {
    switch (kind) {
    case GroupKind::Mandatory: return "Mandatory";
    case GroupKind::Optional: return "Optional";
    case GroupKind::Alternative: return "Alternative";
    case GroupKind::Or: return "Or";
    }
    return "?";
}

std::string_view to_string(CrossTreeKind kind) { return kind == CrossTreeKind::Require ? "Require" : "Exclude"; }

std::string_view to_string(Decision decision) { return decision == Decision::In ? "In" : "Out"; }

std::optional<Decision> decision_from_string(std::string_view text) {
    if (text == "In") return Decision::In;
    if (text == "Out") return Decision::Out;
    return std::nullopt;
}

std::optional<std::size_t> BasicFeatureTree::find(const ElementId& id) const {
    auto it = std::lower_bound(blocks.begin(), blocks.end(), id);
    if (it == blocks.end() || *it != id) return std::nullopt;
    return static_cast<std::size_t>(it - blocks.begin());
}

std::size_t BasicFeatureTree::index_of(const ElementId& id) const {
    if (auto i = find(id)) return *i;
    throw NotFoundError(id, "functional block");
}

// ---------------------------------------------------------------------------
// normalize

BasicFeatureTree normalize(const Model& model, bool groups_enabled) {
    require_valid(model);
    const auto& fm = model.functional;

    BasicFeatureTree tree;
    for (const auto& b : fm.blocks) tree.blocks.push_back(b.id);
    std::sort(tree.blocks.begin(), tree.blocks.end());
    for (const auto& r : fm.roots) tree.roots.push_back(tree.index_of(r));

    std::map<ElementId, const FpRelation*> vp_owner;
    for (const auto& r : fm.relations) {
        if (r.variation_point) vp_owner[r.variation_point->id] = &r;
    }

    auto indices = [&](const std::vector<ElementId>& ids) {
        std::vector<std::size_t> out;
        for (const auto& id : ids) out.push_back(tree.index_of(id));
        return out;
    };

    for (const auto& r : fm.relations) {
        TreeGroup g;
        g.relation = r.id;
        g.variation_point = r.variation_point;
        switch (r.kind) {
        case FpRelationKind::Mandatory: g.kind = GroupKind::Mandatory; break;
        case FpRelationKind::Optional: g.kind = GroupKind::Optional; break;
        case FpRelationKind::Custom1to1:
            g.kind = GroupKind::Optional;
            tree.ignored.push_back({r.id, "custom relation '" + r.custom_type + "' is kept as an optional child"});
            break;
        case FpRelationKind::Alternative: g.kind = GroupKind::Alternative; break;
        case FpRelationKind::Or:
            g.kind = GroupKind::Or;
            g.cardinality = r.cardinality.value_or(Cardinality{1, static_cast<int>(r.children.size())});
            break;
        case FpRelationKind::Require:
        case FpRelationKind::Exclude:
            tree.cross_tree.push_back({r.kind == FpRelationKind::Require ? CrossTreeKind::Require : CrossTreeKind::Exclude,
                                       tree.index_of(r.parent), tree.index_of(r.children.at(0)), r.id});
            continue;
        case FpRelationKind::CustomConstraint:
        case FpRelationKind::CustomVp:
            tree.ignored.push_back({r.id, "custom constraint '" + r.custom_type + "' is not analysed"});
            continue;
        case FpRelationKind::VpDerivation: {
            const auto* src = vp_owner.at(r.parent);
            const auto* dst = vp_owner.at(r.children.at(0));
            const auto& src_labels = src->variation_point->option_labels;
            const auto& dst_labels = dst->variation_point->option_labels;
            for (std::size_t i = 0; i < src_labels.size(); ++i) {
                auto j = static_cast<std::size_t>(std::find(dst_labels.begin(), dst_labels.end(), src_labels[i]) -
                                                  dst_labels.begin());
                tree.cross_tree.push_back({CrossTreeKind::Require, tree.index_of(src->children.at(i)),
                                           tree.index_of(dst->children.at(j)), r.id});
            }
            continue;
        }
        }
        g.parent = tree.index_of(r.parent);
        g.children = indices(r.children);
        tree.groups.push_back(std::move(g));
    }

    if (groups_enabled) {
        for (const auto& group : fm.groups) {
            if (!group.enabled) continue;
            auto members = indices(group.members);
            for (std::size_t i = 0; i < members.size(); ++i) {
                for (std::size_t j = i + 1; j < members.size(); ++j) {
                    tree.cross_tree.push_back({CrossTreeKind::Require, members[i], members[j], group.id});
                    tree.cross_tree.push_back({CrossTreeKind::Require, members[j], members[i], group.id});
                }
            }
        }
    }
    return tree;
}

// ---------------------------------------------------------------------------
// is_valid_configuration: a direct rule check, deliberately separate from the
// clause encoding used by the search below.

namespace {

std::string quoted(const ElementId& id) { return "'" + id.str() + "'"; }

std::string group_label(const TreeGroup& g) {
    return g.variation_point ? "variation point '" + g.variation_point->label + "'" : "relation " + quoted(g.relation);
}

}  // namespace

std::vector<Violation> is_valid_configuration(const BasicFeatureTree& tree, const Configuration& cfg) {
    std::vector<bool> on(tree.size(), false);
    for (const auto& id : cfg.selected) on[tree.index_of(id)] = true;
    const auto& name = tree.blocks;

    std::vector<Violation> out;
    for (auto r : tree.roots) {
        if (!on[r]) out.push_back({"root", name[r], "root " + quoted(name[r]) + " not selected"});
    }
    for (const auto& g : tree.groups) {
        std::size_t count = 0;
        for (auto c : g.children) {
            if (!on[c]) continue;
            ++count;
            if (!on[g.parent]) {
                out.push_back({"parent", name[c], quoted(name[c]) + " selected without its parent " + quoted(name[g.parent])});
            }
        }
        if (!on[g.parent]) continue;
        switch (g.kind) {
        case GroupKind::Mandatory:
            if (count == 0) {
                out.push_back({"mandatory", name[g.children[0]],
                               "mandatory child " + quoted(name[g.children[0]]) + " of " + quoted(name[g.parent]) +
                                   " not selected"});
            }
            break;
        case GroupKind::Optional: break;
        case GroupKind::Alternative:
            if (count != 1) {
                out.push_back({"alternative", g.relation,
                               "exactly one option of " + group_label(g) + " must be selected, found " +
                                   std::to_string(count)});
            }
            break;
        case GroupKind::Or: {
            const auto min = static_cast<std::size_t>(g.cardinality.min);
            const auto max = static_cast<std::size_t>(g.cardinality.max);
            if (count < min || count > max) {
                out.push_back({"or", g.relation,
                               "between " + std::to_string(min) + " and " + std::to_string(max) + " children of " +
                                   group_label(g) + " must be selected, found " + std::to_string(count)});
            }
            break;
        }
        }
    }
    for (const auto& c : tree.cross_tree) {
        if (c.kind == CrossTreeKind::Require && on[c.from] && !on[c.to]) {
            out.push_back({"require", c.origin, quoted(name[c.from]) + " requires " + quoted(name[c.to])});
        } else if (c.kind == CrossTreeKind::Exclude && on[c.from] && on[c.to]) {
            out.push_back({"exclude", c.origin, quoted(name[c.from]) + " excludes " + quoted(name[c.to])});
        }
    }
    for (const auto& [vp, label] : cfg.vp_choices) {
        const TreeGroup* owner = nullptr;
        for (const auto& g : tree.groups) {
            if (g.variation_point && g.variation_point->id == vp) owner = &g;
        }
        if (!owner || owner->kind != GroupKind::Alternative) throw NotFoundError(vp, "alternative variation point");
        const auto& labels = owner->variation_point->option_labels;
        auto it = std::find(labels.begin(), labels.end(), label);
        if (it == labels.end() || !on[owner->children[static_cast<std::size_t>(it - labels.begin())]]) {
            out.push_back({"vp-choice", vp,
                           "choice '" + label + "' for " + group_label(*owner) + " does not match the selection"});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Search

namespace {

struct Clause {
    enum class Kind { Unit, Implies, Excludes, Cardinality };
    Kind kind = Kind::Unit;
    std::vector<std::size_t> vars;  // Cardinality: parent first, then children
    int min = 0;
    int max = 0;
    ElementId origin;
    std::string text;
};

std::vector<Clause> encode(const BasicFeatureTree& tree) {
    const auto& name = tree.blocks;
    std::vector<Clause> out;
    for (auto r : tree.roots) {
        out.push_back({Clause::Kind::Unit, {r}, 0, 0, name[r], "root " + quoted(name[r]) + " is always selected"});
    }
    for (const auto& g : tree.groups) {
        for (auto c : g.children) {
            out.push_back({Clause::Kind::Implies, {c, g.parent}, 0, 0, g.relation,
                           quoted(name[c]) + " needs its parent " + quoted(name[g.parent])});
        }
        if (g.kind == GroupKind::Mandatory) {
            out.push_back({Clause::Kind::Implies, {g.parent, g.children[0]}, 0, 0, g.relation,
                           "mandatory relation " + quoted(g.relation) + ": " + quoted(name[g.parent]) + " requires " +
                               quoted(name[g.children[0]])});
        } else if (g.kind == GroupKind::Alternative || g.kind == GroupKind::Or) {
            Clause c{Clause::Kind::Cardinality, {g.parent}, 1, 1, g.relation, ""};
            if (g.kind == GroupKind::Or) {
                c.min = g.cardinality.min;
                c.max = g.cardinality.max;
            }
            c.vars.insert(c.vars.end(), g.children.begin(), g.children.end());
            c.text = g.kind == GroupKind::Alternative
                         ? "exactly one option of " + group_label(g)
                         : "[" + std::to_string(c.min) + "," + std::to_string(c.max) + "] children of " + group_label(g);
            out.push_back(std::move(c));
        }
    }
    for (const auto& x : tree.cross_tree) {
        if (x.kind == CrossTreeKind::Require) {
            out.push_back({Clause::Kind::Implies, {x.from, x.to}, 0, 0, x.origin,
                           "constraint " + quoted(x.origin) + ": " + quoted(name[x.from]) + " requires " + quoted(name[x.to])});
        } else {
            out.push_back({Clause::Kind::Excludes, {x.from, x.to}, 0, 0, x.origin,
                           "constraint " + quoted(x.origin) + ": " + quoted(name[x.from]) + " excludes " + quoted(name[x.to])});
        }
    }
    return out;
}

constexpr signed char kFree = -1;

/// Backtracking over blocks in index order, 0 before 1. Clauses are checked
/// on partial assignments whenever one of their variables is assigned.
class Search {
public:
    Search(std::size_t n, std::vector<Clause> clauses) : n_(n), clauses_(std::move(clauses)), occurs_(n) {
        for (std::size_t i = 0; i < clauses_.size(); ++i) {
            for (auto v : clauses_[i].vars) {
                if (occurs_[v].empty() || occurs_[v].back() != i) occurs_[v].push_back(i);
            }
        }
    }

    /// Calls visit(assignment) for each solution in order until it returns false.
    void run(const std::vector<signed char>& fixed, const std::function<bool(const std::vector<signed char>&)>& visit) {
        value_.assign(n_, kFree);
        fixed_ = &fixed;
        visit_ = &visit;
        step(0);
    }

    bool satisfiable(const std::vector<signed char>& fixed) {
        bool found = false;
        run(fixed, [&](const std::vector<signed char>&) {
            found = true;
            return false;
        });
        return found;
    }

    std::optional<std::vector<signed char>> first(const std::vector<signed char>& fixed) {
        std::optional<std::vector<signed char>> found;
        run(fixed, [&](const std::vector<signed char>& v) {
            found = v;
            return false;
        });
        return found;
    }

private:
    bool step(std::size_t i) {
        if (i == n_) return (*visit_)(value_);
        for (signed char bit : {0, 1}) {
            if ((*fixed_)[i] != kFree && (*fixed_)[i] != bit) continue;
            value_[i] = bit;
            if (consistent(i) && !step(i + 1)) {
                value_[i] = kFree;
                return false;
            }
        }
        value_[i] = kFree;
        return true;
    }

    bool consistent(std::size_t var) const {
        for (auto ci : occurs_[var]) {
            if (!holds(clauses_[ci])) return false;
        }
        return true;
    }

    bool holds(const Clause& c) const {
        switch (c.kind) {
        case Clause::Kind::Unit: return value_[c.vars[0]] != 0;
        case Clause::Kind::Implies: return !(value_[c.vars[0]] == 1 && value_[c.vars[1]] == 0);
        case Clause::Kind::Excludes: return !(value_[c.vars[0]] == 1 && value_[c.vars[1]] == 1);
        case Clause::Kind::Cardinality: {
            int on = 0, free = 0;
            for (std::size_t k = 1; k < c.vars.size(); ++k) {
                on += value_[c.vars[k]] == 1;
                free += value_[c.vars[k]] == kFree;
            }
            if (on > c.max) return false;
            if (value_[c.vars[0]] == 1 && on + free < c.min) return false;
            return true;
        }
        }
        return true;
    }

    std::size_t n_;
    std::vector<Clause> clauses_;
    std::vector<std::vector<std::size_t>> occurs_;
    std::vector<signed char> value_;
    const std::vector<signed char>* fixed_ = nullptr;
    const std::function<bool(const std::vector<signed char>&)>* visit_ = nullptr;
};

void check_size(const BasicFeatureTree& tree, const EnumerationOptions& options, bool capped) {
    if (!capped && tree.size() > options.max_blocks) throw CapExceededError(tree.size(), options.max_blocks);
}

Configuration to_configuration(const BasicFeatureTree& tree, const std::vector<signed char>& v) {
    Configuration cfg;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 1) cfg.selected.insert(tree.blocks[i]);
    }
    for (const auto& g : tree.groups) {
        if (g.kind != GroupKind::Alternative || !g.variation_point || v[g.parent] != 1) continue;
        for (std::size_t k = 0; k < g.children.size(); ++k) {
            if (v[g.children[k]] == 1) cfg.vp_choices[g.variation_point->id] = g.variation_point->option_labels.at(k);
        }
    }
    return cfg;
}

std::vector<signed char> fixed_from(const BasicFeatureTree& tree, const Decisions& decisions) {
    std::vector<signed char> fixed(tree.size(), kFree);
    for (const auto& [id, d] : decisions) fixed[tree.index_of(id)] = d == Decision::In ? 1 : 0;
    return fixed;
}

}  // namespace

EnumerationResult enumerate_configurations(const BasicFeatureTree& tree, const EnumerationOptions& options) {
    check_size(tree, options, options.max_results.has_value());
    EnumerationResult result;
    Search search(tree.size(), encode(tree));
    std::vector<signed char> fixed(tree.size(), kFree);
    search.run(fixed, [&](const std::vector<signed char>& v) {
        if (options.max_results && result.configurations.size() == *options.max_results) {
            result.truncated = true;
            return false;
        }
        result.configurations.push_back(to_configuration(tree, v));
        return true;
    });
    return result;
}

CountResult count_configurations(const BasicFeatureTree& tree, const EnumerationOptions& options) {
    check_size(tree, options, options.max_results.has_value());
    CountResult result;
    Search search(tree.size(), encode(tree));
    std::vector<signed char> fixed(tree.size(), kFree);
    search.run(fixed, [&](const std::vector<signed char>&) {
        if (options.max_results && result.count == *options.max_results) {
            result.truncated = true;
            return false;
        }
        ++result.count;
        return true;
    });
    return result;
}

bool is_void(const BasicFeatureTree& tree, const EnumerationOptions& options) {
    check_size(tree, options, false);
    Search search(tree.size(), encode(tree));
    return !search.satisfiable(std::vector<signed char>(tree.size(), kFree));
}

std::set<ElementId> dead_blocks(const BasicFeatureTree& tree, const EnumerationOptions& options) {
    check_size(tree, options, false);
    Search search(tree.size(), encode(tree));
    std::vector<bool> alive(tree.size(), false);
    std::vector<signed char> fixed(tree.size(), kFree);
    for (std::size_t i = 0; i < tree.size(); ++i) {
        if (alive[i]) continue;
        fixed[i] = 1;
        if (auto witness = search.first(fixed)) {
            for (std::size_t k = 0; k < witness->size(); ++k) alive[k] = alive[k] || (*witness)[k] == 1;
        }
        fixed[i] = kFree;
    }
    std::set<ElementId> dead;
    for (std::size_t i = 0; i < tree.size(); ++i) {
        if (!alive[i]) dead.insert(tree.blocks[i]);
    }
    return dead;
}

PropagationResult propagate(const BasicFeatureTree& tree, const Decisions& decisions, const EnumerationOptions& options) {
    check_size(tree, options, false);
    const auto clauses = encode(tree);
    Search search(tree.size(), clauses);
    auto fixed = fixed_from(tree, decisions);

    PropagationResult result;
    auto base = search.first(fixed);
    if (!base) {
        // Deletion pass: drop every decision that is not needed for the contradiction.
        Decisions core = decisions;
        for (const auto& [id, d] : decisions) {
            Decisions trial = core;
            trial.erase(id);
            if (!search.satisfiable(fixed_from(tree, trial))) core = std::move(trial);
        }
        Conflict conflict;
        conflict.decisions = core;
        std::vector<Clause> roots;
        for (const auto& c : clauses) {
            if (c.kind == Clause::Kind::Unit) roots.push_back(c);
        }
        const auto core_fixed = fixed_from(tree, core);
        std::string because;
        for (const auto& c : clauses) {
            auto subset = roots;
            if (c.kind != Clause::Kind::Unit) subset.push_back(c);
            if (!Search(tree.size(), subset).satisfiable(core_fixed)) {
                conflict.constraint = c.origin;
                because = c.text;
                break;
            }
        }
        std::string listed;
        for (const auto& [id, d] : core) {
            listed += (listed.empty() ? "" : ", ") + id.str() + "=" + std::string(to_string(d));
        }
        conflict.message = "no valid configuration satisfies " + (listed.empty() ? std::string("the model") : listed);
        if (!because.empty()) conflict.message += " (" + because + ")";
        result.conflict = std::move(conflict);
        return result;
    }

    // seen[i][b]: some consistent configuration assigns b to block i.
    std::vector<std::array<bool, 2>> seen(tree.size(), {false, false});
    auto record = [&](const std::vector<signed char>& v) {
        for (std::size_t i = 0; i < v.size(); ++i) seen[i][static_cast<std::size_t>(v[i])] = true;
    };
    record(*base);
    for (std::size_t i = 0; i < tree.size(); ++i) {
        for (signed char bit : {0, 1}) {
            if (seen[i][static_cast<std::size_t>(bit)] || fixed[i] != kFree) continue;
            auto trial = fixed;
            trial[i] = bit;
            if (auto w = search.first(trial)) record(*w);
        }
    }
    for (std::size_t i = 0; i < tree.size(); ++i) {
        if (!seen[i][0]) result.forced_in.insert(tree.blocks[i]);
        if (!seen[i][1]) result.forced_out.insert(tree.blocks[i]);
    }
    return result;
}

}  // namespace imog::fp
