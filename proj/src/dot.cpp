#include "imog/dot.hpp"

#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "imog/errors.hpp"

namespace imog {
namespace {

std::string quote(std::string_view text) {
    std::string out = "\"";
    for (char c : text) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out + "\"";
}

std::string level_color(const AbstractionLevel& level) {
    switch (level.kind) {
    case AbstractionLevel::Kind::Context: return "#fff2a8";
    case AbstractionLevel::Kind::System: return "#c8f0c0";
    case AbstractionLevel::Kind::Component: return "#e0c8f0";
    case AbstractionLevel::Kind::Custom: return "#ffffff";
    }
    return "#ffffff";
}

class Writer {
public:
    explicit Writer(std::string_view name) { out_ << "digraph " << quote(name) << " {\n"; }

    void line(const std::string& text) { out_ << std::string(depth_ * 2, ' ') << text << "\n"; }
    void node(const ElementId& id, const std::string& attrs) { line(quote(id.str()) + " [" + attrs + "];"); }
    void edge(const ElementId& from, const ElementId& to, const std::string& attrs) {
        line(quote(from.str()) + " -> " + quote(to.str()) + (attrs.empty() ? "" : " [" + attrs + "]") + ";");
    }
    void open(const std::string& text) {
        line(text + " {");
        ++depth_;
    }
    void close() {
        --depth_;
        line("}");
    }
    std::string finish() {
        out_ << "}\n";
        return out_.str();
    }

private:
    std::ostringstream out_;
    std::size_t depth_ = 1;
};

// Functional legend: Mandatory arrowhead=dot, Optional arrowhead=odot,
// Alternative/Or through a diamond junction (Or edge labelled with its
// cardinality), Require/Exclude dashed, custom kinds dotted, VP derivation
// dashed between junctions, groups as dashed ellipses.
std::string functional(const Model& model) {
    const auto& fm = model.functional;
    if (fm.blocks.empty()) throw EmptyPerspectiveError("Functional");
    Writer w("functional");
    w.line("node [shape=box, style=\"rounded,filled\"];");
    for (const auto& b : fm.blocks) {
        std::string label = b.name;
        if (b.kind == FpBlockKind::Function) label = "<<Function>>\n" + label;
        w.node(b.id, "label=" + quote(label) + ", fillcolor=" + quote(level_color(b.level)));
    }
    for (const auto& r : fm.relations) {
        const auto child = r.children.empty() ? ElementId{} : r.children.front();
        switch (r.kind) {
        case FpRelationKind::Mandatory: w.edge(r.parent, child, "arrowhead=dot"); break;
        case FpRelationKind::Optional: w.edge(r.parent, child, "arrowhead=odot"); break;
        case FpRelationKind::Custom1to1:
            w.edge(r.parent, child, "style=dotted, label=" + quote(r.custom_type));
            break;
        case FpRelationKind::Alternative:
        case FpRelationKind::Or: {
            const ElementId junction = r.variation_point ? r.variation_point->id : r.id;
            std::string label = r.variation_point ? r.variation_point->label
                                                  : std::string(r.kind == FpRelationKind::Or ? "or" : "alt");
            w.node(junction, "shape=diamond, style=filled, fillcolor=\"#ffffff\", label=" + quote(label));
            std::string attrs = "arrowhead=none";
            if (r.kind == FpRelationKind::Or && r.cardinality) {
                attrs += ", label=" + quote("[" + std::to_string(r.cardinality->min) + "," +
                                            std::to_string(r.cardinality->max) + "]");
            }
            w.edge(r.parent, junction, attrs);
            for (std::size_t i = 0; i < r.children.size(); ++i) {
                std::string a = r.kind == FpRelationKind::Alternative ? "arrowhead=odiamond" : "arrowhead=normal";
                if (r.variation_point && i < r.variation_point->option_labels.size()) {
                    a += ", label=" + quote(r.variation_point->option_labels[i]);
                }
                w.edge(junction, r.children[i], a);
            }
            break;
        }
        case FpRelationKind::Require: w.edge(r.parent, child, "style=dashed, label=\"requires\""); break;
        case FpRelationKind::Exclude:
            w.edge(r.parent, child, "style=dashed, dir=both, arrowhead=tee, arrowtail=tee, label=\"excludes\"");
            break;
        case FpRelationKind::CustomConstraint:
        case FpRelationKind::CustomVp:
            w.edge(r.parent, child, "style=dotted, label=" + quote(r.custom_type));
            break;
        case FpRelationKind::VpDerivation: w.edge(r.parent, child, "style=dashed, label=\"derives\""); break;
        }
    }
    for (const auto& g : fm.groups) {
        w.node(g.id, std::string("shape=ellipse, style=dashed, label=\"group\"") + (g.enabled ? "" : ", color=gray"));
        for (const auto& m : g.members) w.edge(g.id, m, "style=dotted, arrowhead=none");
    }
    return w.finish();
}

// Quality legend: requirement parent -> child solid (labelled with the
// parent type), requirement -> target dashed "constrains".
std::string quality(const Model& model) {
    if (model.quality.empty()) throw EmptyPerspectiveError("Quality");
    ModelIndex index(model);
    Writer w("quality");
    w.line("node [shape=note, style=filled, fillcolor=\"#ffffff\"];");
    for (const auto& q : model.quality) {
        w.node(q.id, "label=" + quote(q.id.str() + ": " + q.name) + ", fillcolor=" + quote(level_color(q.level)));
    }
    std::set<ElementId> targets;
    for (const auto& q : model.quality) targets.insert(q.targets.begin(), q.targets.end());
    for (const auto& t : targets) {
        std::string label = t.str();
        if (const auto* b = index.get<FpBlock>(t)) label = b->name;
        if (const auto* b = index.get<SpBlock>(t)) label = b->name;
        w.node(t, "shape=box, style=rounded, label=" + quote(label));
    }
    for (const auto& q : model.quality) {
        if (!q.parent) continue;
        w.edge(*q.parent, q.id, q.parent_type ? "label=" + quote(to_string(*q.parent_type)) : "");
    }
    for (const auto& q : model.quality) {
        for (const auto& t : q.targets) w.edge(q.id, t, "style=dashed, label=\"constrains\"");
    }
    return w.finish();
}

// Structural legend: decomposition edges with a diamond tail, variant edges
// dashed (bold when selected), refinement groups as folders, Channel
// undirected bold, Arrow normal, Effect red dashed labelled with its type,
// packages as clusters.
class StructuralWriter {
public:
    explicit StructuralWriter(Writer& w) : w_(w) {}

    void elements(const std::vector<DecompositionElement>& elements, const SpBlock* owner) {
        for (const auto& e : elements) {
            if (const auto* b = std::get_if<SpBlock>(&e.value)) {
                block(*b);
                if (owner) w_.edge(owner->id, b->id, "dir=back, arrowtail=diamond");
            } else if (const auto* p = std::get_if<Package>(&e.value)) {
                w_.open("subgraph " + quote("cluster_" + p->id.str()));
                w_.line("label=" + quote(p->name) + ";");
                this->elements(p->elements, owner);
                w_.close();
            } else if (const auto* n = std::get_if<Note>(&e.value)) {
                w_.node(n->id, "shape=note, label=" + quote(n->text));
            } else {
                relations_.push_back(&std::get<SpRelation>(e.value));
            }
        }
    }

    void flush_relations() {
        for (const auto* r : relations_) {
            std::string attrs;
            switch (r->kind) {
            case SpRelationKind::Channel: attrs = "arrowhead=none, penwidth=2"; break;
            case SpRelationKind::Arrow:
                attrs = r->direction == Direction::Bidirectional ? "dir=both" : "arrowhead=normal";
                break;
            case SpRelationKind::Effect:
                attrs = std::string("color=red, style=dashed") +
                        (r->direction == Direction::Bidirectional ? ", dir=both" : "") +
                        (r->effect_type ? ", xlabel=" + quote(to_string(*r->effect_type)) : "");
                break;
            }
            if (r->label) attrs += ", label=" + quote(*r->label);
            w_.edge(r->source, r->target, attrs);
        }
    }

private:
    void block(const SpBlock& b) {
        std::string label = b.name;
        if (b.stereotype) label = "<<" + b.stereotype->name() + ">>\n" + label;
        w_.node(b.id, "label=" + quote(label) + ", fillcolor=" + quote(level_color(b.level)));
        if (b.decomposition) elements(b.decomposition->elements, &b);
        for (const auto& g : b.refinement_groups) refinement_group(b.id, g);
        for (const auto& v : b.variants) {
            block(v);
            w_.edge(b.id, v.id,
                    std::string("style=dashed, label=\"variant\"") + (b.selected_variant == v.id ? ", penwidth=2" : ""));
        }
    }

    void refinement_group(const ElementId& owner, const RefinementGroup& g) {
        w_.node(g.id, "shape=folder, style=filled, fillcolor=\"#ffffff\", label=" + quote(g.name));
        w_.edge(owner, g.id, "style=dotted, arrowhead=none");
        for (const auto& rb : g.blocks) {
            w_.node(rb.id, "shape=component, style=filled, fillcolor=\"#ffffff\", label=" + quote(rb.name));
            w_.edge(g.id, rb.id, g.selected_refinement == rb.id ? "penwidth=2" : "");
            for (const auto& nested : rb.refinement_groups) refinement_group(rb.id, nested);
        }
    }

    Writer& w_;
    std::vector<const SpRelation*> relations_;
};

std::string structural(const Model& model) {
    bool any = false;
    for (const auto& top : model.structural.top_models) any = any || !top.elements.empty();
    if (!any) throw EmptyPerspectiveError("Structural");
    Writer w("structural");
    w.line("node [shape=box, style=filled];");
    StructuralWriter s(w);
    for (const auto& top : model.structural.top_models) s.elements(top.elements, nullptr);
    s.flush_relations();
    return w.finish();
}

}  // namespace

std::string export_dot(const Model& model, Perspective perspective) {
    switch (perspective) {
    case Perspective::Functional: return functional(model);
    case Perspective::Quality: return quality(model);
    case Perspective::Structural: return structural(model);
    default: break;
    }
    throw std::invalid_argument("DOT export supports the Functional, Structural and Quality perspectives");
}

}  // namespace imog
