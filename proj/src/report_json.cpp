#include "imog/report_json.hpp"

#include "imog/errors.hpp"

namespace imog::codec {

namespace {

template <class E, std::size_t N>
E decode_named(const json& value, const std::string& path, const std::pair<std::string_view, E> (&table)[N]) {
    std::string expected;
    for (const auto& [name, _] : table) expected += (expected.empty() ? "" : "|") + std::string(name);
    if (!value.is_string()) schema_fail(path, expected, value);
    for (const auto& [name, e] : table) {
        if (name == value.get_ref<const std::string&>()) return e;
    }
    schema_fail(path, expected, value);
}

const std::pair<std::string_view, Severity> kSeverities[] = {
    {"Error", Severity::Error}, {"Warning", Severity::Warning}, {"Info", Severity::Info}};
const std::pair<std::string_view, fp::Decision> kDecisions[] = {{"In", fp::Decision::In}, {"Out", fp::Decision::Out}};
const std::pair<std::string_view, sp::PropertyOrigin> kOrigins[] = {{"Base", sp::PropertyOrigin::Base},
                                                                    {"Variant", sp::PropertyOrigin::Variant},
                                                                    {"Refinement", sp::PropertyOrigin::Refinement}};
const std::pair<std::string_view, trace::Op> kOps[] = {
    {"=", trace::Op::Eq}, {"!=", trace::Op::Ne}, {"<", trace::Op::Lt},         {"<=", trace::Op::Le},
    {">", trace::Op::Gt}, {">=", trace::Op::Ge}, {"contains", trace::Op::Contains}};

std::vector<ElementId> id_list(ObjectReader& r, std::string_view key) {
    if (!r.has(key)) r.required(key);  // missing key error
    return r.ids(key);
}

}  // namespace

json encode(const Diagnostic& d) {
    json out{{"severity", to_string(d.severity)}, {"code", d.code}, {"message", d.message}};
    if (d.element_id) out["elementId"] = d.element_id->str();
    return out;
}

Diagnostic decode_diagnostic(const json& value, const std::string& path) {
    ObjectReader r(value, path);
    Diagnostic d;
    d.severity = decode_named(r.required("severity"), r.path_of("severity"), kSeverities);
    d.code = r.string("code");
    d.element_id = r.optional_id("elementId");
    d.message = r.string("message");
    r.finish();
    return d;
}

json encode(const std::vector<Diagnostic>& diagnostics) {
    json out = json::array();
    for (const auto& d : diagnostics) out.push_back(encode(d));
    return out;
}

std::vector<Diagnostic> decode_diagnostics(const json& value, const std::string& path) {
    if (!value.is_array()) schema_fail(path, "array", value);
    std::vector<Diagnostic> out;
    for (std::size_t i = 0; i < value.size(); ++i) {
        out.push_back(decode_diagnostic(value[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

json encode_ids(const std::set<ElementId>& ids) {
    json out = json::array();
    for (const auto& id : ids) out.push_back(id.str());
    return out;
}

std::set<ElementId> decode_id_set(const json& value, const std::string& path) {
    if (!value.is_array()) schema_fail(path, "array", value);
    std::set<ElementId> out;
    for (std::size_t i = 0; i < value.size(); ++i) out.insert(as_id(value[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

// --- functional --------------------------------------------------------------

json encode(const fp::Configuration& c) {
    json choices = json::object();
    for (const auto& [vp, label] : c.vp_choices) choices[vp.str()] = label;
    return json{{"selected", encode_ids(c.selected)}, {"vpChoices", choices}};
}

fp::Configuration decode_configuration(const json& value, const std::string& path) {
    ObjectReader r(value, path);
    fp::Configuration c;
    c.selected = decode_id_set(r.required("selected"), r.path_of("selected"));
    const auto& choices = r.required("vpChoices");
    if (!choices.is_object()) schema_fail(r.path_of("vpChoices"), "object", choices);
    for (const auto& [k, v] : choices.items()) c.vp_choices[ElementId(k)] = as_string(v, r.path_of("vpChoices") + "." + k);
    r.finish();
    return c;
}

json encode(const fp::EnumerationResult& result) {
    json list = json::array();
    for (const auto& c : result.configurations) list.push_back(encode(c));
    return json{{"configurations", list}, {"truncated", result.truncated}};
}

fp::EnumerationResult decode_enumeration(const json& value, const std::string& path) {
    ObjectReader r(value, path);
    fp::EnumerationResult out;
    for (const auto& [v, p] : r.array("configurations", true)) out.configurations.push_back(decode_configuration(*v, p));
    out.truncated = r.boolean("truncated");
    r.finish();
    return out;
}

json encode(const fp::CountResult& result) { return json{{"count", result.count}, {"truncated", result.truncated}}; }

fp::CountResult decode_count(const json& value, const std::string& path) {
    ObjectReader r(value, path);
    fp::CountResult out;
    const auto& c = r.required("count");
    if (!c.is_number_unsigned()) schema_fail(r.path_of("count"), "non-negative integer", c);
    out.count = c.get<std::uint64_t>();
    out.truncated = r.boolean("truncated");
    r.finish();
    return out;
}

json encode(const fp::Decisions& decisions) {
    json out = json::object();
    for (const auto& [id, d] : decisions) out[id.str()] = fp::to_string(d);
    return out;
}

fp::Decisions decode_decisions(const json& value, const std::string& path) {
    if (!value.is_object()) schema_fail(path, "object", value);
    fp::Decisions out;
    for (const auto& [k, v] : value.items()) out[ElementId(k)] = decode_named(v, path + "." + k, kDecisions);
    return out;
}

json encode(const fp::PropagationResult& result) {
    json out{{"forcedIn", encode_ids(result.forced_in)}, {"forcedOut", encode_ids(result.forced_out)}};
    if (result.conflict) {
        json c{{"decisions", encode(result.conflict->decisions)}, {"message", result.conflict->message}};
        if (result.conflict->constraint) c["constraint"] = result.conflict->constraint->str();
        out["conflict"] = c;
    } else {
        out["conflict"] = nullptr;
    }
    return out;
}

fp::PropagationResult decode_propagation(const json& value, const std::string& path) {
    ObjectReader r(value, path);
    fp::PropagationResult out;
    out.forced_in = decode_id_set(r.required("forcedIn"), r.path_of("forcedIn"));
    out.forced_out = decode_id_set(r.required("forcedOut"), r.path_of("forcedOut"));
    const auto& c = r.required("conflict");
    if (!c.is_null()) {
        ObjectReader cr(c, r.path_of("conflict"));
        fp::Conflict conflict;
        conflict.decisions = decode_decisions(cr.required("decisions"), cr.path_of("decisions"));
        conflict.constraint = cr.optional_id("constraint");
        conflict.message = cr.string("message");
        cr.finish();
        out.conflict = std::move(conflict);
    }
    r.finish();
    return out;
}

// --- structural --------------------------------------------------------------

json encode(const sp::SelectionState& s) {
    json variants = json::object();
    for (const auto& [owner, choice] : s.variant_choices) {
        variants[owner.str()] = choice ? json(choice->str()) : json(nullptr);
    }
    json refinements = json::object();
    for (const auto& [group, choice] : s.refinement_choices) refinements[group.str()] = choice.str();
    return json{{"variantChoices", variants}, {"refinementChoices", refinements}};
}

sp::SelectionState decode_selection(const json& value, const std::string& path) {
    ObjectReader r(value, path);
    sp::SelectionState s;
    if (const auto* v = r.optional("variantChoices")) {
        if (!v->is_object()) schema_fail(r.path_of("variantChoices"), "object", *v);
        for (const auto& [k, c] : v->items()) {
            if (c.is_null()) {
                s.variant_choices[ElementId(k)] = std::nullopt;
            } else {
                s.variant_choices[ElementId(k)] = as_id(c, r.path_of("variantChoices") + "." + k);
            }
        }
    }
    if (const auto* v = r.optional("refinementChoices")) {
        if (!v->is_object()) schema_fail(r.path_of("refinementChoices"), "object", *v);
        for (const auto& [k, c] : v->items()) {
            s.refinement_choices[ElementId(k)] = as_id(c, r.path_of("refinementChoices") + "." + k);
        }
    }
    r.finish();
    return s;
}

json encode(const sp::EffectiveBlock& b) {
    json props = json::array();
    for (const auto& p : b.properties) {
        json e = encode(p.property);
        e["origin"] = sp::to_string(p.origin);
        e["source"] = p.source.str();
        props.push_back(e);
    }
    json sse = json::array();
    for (const auto& s : b.sse) sse.push_back(encode(s));
    json groups = json::array();
    for (const auto& g : b.refinement_groups) groups.push_back(encode(g));
    json variants = json::array();
    for (const auto& v : b.applied_variants) variants.push_back(v.str());
    json provenance = json::array();
    for (const auto& step : b.provenance) {
        provenance.push_back(json{{"rule", step.rule}, {"source", step.source.str()}, {"detail", step.detail}});
    }
    json out{{"id", b.id.str()},
             {"name", b.name},
             {"description", b.description},
             {"level", encode(b.level)},
             {"discussion", b.discussion},
             {"version", b.version},
             {"properties", props},
             {"sse", sse},
             {"refinementGroups", groups},
             {"internalModelRefs", b.internal_model_refs},
             {"appliedVariants", variants},
             {"provenance", provenance}};
    if (b.stereotype) out["stereotype"] = encode(*b.stereotype);
    if (b.decomposition) out["decomposition"] = encode(*b.decomposition);
    return out;
}

sp::EffectiveBlock decode_effective_block(const json& value, const std::string& path) {
    ObjectReader r(value, path);
    sp::EffectiveBlock b;
    b.id = r.id("id");
    b.name = r.string("name");
    b.description = r.string("description");
    b.level = decode_level(r.required("level"), r.path_of("level"));
    if (const auto* v = r.optional("stereotype")) b.stereotype = decode_sp_stereotype(*v, r.path_of("stereotype"));
    b.discussion = r.strings("discussion");
    b.version = r.string("version");
    for (const auto& [v, p] : r.array("properties", true)) {
        ObjectReader pr(*v, p);
        sp::EffectiveProperty ep;
        ep.property.name = pr.string("name");
        ep.property.value = decode_scalar(pr.required("value"), pr.path_of("value"));
        ep.property.unit = pr.optional_string("unit");
        ep.origin = decode_named(pr.required("origin"), pr.path_of("origin"), kOrigins);
        ep.source = pr.id("source");
        pr.finish();
        b.properties.push_back(std::move(ep));
    }
    if (const auto* v = r.optional("decomposition")) b.decomposition = decode_decomposition(*v, r.path_of("decomposition"));
    for (const auto& [v, p] : r.array("sse", true)) b.sse.push_back(decode_sse(*v, p));
    for (const auto& [v, p] : r.array("refinementGroups", true)) b.refinement_groups.push_back(decode_refinement_group(*v, p));
    b.internal_model_refs = r.strings("internalModelRefs");
    b.applied_variants = id_list(r, "appliedVariants");
    for (const auto& [v, p] : r.array("provenance", true)) {
        ObjectReader pr(*v, p);
        sp::ProvenanceStep step;
        step.rule = pr.string("rule");
        step.source = pr.id("source");
        step.detail = pr.string("detail");
        pr.finish();
        b.provenance.push_back(std::move(step));
    }
    r.finish();
    return b;
}

// --- trace -------------------------------------------------------------------

json encode(const trace::TraceReport& report) {
    auto ids = [](const std::vector<ElementId>& list) {
        json out = json::array();
        for (const auto& id : list) out.push_back(id.str());
        return out;
    };
    json dangling = json::array();
    for (const auto& t : report.dangling_links) dangling.push_back(encode(t));
    json reuse = json::array();
    for (const auto& k : report.knowledge_reuse) reuse.push_back(json{{"block", k.block.str()}, {"entry", k.entry.str()}});
    return json{{"unallocatedFunctions", ids(report.unallocated_functions)},
                {"unallocatedFeatures", ids(report.unallocated_features)},
                {"danglingLinks", dangling},
                {"orphanRequirements", ids(report.orphan_requirements)},
                {"knowledgeReuse", reuse}};
}

trace::TraceReport decode_trace_report(const json& value, const std::string& path) {
    ObjectReader r(value, path);
    trace::TraceReport out;
    out.unallocated_functions = id_list(r, "unallocatedFunctions");
    out.unallocated_features = id_list(r, "unallocatedFeatures");
    for (const auto& [v, p] : r.array("danglingLinks", true)) out.dangling_links.push_back(decode_trace_link(*v, p, true));
    out.orphan_requirements = id_list(r, "orphanRequirements");
    for (const auto& [v, p] : r.array("knowledgeReuse", true)) {
        ObjectReader kr(*v, p);
        trace::KnowledgeReuse k{kr.id("block"), kr.id("entry")};
        kr.finish();
        out.knowledge_reuse.push_back(std::move(k));
    }
    r.finish();
    return out;
}

json encode(const trace::Predicate& p) {
    return json{{"field", p.field}, {"op", trace::to_string(p.op)}, {"value", p.value}};
}

trace::Predicate decode_predicate(const json& value, const std::string& path) {
    ObjectReader r(value, path);
    trace::Predicate p;
    p.field = r.string("field");
    p.op = decode_named(r.required("op"), r.path_of("op"), kOps);
    const auto& v = r.required("value");
    // Numbers are accepted for convenience and compared as their text.
    if (v.is_number()) {
        p.value = v.dump();
    } else {
        p.value = as_string(v, r.path_of("value"));
    }
    r.finish();
    return p;
}

}  // namespace imog::codec
