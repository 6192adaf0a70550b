#include "imog/codec.hpp"

#include <limits>

#include "imog/errors.hpp"

namespace imog::codec {
namespace {

template <class E>
using EnumTable = std::initializer_list<std::pair<std::string_view, E>>;

template <class E>
E decode_enum(const json& value, const std::string& path, EnumTable<E> table) {
    std::string expected;
    for (const auto& [name, _] : table) expected += (expected.empty() ? "" : "|") + std::string(name);
    if (!value.is_string()) schema_fail(path, expected, value);
    const auto& text = value.get_ref<const std::string&>();
    for (const auto& [name, e] : table) {
        if (name == text) return e;
    }
    throw SchemaError(path, expected, "\"" + text + "\"");
}

const EnumTable<FpBlockKind> kBlockKinds = {{"Feature", FpBlockKind::Feature}, {"Function", FpBlockKind::Function}};
const EnumTable<ParentChildType> kPcTypes = {{"Decomposition", ParentChildType::Decomposition},
                                             {"Refinement", ParentChildType::Refinement}};
const EnumTable<SpRelationKind> kSpRelationKinds = {
    {"Channel", SpRelationKind::Channel}, {"Arrow", SpRelationKind::Arrow}, {"Effect", SpRelationKind::Effect}};
const EnumTable<Direction> kDirections = {{"Unidirectional", Direction::Unidirectional},
                                          {"Bidirectional", Direction::Bidirectional}};
const EnumTable<EffectType> kEffectTypes = {
    {"Desired", EffectType::Desired}, {"Undesired", EffectType::Undesired}, {"Misuse", EffectType::Misuse}};

// Enumerations that also accept {"custom": "<name>"}.
template <class T>
json encode_customizable(const T& value) {
    if (value.kind == T::Kind::Custom) return json{{"custom", value.custom_name}};
    return value.name();
}

template <class T>
T decode_customizable(const json& value, const std::string& path, EnumTable<typename T::Kind> table) {
    if (value.is_object()) {
        ObjectReader r(value, path);
        T out{T::Kind::Custom, r.string("custom")};
        r.finish();
        return out;
    }
    std::string expected;
    for (const auto& [name, _] : table) expected += (expected.empty() ? "" : "|") + std::string(name);
    expected += " or {\"custom\": string}";
    if (!value.is_string()) schema_fail(path, expected, value);
    const auto& text = value.get_ref<const std::string&>();
    for (const auto& [name, kind] : table) {
        if (name == text) return T{kind, {}};
    }
    throw SchemaError(path, expected, "\"" + text + "\"");
}

const EnumTable<AbstractionLevel::Kind> kLevels = {{"Context", AbstractionLevel::Kind::Context},
                                                   {"System", AbstractionLevel::Kind::System},
                                                   {"Component", AbstractionLevel::Kind::Component}};
const EnumTable<Assignee::Kind> kAssignees = {
    {"OEM", Assignee::Kind::OEM}, {"Tier1", Assignee::Kind::Tier1}, {"Tier2", Assignee::Kind::Tier2}};
const EnumTable<SpBlockStereotype::Kind> kSpStereotypes = {
    {"Environment", SpBlockStereotype::Kind::Environment}, {"Innovation", SpBlockStereotype::Kind::Innovation},
    {"Logic", SpBlockStereotype::Kind::Logic},             {"Service", SpBlockStereotype::Kind::Service},
    {"Part", SpBlockStereotype::Kind::Part},               {"Hardware", SpBlockStereotype::Kind::Hardware},
    {"Software", SpBlockStereotype::Kind::Software}};
const EnumTable<RefinementStereotype::Kind> kRefinementStereotypes = {
    {"Technology", RefinementStereotype::Kind::Technology},
    {"MissionProfile", RefinementStereotype::Kind::MissionProfile},
    {"Application", RefinementStereotype::Kind::Application}};

json encode_ids(const std::vector<ElementId>& ids) {
    json out = json::array();
    for (const auto& id : ids) out.push_back(id.str());
    return out;
}

template <class T>
void put_optional(json& out, const char* key, const std::optional<T>& value) {
    if (value) out[key] = *value;
}

void put_optional_id(json& out, const char* key, const std::optional<ElementId>& value) {
    if (value) out[key] = value->str();
}

}  // namespace

// ---------------------------------------------------------------------------
// ObjectReader

ObjectReader::ObjectReader(const json& value, std::string path) : object_(value), path_(std::move(path)) {
    if (!value.is_object()) schema_fail(path_, "object", value);
}

std::string ObjectReader::path_of(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
}

bool ObjectReader::has(std::string_view key) const { return object_.contains(key); }

const json& ObjectReader::required(std::string_view key) {
    auto it = object_.find(key);
    if (it == object_.end()) throw SchemaError(path_of(key), "a value", "missing key");
    used_.emplace(key);
    return *it;
}

const json* ObjectReader::optional(std::string_view key) {
    auto it = object_.find(key);
    if (it == object_.end()) return nullptr;
    used_.emplace(key);
    return &*it;
}

std::string ObjectReader::string(std::string_view key) { return as_string(required(key), path_of(key)); }

std::optional<std::string> ObjectReader::optional_string(std::string_view key) {
    const auto* v = optional(key);
    if (!v) return std::nullopt;
    return as_string(*v, path_of(key));
}

std::vector<std::string> ObjectReader::strings(std::string_view key) {
    std::vector<std::string> out;
    for (const auto& [v, p] : array(key)) out.push_back(as_string(*v, p));
    return out;
}

ElementId ObjectReader::id(std::string_view key) { return as_id(required(key), path_of(key)); }

std::optional<ElementId> ObjectReader::optional_id(std::string_view key) {
    const auto* v = optional(key);
    if (!v) return std::nullopt;
    return as_id(*v, path_of(key));
}

std::vector<ElementId> ObjectReader::ids(std::string_view key) {
    std::vector<ElementId> out;
    for (const auto& [v, p] : array(key)) out.push_back(as_id(*v, p));
    return out;
}

std::int64_t ObjectReader::integer(std::string_view key) {
    const auto& v = required(key);
    if (v.is_number_integer() && !(v.is_number_unsigned() && v.get<std::uint64_t>() >
                                                                 static_cast<std::uint64_t>(
                                                                     std::numeric_limits<std::int64_t>::max()))) {
        return v.get<std::int64_t>();
    }
    schema_fail(path_of(key), "integer", v);
}

std::optional<std::int64_t> ObjectReader::optional_integer(std::string_view key) {
    if (!has(key)) return std::nullopt;
    return integer(key);
}

double ObjectReader::number(std::string_view key) {
    const auto& v = required(key);
    if (!v.is_number()) schema_fail(path_of(key), "number", v);
    return v.get<double>();
}

bool ObjectReader::boolean(std::string_view key) {
    const auto& v = required(key);
    if (!v.is_boolean()) schema_fail(path_of(key), "boolean", v);
    return v.get<bool>();
}

std::vector<std::pair<const json*, std::string>> ObjectReader::array(std::string_view key, bool required_key) {
    const json* v = required_key ? &required(key) : optional(key);
    std::vector<std::pair<const json*, std::string>> out;
    if (!v) return out;
    const auto p = path_of(key);
    if (!v->is_array()) schema_fail(p, "array", *v);
    for (std::size_t i = 0; i < v->size(); ++i) out.emplace_back(&(*v)[i], p + "[" + std::to_string(i) + "]");
    return out;
}

void ObjectReader::finish() const {
    for (auto it = object_.begin(); it != object_.end(); ++it) {
        if (!used_.count(it.key())) throw SchemaError(path_of(it.key()), "no such key", "unknown key");
    }
}

std::string type_name(const json& value) {
    if (value.is_number_integer()) return "integer";
    if (value.is_number_float()) return "number";
    return value.type_name();
}

void schema_fail(const std::string& path, const std::string& expected, const json& got) {
    throw SchemaError(path.empty() ? "<document>" : path, expected, type_name(got));
}

std::string as_string(const json& value, const std::string& path) {
    if (!value.is_string()) schema_fail(path, "string", value);
    return value.get<std::string>();
}

ElementId as_id(const json& value, const std::string& path) {
    if (!value.is_string()) schema_fail(path, "id string", value);
    return ElementId(value.get<std::string>());
}

// ---------------------------------------------------------------------------
// Value types

json encode(const Scalar& value) {
    return std::visit([](const auto& v) { return json(v); }, value);
}

Scalar decode_scalar(const json& value, const std::string& path) {
    if (value.is_boolean()) return value.get<bool>();
    if (value.is_string()) return value.get<std::string>();
    if (value.is_number_float()) return value.get<double>();
    if (value.is_number_unsigned()) {
        if (value.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
            return value.get<double>();
        }
        return static_cast<std::int64_t>(value.get<std::uint64_t>());
    }
    if (value.is_number_integer()) return value.get<std::int64_t>();
    schema_fail(path, "number, string or boolean", value);
}

json encode(const AbstractionLevel& level) { return encode_customizable(level); }

AbstractionLevel decode_level(const json& value, const std::string& path) {
    return decode_customizable<AbstractionLevel>(value, path, kLevels);
}

json encode(const Property& property) {
    json out{{"name", property.name}, {"value", encode(property.value)}};
    put_optional(out, "unit", property.unit);
    return out;
}

Property decode_property(const json& value, const std::string& path) {
    ObjectReader r(value, path);
    Property p;
    p.name = r.string("name");
    p.value = decode_scalar(r.required("value"), r.path_of("value"));
    p.unit = r.optional_string("unit");
    r.finish();
    return p;
}

json encode_properties(const std::vector<Property>& properties) {
    json out = json::array();
    for (const auto& p : properties) out.push_back(encode(p));
    return out;
}

std::vector<Property> decode_properties(ObjectReader& reader, std::string_view key) {
    std::vector<Property> out;
    for (const auto& [v, p] : reader.array(key)) out.push_back(decode_property(*v, p));
    return out;
}

// ---------------------------------------------------------------------------
// Strategy

json encode(const IdentifiableElement& e) {
    json out{{"id", e.id.str()},
             {"category", e.category},
             {"text", e.text},
             {"discussion", e.discussion},
             {"version", e.version}};
    if (e.value) out["value"] = encode(*e.value);
    return out;
}

namespace {
IdentifiableElement decode_identifiable(const json& value, const std::string& path) {
    ObjectReader r(value, path);
    IdentifiableElement e;
    e.id = r.id("id");
    e.category = r.string("category");
    e.text = r.string("text");
    if (const auto* v = r.optional("value")) e.value = decode_scalar(*v, r.path_of("value"));
    e.discussion = r.strings("discussion");
    e.version = r.optional_string("version").value_or("");
    r.finish();
    return e;
}

StrategyDiv decode_strategy_div(const json& value, const std::string& path) {
    ObjectReader r(value, path);
    StrategyDiv d;
    d.name = r.optional_string("name");
    d.html_content = r.string("htmlContent");
    for (const auto& [v, p] : r.array("embeddedElements")) d.embedded_elements.push_back(decode_identifiable(*v, p));
    r.finish();
    return d;
}
}  // namespace

json encode(const StrategyDiv& div) {
    json elements = json::array();
    for (const auto& e : div.embedded_elements) elements.push_back(encode(e));
    json out{{"htmlContent", div.html_content}, {"embeddedElements", elements}};
    put_optional(out, "name", div.name);
    return out;
}

// ---------------------------------------------------------------------------
// Functional

json encode(const FpBlock& b) {
    json out{{"id", b.id.str()},
             {"name", b.name},
             {"kind", to_string(b.kind)},
             {"level", encode(b.level)},
             {"description", b.description},
             {"customProperties", encode_properties(b.custom_properties)},
             {"userStories", b.user_stories},
             {"discussion", b.discussion},
             {"version", b.version}};
    put_optional(out, "customBlockType", b.custom_block_type);
    return out;
}

json encode(const FpRelation& r) {
    json out{{"id", r.id.str()},
             {"kind", to_string(r.kind)},
             {"parent", r.parent.str()},
             {"children", encode_ids(r.children)}};
    if (is_custom_kind(r.kind)) out["customType"] = r.custom_type;
    if (r.pc_type) out["pcType"] = to_string(*r.pc_type);
    if (r.cardinality) out["cardinality"] = json::array({r.cardinality->min, r.cardinality->max});
    if (r.variation_point) {
        out["variationPoint"] = json{{"id", r.variation_point->id.str()},
                                     {"label", r.variation_point->label},
                                     {"optionLabels", r.variation_point->option_labels}};
    }
    return out;
}

json encode(const FpGroup& g) {
    return json{{"id", g.id.str()}, {"members", encode_ids(g.members)}, {"enabled", g.enabled}};
}

namespace {
FpBlock decode_fp_block(const json& value, const std::string& path) {
    ObjectReader r(value, path);
    FpBlock b;
    b.id = r.id("id");
    b.name = r.string("name");
    b.kind = decode_enum(r.required("kind"), r.path_of("kind"), kBlockKinds);
    b.level = decode_level(r.required("level"), r.path_of("level"));
    b.custom_block_type = r.optional_string("customBlockType");
    b.description = r.optional_string("description").value_or("");
    b.custom_properties = decode_properties(r, "customProperties");
    b.user_stories = r.strings("userStories");
    b.discussion = r.strings("discussion");
    b.version = r.optional_string("version").value_or("");
    r.finish();
    return b;
}

FpRelation decode_fp_relation(const json& value, const std::string& path) {
    ObjectReader r(value, path);
    FpRelation rel;
    rel.id = r.id("id");
    const auto& kind = r.required("kind");
    const auto kind_text = as_string(kind, r.path_of("kind"));
    auto parsed = fp_relation_kind_from_string(kind_text);
    if (!parsed) {
        throw SchemaError(r.path_of("kind"),
                          "Mandatory|Optional|Alternative|Or|Require|Exclude|CustomConstraint|Custom1to1|"
                          "VpDerivation|CustomVp",
                          "\"" + kind_text + "\"");
    }
    rel.kind = *parsed;
    if (is_custom_kind(rel.kind)) {
        rel.custom_type = r.string("customType");
    } else if (r.has("customType")) {
        throw SchemaError(r.path_of("customType"), "absent for " + kind_text, "customType");
    }
    rel.parent = r.id("parent");
    rel.children = r.ids("children");
    if (!r.has("children")) throw SchemaError(r.path_of("children"), "array", "missing key");
    if (const auto* v = r.optional("pcType")) rel.pc_type = decode_enum(*v, r.path_of("pcType"), kPcTypes);
    if (const auto* v = r.optional("cardinality")) {
        const auto p = r.path_of("cardinality");
        if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number_integer() || !(*v)[1].is_number_integer()) {
            schema_fail(p, "[min, max] integer pair", *v);
        }
        rel.cardinality = Cardinality{(*v)[0].get<int>(), (*v)[1].get<int>()};
    }
    if (const auto* v = r.optional("variationPoint")) {
        ObjectReader vr(*v, r.path_of("variationPoint"));
        VariationPoint vp;
        vp.id = vr.id("id");
        vp.label = vr.string("label");
        vp.option_labels = vr.strings("optionLabels");
        vr.finish();
        rel.variation_point = std::move(vp);
    }
    r.finish();
    return rel;
}

FpGroup decode_fp_group(const json& value, const std::string& path) {
    ObjectReader r(value, path);
    FpGroup g;
    g.id = r.id("id");
    g.members = r.ids("members");
    g.enabled = r.has("enabled") ? r.boolean("enabled") : true;
    r.finish();
    return g;
}
}  // namespace

// ---------------------------------------------------------------------------
// Quality

json encode(const Requirement& q) {
    json out{{"id", q.id.str()},
             {"name", q.name},
             {"text", q.text},
             {"satisfiability", q.satisfiability},
             {"stereotypes", q.stereotypes},
             {"level", encode(q.level)},
             {"targets", encode_ids(q.targets)},
             {"customAttributes", encode_properties(q.custom_attributes)},
             {"reasoning", q.reasoning},
             {"discussion", q.discussion},
             {"version", q.version}};
    out["futureAvailability"] = q.future_availability.is_now() ? json("Now") : json{{"year", *q.future_availability.year}};
    put_optional(out, "priority", q.priority);
    if (q.assignee) out["assignee"] = encode_customizable(*q.assignee);
    put_optional_id(out, "parent", q.parent);
    if (q.parent_type) out["parentType"] = to_string(*q.parent_type);
    return out;
}

Requirement decode_requirement(const json& value, const std::string& path) {
    ObjectReader r(value, path);
    Requirement q;
    q.id = r.id("id");
    q.priority = r.optional_integer("priority");
    q.name = r.string("name");
    q.text = r.optional_string("text").value_or("");
    q.satisfiability = r.number("satisfiability");
    if (const auto* v = r.optional("futureAvailability")) {
        const auto p = r.path_of("futureAvailability");
        if (v->is_string() && v->get<std::string>() == "Now") {
            q.future_availability = FutureAvailability::now();
        } else if (v->is_object()) {
            ObjectReader fr(*v, p);
            q.future_availability = FutureAvailability::in_year(static_cast<int>(fr.integer("year")));
            fr.finish();
        } else {
            schema_fail(p, "\"Now\" or {\"year\": integer}", *v);
        }
    }
    q.stereotypes = r.strings("stereotypes");
    q.level = decode_level(r.required("level"), r.path_of("level"));
    if (const auto* v = r.optional("assignee")) {
        q.assignee = decode_customizable<Assignee>(*v, r.path_of("assignee"), kAssignees);
    }
    q.parent = r.optional_id("parent");
    if (const auto* v = r.optional("parentType")) q.parent_type = decode_enum(*v, r.path_of("parentType"), kPcTypes);
    q.targets = r.ids("targets");
    q.custom_attributes = decode_properties(r, "customAttributes");
    q.reasoning = r.optional_string("reasoning").value_or("");
    q.discussion = r.strings("discussion");
    q.version = r.optional_string("version").value_or("");
    r.finish();
    return q;
}

// ---------------------------------------------------------------------------
// Structural

json encode(const SolutionSpaceDescription& sse) {
    return json{{"payload", sse.payload},
                {"inputProperties", sse.input_properties},
                {"outputProperties", sse.output_properties}};
}

SolutionSpaceDescription decode_sse(const json& value, const std::string& path) {
    ObjectReader r(value, path);
    SolutionSpaceDescription sse;
    sse.payload = r.string("payload");
    sse.input_properties = r.strings("inputProperties");
    sse.output_properties = r.strings("outputProperties");
    r.finish();
    return sse;
}

namespace {
json encode_refinement_block(const RefinementBlock& b) {
    json groups = json::array();
    for (const auto& g : b.refinement_groups) groups.push_back(encode(g));
    json out{{"id", b.id.str()},
             {"name", b.name},
             {"description", b.description},
             {"properties", encode_properties(b.properties)},
             {"refinementGroups", groups},
             {"discussion", b.discussion},
             {"version", b.version}};
    if (b.stereotype) out["stereotype"] = encode_customizable(*b.stereotype);
    return out;
}

RefinementBlock decode_refinement_block(const json& value, const std::string& path) {
    ObjectReader r(value, path);
    RefinementBlock b;
    b.id = r.id("id");
    b.name = r.string("name");
    b.description = r.optional_string("description").value_or("");
    if (const auto* v = r.optional("stereotype")) {
        b.stereotype = decode_customizable<RefinementStereotype>(*v, r.path_of("stereotype"), kRefinementStereotypes);
    }
    b.properties = decode_properties(r, "properties");
    for (const auto& [v, p] : r.array("refinementGroups")) b.refinement_groups.push_back(decode_refinement_group(*v, p));
    b.discussion = r.strings("discussion");
    b.version = r.optional_string("version").value_or("");
    r.finish();
    return b;
}
}  // namespace

json encode(const RefinementGroup& g) {
    json blocks = json::array();
    for (const auto& b : g.blocks) blocks.push_back(encode_refinement_block(b));
    json out{{"id", g.id.str()}, {"name", g.name}, {"blocks", blocks}};
    put_optional_id(out, "selectedRefinement", g.selected_refinement);
    return out;
}

RefinementGroup decode_refinement_group(const json& value, const std::string& path) {
    ObjectReader r(value, path);
    RefinementGroup g;
    g.id = r.id("id");
    g.name = r.string("name");
    for (const auto& [v, p] : r.array("blocks")) g.blocks.push_back(decode_refinement_block(*v, p));
    g.selected_refinement = r.optional_id("selectedRefinement");
    r.finish();
    return g;
}

json encode(const SpRelation& rel) {
    json out{{"id", rel.id.str()},
             {"kind", to_string(rel.kind)},
             {"source", rel.source.str()},
             {"target", rel.target.str()},
             {"description", rel.description},
             {"properties", encode_properties(rel.properties)},
             {"notes", rel.notes},
             {"discussion", rel.discussion},
             {"version", rel.version}};
    if (rel.direction) out["direction"] = to_string(*rel.direction);
    put_optional(out, "label", rel.label);
    put_optional(out, "stereotype", rel.stereotype);
    if (rel.effect_type) out["effectType"] = to_string(*rel.effect_type);
    put_optional(out, "endpointType", rel.endpoint_type);
    return out;
}

namespace {
SpRelation decode_sp_relation(const json& value, const std::string& path) {
    ObjectReader r(value, path);
    SpRelation rel;
    rel.id = r.id("id");
    rel.kind = decode_enum(r.required("kind"), r.path_of("kind"), kSpRelationKinds);
    rel.source = r.id("source");
    rel.target = r.id("target");
    if (const auto* v = r.optional("direction")) rel.direction = decode_enum(*v, r.path_of("direction"), kDirections);
    rel.label = r.optional_string("label");
    rel.description = r.optional_string("description").value_or("");
    rel.stereotype = r.optional_string("stereotype");
    rel.properties = decode_properties(r, "properties");
    if (const auto* v = r.optional("effectType")) rel.effect_type = decode_enum(*v, r.path_of("effectType"), kEffectTypes);
    rel.endpoint_type = r.optional_string("endpointType");
    rel.notes = r.strings("notes");
    rel.discussion = r.strings("discussion");
    rel.version = r.optional_string("version").value_or("");
    r.finish();
    return rel;
}

json encode_elements(const std::vector<DecompositionElement>& elements);

std::vector<DecompositionElement> decode_elements(ObjectReader& r, std::string_view key);

json encode_element(const DecompositionElement& element) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, SpBlock>) {
                return json{{"block", encode(v)}};
            } else if constexpr (std::is_same_v<T, SpRelation>) {
                return json{{"relation", encode(v)}};
            } else if constexpr (std::is_same_v<T, Package>) {
                return json{{"package", json{{"id", v.id.str()}, {"name", v.name}, {"elements", encode_elements(v.elements)}}}};
            } else {
                return json{{"note", json{{"id", v.id.str()}, {"text", v.text}}}};
            }
        },
        element.value);
}

json encode_elements(const std::vector<DecompositionElement>& elements) {
    json out = json::array();
    for (const auto& e : elements) out.push_back(encode_element(e));
    return out;
}

DecompositionElement decode_element(const json& value, const std::string& path) {
    const std::string expected = "object with exactly one of block|relation|package|note";
    if (!value.is_object() || value.size() != 1) schema_fail(path, expected, value);
    ObjectReader r(value, path);
    if (const auto* v = r.optional("block")) return {decode_sp_block(*v, r.path_of("block"), std::nullopt)};
    if (const auto* v = r.optional("relation")) return {decode_sp_relation(*v, r.path_of("relation"))};
    if (const auto* v = r.optional("package")) {
        ObjectReader pr(*v, r.path_of("package"));
        Package pkg;
        pkg.id = pr.id("id");
        pkg.name = pr.string("name");
        pkg.elements = decode_elements(pr, "elements");
        pr.finish();
        return {std::move(pkg)};
    }
    if (const auto* v = r.optional("note")) {
        ObjectReader nr(*v, r.path_of("note"));
        Note note{nr.id("id"), nr.string("text")};
        nr.finish();
        return {std::move(note)};
    }
    throw SchemaError(path, expected, "key '" + value.begin().key() + "'");
}

std::vector<DecompositionElement> decode_elements(ObjectReader& r, std::string_view key) {
    std::vector<DecompositionElement> out;
    for (const auto& [v, p] : r.array(key)) out.push_back(decode_element(*v, p));
    return out;
}
}  // namespace

json encode(const DecompositionModel& model) { return json{{"elements", encode_elements(model.elements)}}; }

DecompositionModel decode_decomposition(const json& value, const std::string& path) {
    ObjectReader r(value, path);
    DecompositionModel m;
    m.elements = decode_elements(r, "elements");
    r.finish();
    return m;
}

json encode(const SpBlockStereotype& stereotype) { return encode_customizable(stereotype); }

SpBlockStereotype decode_sp_stereotype(const json& value, const std::string& path) {
    return decode_customizable<SpBlockStereotype>(value, path, kSpStereotypes);
}

json encode(const SpBlock& b) {
    json groups = json::array();
    for (const auto& g : b.refinement_groups) groups.push_back(encode(g));
    json variants = json::array();
    for (const auto& v : b.variants) variants.push_back(encode(v));
    json out{{"id", b.id.str()},
             {"name", b.name},
             {"description", b.description},
             {"level", encode(b.level)},
             {"properties", encode_properties(b.properties)},
             {"refinementGroups", groups},
             {"variants", variants},
             {"discussion", b.discussion},
             {"version", b.version}};
    if (b.stereotype) out["stereotype"] = encode_customizable(*b.stereotype);
    if (b.sse) out["sse"] = encode(*b.sse);
    put_optional(out, "internalModelRef", b.internal_model_ref);
    if (b.decomposition) out["decomposition"] = encode(*b.decomposition);
    put_optional_id(out, "parentBlock", b.parent_block);
    put_optional_id(out, "selectedVariant", b.selected_variant);
    return out;
}

SpBlock decode_sp_block(const json& value, const std::string& path, const std::optional<ElementId>& owner) {
    ObjectReader r(value, path);
    SpBlock b;
    b.id = r.id("id");
    b.name = r.string("name");
    b.description = r.optional_string("description").value_or("");
    b.level = decode_level(r.required("level"), r.path_of("level"));
    if (const auto* v = r.optional("stereotype")) {
        b.stereotype = decode_customizable<SpBlockStereotype>(*v, r.path_of("stereotype"), kSpStereotypes);
    }
    b.properties = decode_properties(r, "properties");
    if (const auto* v = r.optional("sse")) b.sse = decode_sse(*v, r.path_of("sse"));
    b.internal_model_ref = r.optional_string("internalModelRef");
    if (const auto* v = r.optional("decomposition")) b.decomposition = decode_decomposition(*v, r.path_of("decomposition"));
    for (const auto& [v, p] : r.array("refinementGroups")) b.refinement_groups.push_back(decode_refinement_group(*v, p));
    for (const auto& [v, p] : r.array("variants")) b.variants.push_back(decode_sp_block(*v, p, b.id));
    b.parent_block = r.optional_id("parentBlock");
    if (!b.parent_block && owner) b.parent_block = owner;
    b.selected_variant = r.optional_id("selectedVariant");
    b.discussion = r.strings("discussion");
    b.version = r.optional_string("version").value_or("");
    r.finish();
    return b;
}

// ---------------------------------------------------------------------------
// Knowledge and traces

json encode(const KnowledgeEntry& k) {
    json out{{"id", k.id.str()}, {"name", k.name}, {"type", k.type}, {"properties", encode_properties(k.properties)}};
    put_optional(out, "yearOfAvailability", k.year_of_availability);
    return out;
}

namespace {
KnowledgeEntry decode_knowledge(const json& value, const std::string& path) {
    ObjectReader r(value, path);
    KnowledgeEntry k;
    k.id = r.id("id");
    k.name = r.string("name");
    k.type = r.string("type");
    if (auto y = r.optional_integer("yearOfAvailability")) k.year_of_availability = static_cast<int>(*y);
    k.properties = decode_properties(r, "properties");
    r.finish();
    return k;
}
}  // namespace

json encode(const TraceLink& t) {
    return json{{"id", t.id.str()}, {"kind", to_string(t.kind)}, {"source", t.source.str()}, {"target", t.target.str()}};
}

TraceLink decode_trace_link(const json& value, const std::string& path, bool allow_constrains) {
    ObjectReader r(value, path);
    TraceLink t;
    t.id = r.id("id");
    if (allow_constrains) {
        t.kind = decode_enum<TraceKind>(r.required("kind"), r.path_of("kind"),
                                        {{"References", TraceKind::References},
                                         {"Constrains", TraceKind::Constrains},
                                         {"Allocate", TraceKind::Allocate}});
    } else {
        t.kind = decode_enum<TraceKind>(r.required("kind"), r.path_of("kind"),
                                        {{"References", TraceKind::References}, {"Allocate", TraceKind::Allocate}});
    }
    t.source = r.id("source");
    t.target = r.id("target");
    r.finish();
    return t;
}

// ---------------------------------------------------------------------------
// Model

json encode(const Model& m) {
    json strategy = json::array();
    for (const auto& d : m.strategy) strategy.push_back(encode(d));
    json blocks = json::array(), relations = json::array(), groups = json::array();
    for (const auto& b : m.functional.blocks) blocks.push_back(encode(b));
    for (const auto& r : m.functional.relations) relations.push_back(encode(r));
    for (const auto& g : m.functional.groups) groups.push_back(encode(g));
    json quality = json::array();
    for (const auto& q : m.quality) quality.push_back(encode(q));
    json tops = json::array();
    for (const auto& t : m.structural.top_models) tops.push_back(encode(t));
    json knowledge = json::array();
    for (const auto& k : m.knowledge) knowledge.push_back(encode(k));
    json traces = json::array();
    for (const auto& t : m.traces) {
        if (t.kind != TraceKind::Constrains) traces.push_back(encode(t));
    }
    return json{{"imogVersion", m.imog_version},
                {"strategy", strategy},
                {"functional",
                 {{"blocks", blocks}, {"relations", relations}, {"groups", groups}, {"roots", encode_ids(m.functional.roots)}}},
                {"quality", quality},
                {"structural", {{"topModels", tops}}},
                {"knowledge", knowledge},
                {"traces", traces}};
}

Model decode_model(const json& value) {
    ObjectReader r(value, "");
    Model m;
    m.imog_version = r.string("imogVersion");
    if (m.imog_version != kImogVersion) {
        throw SchemaError("imogVersion", "\"" + std::string(kImogVersion) + "\"", "\"" + m.imog_version + "\"");
    }
    for (const auto& [v, p] : r.array("strategy", true)) m.strategy.push_back(decode_strategy_div(*v, p));
    {
        ObjectReader fr(r.required("functional"), "functional");
        for (const auto& [v, p] : fr.array("blocks", true)) m.functional.blocks.push_back(decode_fp_block(*v, p));
        for (const auto& [v, p] : fr.array("relations", true)) m.functional.relations.push_back(decode_fp_relation(*v, p));
        for (const auto& [v, p] : fr.array("groups", true)) m.functional.groups.push_back(decode_fp_group(*v, p));
        for (const auto& [v, p] : fr.array("roots", true)) m.functional.roots.push_back(as_id(*v, p));
        fr.finish();
    }
    for (const auto& [v, p] : r.array("quality", true)) m.quality.push_back(decode_requirement(*v, p));
    {
        ObjectReader sr(r.required("structural"), "structural");
        for (const auto& [v, p] : sr.array("topModels", true)) m.structural.top_models.push_back(decode_decomposition(*v, p));
        sr.finish();
    }
    for (const auto& [v, p] : r.array("knowledge", true)) m.knowledge.push_back(decode_knowledge(*v, p));
    for (const auto& [v, p] : r.array("traces", true)) m.traces.push_back(decode_trace_link(*v, p, false));
    r.finish();
    materialize_constrains_links(m);
    return m;
}

}  // namespace imog::codec
