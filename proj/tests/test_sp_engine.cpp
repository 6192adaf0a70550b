#include <doctest.h>

#include <algorithm>
#include <map>
#include <tuple>

#include "imog/errors.hpp"
#include "imog/model_index.hpp"
#include "imog/sp_engine.hpp"
#include "support.hpp"

using namespace imog;
using namespace imog::sp;

namespace {

const SpBlock& block(const Model& m, const char* id) {
    ModelIndex index(m);
    const auto* b = index.get<SpBlock>(ElementId(id));
    REQUIRE(b);
    return *b;
}

std::vector<std::string> names(const EffectiveBlock& e) {
    std::vector<std::string> out;
    for (const auto& p : e.properties) out.push_back(p.property.name);
    return out;
}

std::vector<std::string> decomposition_ids(const std::optional<DecompositionModel>& d) {
    std::vector<std::string> out;
    if (!d) return out;
    for (const auto& el : d->elements) {
        std::visit([&](const auto& v) { out.push_back(v.id.str()); }, el.value);
    }
    return out;
}

double number(const EffectiveBlock& e, const char* name) {
    const auto* p = e.property(name);
    REQUIRE(p);
    return *scalar_number(p->property.value);
}

// Reference fold: walk the chain of chosen variants and layer name -> value
// maps, innermost last; then add the chosen refinements of the named groups.
struct OracleResult {
    std::map<std::string, std::pair<double, PropertyOrigin>> numeric;
    std::vector<std::string> decomposition;
};

std::optional<ElementId> oracle_choice(const SpBlock& b, const SelectionState& sel) {
    auto it = sel.variant_choices.find(b.id);
    return it != sel.variant_choices.end() ? it->second : b.selected_variant;
}

void oracle_chain(const SpBlock& b, const SelectionState& sel, bool is_variant, OracleResult& r,
                  std::map<std::string, const RefinementGroup*>& groups) {
    for (const auto& p : b.properties) {
        if (auto n = scalar_number(p.value)) r.numeric[p.name] = {*n, is_variant ? PropertyOrigin::Variant : PropertyOrigin::Base};
    }
    auto ids = decomposition_ids(b.decomposition);
    r.decomposition.insert(r.decomposition.end(), ids.begin(), ids.end());
    for (const auto& g : b.refinement_groups) groups[g.name] = &g;
    if (auto c = oracle_choice(b, sel)) {
        for (const auto& v : b.variants) {
            if (v.id == *c) oracle_chain(v, sel, true, r, groups);
        }
    }
}

void oracle_refine(const RefinementGroup& g, const SelectionState& sel, OracleResult& r) {
    auto it = sel.refinement_choices.find(g.id);
    auto c = it != sel.refinement_choices.end() ? std::optional<ElementId>(it->second) : g.selected_refinement;
    if (!c) return;
    for (const auto& rb : g.blocks) {
        if (rb.id != *c) continue;
        for (const auto& p : rb.properties) {
            if (auto n = scalar_number(p.value)) r.numeric[p.name] = {*n, PropertyOrigin::Refinement};
        }
        for (const auto& nested : rb.refinement_groups) oracle_refine(nested, sel, r);
    }
}

OracleResult oracle(const SpBlock& b, const SelectionState& sel) {
    OracleResult r;
    std::map<std::string, const RefinementGroup*> groups;
    oracle_chain(b, sel, false, r, groups);
    for (const auto& [name, g] : groups) oracle_refine(*g, sel, r);
    return r;
}

}  // namespace

TEST_CASE("variant overwrites name and properties") {
    auto m = test::load_fixture("escooter.imog.json");
    auto plain = resolve_effective_block(m, ElementId("sp.escooter"));
    CHECK(plain.name == "E-Scooter");
    CHECK(number(plain, "Weight") == 12);
    CHECK(plain.property("Weight")->origin == PropertyOrigin::Base);
    CHECK(plain.provenance.empty());
    CHECK(plain.applied_variants.empty());

    SelectionState sel;
    sel.variant_choices[ElementId("sp.escooter")] = ElementId("sp.escooter.comfort");
    auto comfort = resolve_effective_block(m, ElementId("sp.escooter"), sel);
    CHECK(comfort.name == "Comfort E-Scooter");
    CHECK(comfort.id == ElementId("sp.escooter"));
    CHECK(number(comfort, "Weight") == 15);
    CHECK(comfort.property("Weight")->origin == PropertyOrigin::Variant);
    CHECK(comfort.property("Weight")->source == ElementId("sp.escooter.comfort"));
    CHECK(comfort.property("Weight")->property.unit == std::optional<std::string>("kg"));
    CHECK(comfort.applied_variants == std::vector<ElementId>{ElementId("sp.escooter.comfort")});
    CHECK_FALSE(comfort.provenance.empty());
    // the base block stays untouched in the model
    CHECK(block(m, "sp.escooter").name == "E-Scooter");
}

TEST_CASE("selected refinement contributes its properties") {
    auto m = test::load_fixture("escooter.imog.json");
    auto none = resolve_effective_block(m, ElementId("sp.motor"));
    CHECK(none.property("Conductivity") == nullptr);

    SelectionState sel;
    sel.refinement_choices[ElementId("rg.conductor")] = ElementId("rb.copper");
    auto copper = resolve_effective_block(m, ElementId("sp.motor"), sel);
    CHECK(number(copper, "Conductivity") == doctest::Approx(59.6));
    CHECK(copper.property("Conductivity")->origin == PropertyOrigin::Refinement);
    CHECK(copper.property("Conductivity")->source == ElementId("rb.copper"));
    CHECK(number(copper, "Power") == 350);
    CHECK(copper.refinement_groups[0].selected_refinement == std::optional<ElementId>("rb.copper"));

    sel.refinement_choices[ElementId("rg.conductor")] = ElementId("rb.iron");
    CHECK(number(resolve_effective_block(m, ElementId("sp.motor"), sel), "Conductivity") == doctest::Approx(10.0));
}

TEST_CASE("empty selection is the identity on overwritable fields") {
    for (const char* name : {"escooter.imog.json", "sp-variants.imog.json"}) {
        auto m = test::load_fixture(name);
        for_each_sp_block(m, [&](const SpBlock& b, const SpBlock*) {
            CAPTURE(b.id.str());
            auto e = resolve_effective_block(m, b.id);
            if (b.selected_variant) return;
            std::vector<Property> base_props;
            for (const auto& p : e.properties) {
                if (p.origin == PropertyOrigin::Base) base_props.push_back(p.property);
            }
            CHECK(base_props == b.properties);
            CHECK(e.name == b.name);
            CHECK(e.description == b.description);
            CHECK(e.level == b.level);
            CHECK(e.stereotype == b.stereotype);
            CHECK(e.discussion == b.discussion);
            CHECK(e.version == b.version);
            CHECK(e.decomposition == b.decomposition);
            CHECK(e.refinement_groups.size() == b.refinement_groups.size());
            CHECK(e.sse.size() == (b.sse ? 1u : 0u));
        });
    }
}

TEST_CASE("three-level variant chain") {
    auto m = test::load_fixture("sp-variants.imog.json");
    SelectionState sel;
    sel.variant_choices[ElementId("v.base")] = ElementId("v.sport");
    auto e = resolve_effective_block(m, ElementId("v.base"), sel);

    // the stored selection of the sport variant stays relevant
    CHECK(e.applied_variants == std::vector<ElementId>{ElementId("v.sport"), ElementId("v.sport.race")});
    CHECK(e.name == "Race Vehicle");
    CHECK(e.description == "sport description");
    CHECK(e.discussion == std::vector<std::string>{"sport discussion"});
    CHECK(e.version == "2");
    CHECK(e.stereotype->name() == "Innovation");
    CHECK(names(e) == std::vector<std::string>{"Weight", "Colour", "TopSpeed", "MaxSlope", "MinTemp"});
    CHECK(number(e, "Weight") == 15);
    CHECK(e.property("Weight")->source == ElementId("v.sport"));
    CHECK(number(e, "TopSpeed") == 60);
    CHECK(e.property("TopSpeed")->source == ElementId("v.sport.race"));
    CHECK(e.property("Colour")->origin == PropertyOrigin::Base);
    CHECK(number(e, "MinTemp") == -20);

    // one common SSE property: extend
    REQUIRE(e.sse.size() == 2);
    CHECK(e.sse[0].payload == "<PMML base/>");
    CHECK(e.sse[1].payload == "<PMML sport/>");

    // union, both "Wheel" blocks kept, bridging relation included
    CHECK(decomposition_ids(e.decomposition) ==
          std::vector<std::string>{"v.base.wheel", "v.base.frame", "v.sport.wheel", "v.sport.link", "v.sport.race.spoiler"});

    // same-named group replaced in place, new group appended
    std::vector<std::string> groups;
    for (const auto& g : e.refinement_groups) groups.push_back(g.id.str());
    CHECK(groups == std::vector<std::string>{"v.sport.rg.conductor", "v.base.rg.mission", "v.sport.rg.tyre"});

    CHECK(e.internal_model_refs == std::vector<std::string>{"models/sport.slx", "models/base.slx"});

    // resolve(B, {B->V}) agrees with resolving V on its own first
    auto inner = resolve_effective_block(m, ElementId("v.sport"), sel);
    CHECK(inner.name == e.name);
    CHECK(number(inner, "TopSpeed") == number(e, "TopSpeed"));
}

TEST_CASE("selection state overrides stored defaults") {
    auto m = test::load_fixture("sp-variants.imog.json");
    SelectionState sel;
    sel.variant_choices[ElementId("v.base")] = ElementId("v.sport");
    sel.variant_choices[ElementId("v.sport")] = ElementId("v.sport.street");
    auto street = resolve_effective_block(m, ElementId("v.base"), sel);
    CHECK(street.name == "Street Vehicle");
    CHECK(number(street, "TopSpeed") == 25);

    sel.variant_choices[ElementId("v.sport")] = std::nullopt;
    auto bare = resolve_effective_block(m, ElementId("v.base"), sel);
    CHECK(bare.name == "Sport Vehicle");
    CHECK(number(bare, "TopSpeed") == 45);
    CHECK(bare.applied_variants == std::vector<ElementId>{ElementId("v.sport")});

    sel.refinement_choices[ElementId("v.base.rg.climate")] = ElementId("v.base.rb.warm");
    sel.refinement_choices[ElementId("v.sport.rg.conductor")] = ElementId("v.sport.rb.silver");
    auto warm = resolve_effective_block(m, ElementId("v.base"), sel);
    CHECK(number(warm, "MinTemp") == 0);
    CHECK(number(warm, "Conductivity") == doctest::Approx(63.0));

    // a choice for the overwritten base group has no effect
    sel.refinement_choices[ElementId("v.base.rg.conductor")] = ElementId("v.base.rb.iron");
    CHECK(number(resolve_effective_block(m, ElementId("v.base"), sel), "Conductivity") == doctest::Approx(63.0));
}

TEST_CASE("SSE with more than one common property is replaced") {
    auto m = test::load_fixture("sp-variants.imog.json");
    SelectionState sel;
    sel.variant_choices[ElementId("v.base")] = ElementId("v.cargo");
    auto e = resolve_effective_block(m, ElementId("v.base"), sel);
    REQUIRE(e.sse.size() == 1);
    CHECK(e.sse[0].payload == "<PMML cargo/>");
    CHECK(e.internal_model_refs == std::vector<std::string>{"models/base.slx"});
}

TEST_CASE("resolution errors") {
    auto m = test::load_fixture("sp-variants.imog.json");
    CHECK_THROWS_AS(resolve_effective_block(m, ElementId("nope")), NotFoundError);
    CHECK_THROWS_AS(resolve_effective_block(m, ElementId("v.base.rg.mission")), NotFoundError);

    auto illegal = [&](SelectionState sel, const char* owner) {
        try {
            resolve_effective_block(m, ElementId("v.base"), sel);
            FAIL("expected IllegalSelectionError");
        } catch (const IllegalSelectionError& e) {
            CHECK(e.owner == ElementId(owner));
        }
    };
    SelectionState a;
    a.variant_choices[ElementId("v.base")] = ElementId("v.sport.race");
    illegal(a, "v.base");
    SelectionState b;
    b.refinement_choices[ElementId("v.base.rg.mission")] = ElementId("v.base.rb.copper");
    illegal(b, "v.base.rg.mission");
    SelectionState c;
    c.variant_choices[ElementId("v.base.rg.mission")] = std::nullopt;
    illegal(c, "v.base.rg.mission");
    SelectionState d;
    d.refinement_choices[ElementId("ghost")] = ElementId("v.base.rb.city");
    illegal(d, "ghost");
}

TEST_CASE("resolution matches the reference fold over every selection") {
    auto m = test::load_fixture("sp-variants.imog.json");
    const auto& base = block(m, "v.base");
    const std::vector<std::optional<ElementId>> outer = {std::nullopt, ElementId("v.sport"), ElementId("v.cargo")};
    const std::vector<std::optional<std::optional<ElementId>>> sport = {
        std::nullopt, std::optional<ElementId>{}, ElementId("v.sport.race"), ElementId("v.sport.street")};
    const std::vector<std::optional<ElementId>> climate = {std::nullopt, ElementId("v.base.rb.cold"), ElementId("v.base.rb.warm")};
    const std::vector<std::optional<ElementId>> conductor = {std::nullopt, ElementId("v.base.rb.copper"), ElementId("v.base.rb.iron")};
    const std::vector<std::optional<ElementId>> silver = {std::nullopt, ElementId("v.sport.rb.silver")};

    int cases = 0;
    for (const auto& o : outer) {
        for (const auto& s : sport) {
            for (const auto& cl : climate) {
                for (const auto& co : conductor) {
                    for (const auto& si : silver) {
                        SelectionState sel;
                        sel.variant_choices[base.id] = o;
                        if (s) sel.variant_choices[ElementId("v.sport")] = *s;
                        if (cl) sel.refinement_choices[ElementId("v.base.rg.climate")] = *cl;
                        if (co) sel.refinement_choices[ElementId("v.base.rg.conductor")] = *co;
                        if (si) sel.refinement_choices[ElementId("v.sport.rg.conductor")] = *si;
                        auto e = resolve_effective_block(m, base.id, sel);
                        auto want = oracle(base, sel);
                        ++cases;

                        CHECK(decomposition_ids(e.decomposition) == want.decomposition);
                        std::map<std::string, std::pair<double, PropertyOrigin>> got;
                        for (const auto& p : e.properties) {
                            if (auto n = scalar_number(p.property.value)) got[p.property.name] = {*n, p.origin};
                        }
                        CHECK(got == want.numeric);
                        auto n = names(e);
                        std::sort(n.begin(), n.end());
                        CHECK(std::adjacent_find(n.begin(), n.end()) == n.end());
                        CHECK(e == resolve_effective_block(m, base.id, sel));
                        // the stored mission refinement always applies
                        CHECK_FALSE(e.provenance.empty());
                    }
                }
            }
        }
    }
    CHECK(cases == 3 * 4 * 3 * 3 * 2);
}

TEST_CASE("resolve_all covers every structural block") {
    auto m = test::load_fixture("escooter.imog.json");
    auto all = resolve_all(m);
    std::size_t n = 0;
    for_each_sp_block(m, [&](const SpBlock&, const SpBlock*) { ++n; });
    CHECK(all.size() == n);
    CHECK(all.count(ElementId("sp.escooter.comfort")) == 1);
    CHECK(all.at(ElementId("sp.controller")).name == "Motor Controller");
}

TEST_CASE("requirement attributes against effective properties") {
    auto m = test::load_fixture("escooter.imog.json");
    // maxWeight is not Weight: exact names only
    CHECK(check_sp_consistency(m, resolve_all(m)).empty());

    Requirement weight;
    weight.id = "5";
    weight.name = "Weight limit";
    weight.targets = {ElementId("sp.escooter")};
    weight.custom_attributes = {{"Weight", std::int64_t{12}, "kg"}};
    m.quality.push_back(weight);
    CHECK(check_sp_consistency(m, resolve_all(m)).empty());

    SelectionState comfort;
    comfort.variant_choices[ElementId("sp.escooter")] = ElementId("sp.escooter.comfort");
    auto d = check_sp_consistency(m, resolve_all(m, comfort));
    REQUIRE(d.size() == 1);
    CHECK(d[0].code == "SP-PROP");
    CHECK(d[0].severity == Severity::Warning);
    CHECK(d[0].element_id == std::optional<ElementId>("5"));

    // unit mismatch also flags; 12 and 12.0 are the same value
    m.quality.back().custom_attributes[0] = {"Weight", 12.0, "lb"};
    CHECK(check_sp_consistency(m, resolve_all(m)).size() == 1);
    m.quality.back().custom_attributes[0] = {"Weight", 12.0, "kg"};
    CHECK(check_sp_consistency(m, resolve_all(m)).empty());

    // via a function allocated to the block
    Requirement power;
    power.id = "6";
    power.name = "Strong motor";
    power.targets = {ElementId("AccelerateMotor")};
    power.custom_attributes = {{"Power", std::int64_t{400}, "W"}};
    m.quality.push_back(power);
    d = check_sp_consistency(m, resolve_all(m));
    REQUIRE(d.size() == 1);
    CHECK(d[0].element_id == std::optional<ElementId>("6"));

    m.quality.back().stereotypes = {"Discarded"};
    CHECK(check_sp_consistency(m, resolve_all(m)).empty());
}

TEST_CASE("conflicting confirmed requirements on one block") {
    auto m = test::load_fixture("escooter.imog.json");
    auto make = [](const char* id, std::int64_t value, std::vector<std::string> stereotypes) {
        Requirement r;
        r.id = id;
        r.name = id;
        r.targets = {ElementId("sp.battery")};
        r.stereotypes = std::move(stereotypes);
        r.custom_attributes = {{"Weight", value, "kg"}};
        return r;
    };
    m.quality.push_back(make("a", 12, {}));
    m.quality.push_back(make("b", 15, {"Confirmed"}));
    auto d = check_sp_consistency(m, resolve_all(m));
    REQUIRE(d.size() == 1);
    CHECK(d[0].code == "SP-REQCONFLICT");
    CHECK(d[0].severity == Severity::Error);
    CHECK(d[0].element_id == std::optional<ElementId>("a"));

    m.quality.back().stereotypes = {"Proposed"};
    CHECK(check_sp_consistency(m, resolve_all(m)).empty());
    m.quality.back().stereotypes = {"Discarded"};
    CHECK(check_sp_consistency(m, resolve_all(m)).empty());
    m.quality.back() = make("b", 12, {});
    CHECK(check_sp_consistency(m, resolve_all(m)).empty());
}
