#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>

#include "imog/errors.hpp"
#include "imog/trace_engine.hpp"
#include "imog/validate.hpp"
#include "support.hpp"

using namespace imog;
using namespace imog::trace;

namespace {

std::vector<std::string> ids(const std::vector<Requirement>& rs) {
    std::vector<std::string> out;
    for (const auto& r : rs) out.push_back(r.id.str());
    return out;
}

std::size_t entries(const TraceReport& r) {
    return r.unallocated_functions.size() + r.unallocated_features.size() + r.dangling_links.size() +
           r.orphan_requirements.size() + r.knowledge_reuse.size();
}

Model without_link(Model m, const char* id) {
    m.traces.erase(std::remove_if(m.traces.begin(), m.traces.end(), [&](const TraceLink& t) { return t.id == ElementId(id); }),
                   m.traces.end());
    return m;
}

}  // namespace

TEST_CASE("trace report on the full model") {
    auto m = test::load_fixture("escooter.imog.json");
    auto r = build_trace_report(m);
    CHECK(r.unallocated_functions.empty());
    // every feature is unallocated in the fixture
    std::vector<ElementId> features;
    for (const auto& b : m.functional.blocks) {
        if (b.kind == FpBlockKind::Feature) features.push_back(b.id);
    }
    std::sort(features.begin(), features.end());
    CHECK(r.unallocated_features == features);
    CHECK(r.dangling_links.empty());
    CHECK(r.orphan_requirements.empty());
    CHECK(r.knowledge_reuse == std::vector<KnowledgeReuse>{{ElementId("sp.battery"), ElementId("ke.lithium")}});

    auto d = trace_diagnostics(r);
    CHECK(count_severity(d, Severity::Error) == 0);
    CHECK(count_severity(d, Severity::Warning) == 0);
    CHECK(count_severity(d, Severity::Info) == features.size());
}

TEST_CASE("removing an allocation reports the function") {
    auto m = without_link(test::load_fixture("escooter.imog.json"), "t.alloc.Balancing");
    auto r = build_trace_report(m);
    CHECK(r.unallocated_functions == std::vector<ElementId>{ElementId("Balancing")});
    auto d = trace_diagnostics(r);
    REQUIRE(count_severity(d, Severity::Warning) == 1);
    auto w = std::find_if(d.begin(), d.end(), [](const Diagnostic& x) { return x.severity == Severity::Warning; });
    CHECK(w->code == "TR-UNALLOC-FN");
    CHECK(w->element_id == std::optional<ElementId>("Balancing"));
}

TEST_CASE("allocate to a requirement is dangling") {
    auto m = test::load_fixture("escooter.imog.json");
    const auto before = build_trace_report(m);
    m.traces.push_back({ElementId("t.bad"), TraceKind::Allocate, ElementId("Balancing"), ElementId("1")});
    auto r = build_trace_report(m);
    REQUIRE(r.dangling_links.size() == 1);
    CHECK(r.dangling_links[0].id == ElementId("t.bad"));
    // exactly one new entry
    CHECK(entries(r) == entries(before) + 1);
    auto d = trace_diagnostics(r);
    CHECK(count_severity(d, Severity::Error) == 1);
    // validation rejects the same link
    CHECK(has_errors(validate_model(m)));
}

TEST_CASE("one inserted dangling link adds one entry") {
    const auto base = test::load_fixture("escooter.imog.json");
    const auto before = entries(build_trace_report(base));
    const std::vector<TraceLink> bad = {
        {ElementId("x1"), TraceKind::Allocate, ElementId("sp.motor"), ElementId("Driving")},
        {ElementId("x2"), TraceKind::Allocate, ElementId("Driving"), ElementId("ghost")},
        {ElementId("x3"), TraceKind::References, ElementId("sp.motor"), ElementId("ie.goal1")},
        {ElementId("x4"), TraceKind::References, ElementId("Driving"), ElementId("ke.lithium")},
        {ElementId("x5"), TraceKind::Constrains, ElementId("Driving"), ElementId("sp.motor")},
        {ElementId("x6"), TraceKind::Allocate, ElementId("AccelerateMotor"), ElementId("rb.copper")},
    };
    for (const auto& t : bad) {
        CAPTURE(t.id.str());
        auto m = base;
        m.traces.push_back(t);
        auto r = build_trace_report(m);
        CHECK(entries(r) == before + 1);
        CHECK(r.dangling_links.size() == 1);
    }
}

TEST_CASE("orphan requirement and ordering") {
    auto m = test::load_fixture("escooter.imog.json");
    Requirement a;
    a.id = "z";
    a.name = "untargeted";
    Requirement b = a;
    b.id = "0";
    m.quality.push_back(a);
    m.quality.push_back(b);
    auto r = build_trace_report(m);
    CHECK(r.orphan_requirements == std::vector<ElementId>{ElementId("0"), ElementId("z")});
    CHECK(build_trace_report(m) == r);
}

TEST_CASE("documented query examples") {
    auto m = test::load_fixture("escooter.imog.json");
    CHECK(ids(query_requirements(m, {parse_predicate("level = Context")})) == std::vector<std::string>{"1", "2", "3", "4"});
    CHECK(ids(query_requirements(m, {parse_predicate("satisfiability >= 1")})) == std::vector<std::string>{"1"});
    CHECK(ids(query_requirements(m, {parse_predicate("satisfiability ≥ 1")})) == std::vector<std::string>{"1"});
    CHECK(ids(query_requirements(m, {})) == std::vector<std::string>{"1", "2", "3", "4"});
    CHECK(ids(query_requirements(m, {parse_predicate("stereotypes contains Proposed")})) == std::vector<std::string>{"3"});
    CHECK(ids(query_requirements(m, {parse_predicate("futureAvailability > Now")})) == std::vector<std::string>{"3"});
    CHECK(ids(query_requirements(m, {parse_predicate("futureAvailability = Now")})) == std::vector<std::string>{"1", "2", "4"});
    CHECK(ids(query_requirements(m, {parse_predicate("futureAvailability<2030")})) == std::vector<std::string>{"1", "2", "3", "4"});
    CHECK(ids(query_requirements(m, {parse_predicate("assignee = Insurer")})) == std::vector<std::string>{"4"});
    // absent fields never match, not even !=
    CHECK(ids(query_requirements(m, {parse_predicate("parent != 2")})).empty());
    CHECK(ids(query_requirements(m, {parse_predicate("parent = 2")})) == std::vector<std::string>{"3"});
    CHECK(ids(query_requirements(m, {parse_predicate("customAttributes contains maxWeight")})) == std::vector<std::string>{"2"});
    CHECK(ids(query_requirements(m, {parse_predicate("name contains frame"), parse_predicate("satisfiability < 0.7")})) ==
          std::vector<std::string>{"3"});
    CHECK(ids(query_requirements(m, {parse_predicate("targets contains Carrying")})) == std::vector<std::string>{"2", "3"});
}

TEST_CASE("predicate parsing and errors") {
    auto p = parse_predicate("  satisfiability<=0.5 ");
    CHECK(p.field == "satisfiability");
    CHECK(p.op == Op::Le);
    CHECK(p.value == "0.5");
    CHECK(parse_predicate("id<>3").op == Op::Ne);
    CHECK(parse_predicate("id ≠ 3").op == Op::Ne);
    CHECK(parse_predicate("name == A = B").value == "A = B");

    CHECK_THROWS_AS(parse_predicate("colour = red"), UnknownFieldError);
    CHECK_THROWS_AS(parse_predicate("satisfiability"), InvalidPredicateError);
    CHECK_THROWS_AS(parse_predicate("= 3"), InvalidPredicateError);

    auto m = test::load_fixture("escooter.imog.json");
    CHECK_THROWS_AS(query_requirements(m, {{"weight", Op::Eq, "1"}}), UnknownFieldError);
    CHECK_THROWS_AS(query_requirements(m, {{"satisfiability", Op::Eq, "high"}}), InvalidPredicateError);
    CHECK_THROWS_AS(query_requirements(m, {{"satisfiability", Op::Contains, "1"}}), InvalidPredicateError);
    CHECK_THROWS_AS(query_requirements(m, {{"stereotypes", Op::Eq, "Proposed"}}), InvalidPredicateError);
    CHECK_THROWS_AS(query_requirements(m, {{"futureAvailability", Op::Eq, "soon"}}), InvalidPredicateError);
}

TEST_CASE("query agrees with a linear scan") {
    std::mt19937 rng(7);
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    const std::vector<std::string> words = {"alpha", "beta", "gamma", "delta"};
    const std::vector<std::string> levels = {"Context", "System", "Component"};
    const std::vector<std::string> stereos = {"Proposed", "Discarded", "Safety Requirement", "Legal Constraint"};

    for (int round = 0; round < 60; ++round) {
        Model m;
        const int n = pick(0, 100);
        for (int i = 0; i < n; ++i) {
            Requirement r;
            r.id = "r" + std::to_string(pick(0, 999)) + "_" + std::to_string(i);
            r.name = words[pick(0, 3)] + " " + words[pick(0, 3)];
            r.satisfiability = pick(0, 10) / 10.0;
            if (pick(0, 1)) r.priority = pick(1, 5);
            if (pick(0, 2) == 0) r.future_availability = FutureAvailability::in_year(pick(2025, 2030));
            r.level = pick(0, 2) == 0 ? AbstractionLevel::context() : pick(0, 1) ? AbstractionLevel::system() : AbstractionLevel::component();
            if (pick(0, 1)) r.stereotypes.push_back(stereos[pick(0, 3)]);
            m.quality.push_back(r);
        }
        std::shuffle(m.quality.begin(), m.quality.end(), rng);

        // Random conjunction of up to three predicates, each with its reference test.
        std::vector<Predicate> preds;
        std::vector<std::function<bool(const Requirement&)>> ref;
        const int k = pick(0, 3);
        for (int j = 0; j < k; ++j) {
            switch (pick(0, 5)) {
            case 0: {
                const double v = pick(0, 10) / 10.0;
                const Op op = static_cast<Op>(pick(0, 5));
                preds.push_back({"satisfiability", op, std::to_string(v)});
                ref.push_back([=](const Requirement& r) {
                    const double s = r.satisfiability;
                    switch (op) {
                    case Op::Eq: return s == v;
                    case Op::Ne: return s != v;
                    case Op::Lt: return s < v;
                    case Op::Le: return s <= v;
                    case Op::Gt: return s > v;
                    default: return s >= v;
                    }
                });
                break;
            }
            case 1: {
                const int v = pick(1, 5);
                preds.push_back({"priority", Op::Ge, std::to_string(v)});
                ref.push_back([=](const Requirement& r) { return r.priority.has_value() && *r.priority >= v; });
                break;
            }
            case 2: {
                const auto lv = levels[pick(0, 2)];
                preds.push_back({"level", Op::Eq, lv});
                ref.push_back([=](const Requirement& r) { return r.level.name() == lv; });
                break;
            }
            case 3: {
                const auto w = words[pick(0, 3)];
                preds.push_back({"name", Op::Contains, w});
                ref.push_back([=](const Requirement& r) { return r.name.find(w) != std::string::npos; });
                break;
            }
            case 4: {
                const auto s = stereos[pick(0, 3)];
                preds.push_back({"stereotypes", Op::Contains, s});
                ref.push_back([=](const Requirement& r) {
                    return std::find(r.stereotypes.begin(), r.stereotypes.end(), s) != r.stereotypes.end();
                });
                break;
            }
            default: {
                const int y = pick(2024, 2031);
                preds.push_back({"futureAvailability", Op::Le, std::to_string(y)});
                ref.push_back([=](const Requirement& r) { return !r.future_availability.year || *r.future_availability.year <= y; });
                break;
            }
            }
        }

        std::vector<std::string> want;
        for (const auto& r : m.quality) {
            if (std::all_of(ref.begin(), ref.end(), [&](const auto& f) { return f(r); })) want.push_back(r.id.str());
        }
        std::sort(want.begin(), want.end());
        CHECK(ids(query_requirements(m, preds)) == want);
    }
}
