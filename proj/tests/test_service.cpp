#include <doctest.h>

#include <httplib.h>

#include <atomic>
#include <thread>

#include "imog/codec.hpp"
#include "imog/document.hpp"
#include "imog/report_json.hpp"
#include "imog/service.hpp"
#include "support.hpp"

using namespace imog;
using codec::json;
using service::Request;
using service::Response;
using service::Session;

namespace {

Request get(const std::string& path, std::map<std::string, std::string> query = {}) {
    return {"GET", path, std::move(query), {}, ""};
}

Request post(const std::string& path, const json& body, std::map<std::string, std::string> headers = {}) {
    return {"POST", path, {}, std::move(headers), body.dump()};
}

json body(const Response& r) { return json::parse(r.body); }

json decide(const char* id, const char* state) { return json{{"id", id}, {"state", state}}; }

}  // namespace

TEST_CASE("read endpoints") {
    Session s(test::load_fixture("escooter-context.imog.json"));

    auto a = s.handle(get("/api/fp/analysis"));
    CHECK(a.status == 200);
    CHECK(body(a) == json::parse(R"({"count":16,"void":false,"dead":[]})"));
    CHECK(body(s.handle(get("/api/fp/analysis", {{"groups", "on"}})))["count"] == 16);  // no groups defined
    CHECK(s.handle(get("/api/fp/analysis", {{"groups", "maybe"}})).status == 400);

    auto m = s.handle(get("/api/model"));
    CHECK(m.status == 200);
    CHECK(m.body == test::read_fixture("escooter-context.imog.json"));

    auto t = s.handle(get("/api/trace/report"));
    CHECK(codec::decode_trace_report(body(t), "").unallocated_features.size() == 9);  // Balancing is a Function

    auto d = s.handle(get("/api/diagnostics"));
    CHECK(body(d)["revision"] == 0);

    CHECK(s.handle(get("/api/nothing")).status == 404);
    auto wrong = s.handle(get("/api/sp/resolve"));
    CHECK(wrong.status == 405);
    CHECK(wrong.headers.at("Allow") == "POST");
    CHECK(s.handle({"DELETE", "/api/model", {}, {}, ""}).status == 405);
    CHECK(s.revision() == 0);
}

TEST_CASE("analysis on the full model with a level filter") {
    Session s(test::load_fixture("escooter.imog.json"));
    CHECK(body(s.handle(get("/api/fp/analysis", {{"level", "context"}}))) ==
          json::parse(R"({"count":16,"void":false,"dead":[]})"));
    CHECK(body(s.handle(get("/api/fp/analysis", {{"level", "component"}})))["count"] == 1);
}

TEST_CASE("decisions propagate and commit") {
    Session s(test::load_fixture("escooter.imog.json"));
    auto r = s.handle(post("/api/fp/decisions", decide("Simple", "In")));
    CHECK(r.status == 200);
    auto b = body(r);
    CHECK(b["committed"] == true);
    CHECK(b["revision"] == 1);
    auto out = b["forcedOut"].get<std::vector<std::string>>();
    CHECK(std::find(out.begin(), out.end(), "Comfort") != out.end());
    CHECK(b["decisions"] == json{{"Simple", "In"}});
    CHECK(r.headers.at("ETag") == "\"1\"");
    CHECK(codec::decode_propagation(json{{"forcedIn", b["forcedIn"]}, {"forcedOut", b["forcedOut"]}, {"conflict", b["conflict"]}}, "")
              .forced_out.count(ElementId("MotorBoost")) == 1);

    // GET is side-effect free and reflects the committed state
    auto g = body(s.handle(get("/api/fp/decisions")));
    CHECK(g["decisions"] == json{{"Simple", "In"}});
    CHECK(g["revision"] == 1);
    CHECK(s.revision() == 1);

    // clearing one decision
    auto c = body(s.handle(post("/api/fp/decisions", json{{"id", "Simple"}, {"clear", true}})));
    CHECK(c["decisions"] == json::object());
    CHECK(c["revision"] == 2);
    s.handle(post("/api/fp/decisions", decide("LoadingCapacity", "In")));
    s.handle(post("/api/fp/decisions", decide("Comfort", "In")));
    CHECK(body(s.handle(get("/api/fp/decisions")))["decisions"].size() == 2);
    auto all = body(s.handle(post("/api/fp/decisions", json{{"clear", true}})));
    CHECK(all["decisions"] == json::object());
    CHECK(all["revision"] == 5);
}

TEST_CASE("conflicting decision is reported and not committed") {
    Session s(test::load_fixture("escooter-context.imog.json"));
    s.handle(post("/api/fp/decisions", decide("Simple", "In")));
    REQUIRE(s.revision() == 1);
    auto r = s.handle(post("/api/fp/decisions", decide("Driving", "Out")));
    CHECK(r.status == 200);
    auto b = body(r);
    CHECK(b["committed"] == false);
    CHECK(b["revision"] == 1);
    CHECK(b["conflict"]["decisions"]["Driving"] == "Out");
    CHECK(b["conflict"]["constraint"] == "r.driving");
    CHECK(b["decisions"] == json{{"Simple", "In"}});
    CHECK(b["forcedIn"].empty());
    CHECK(s.revision() == 1);
    CHECK(body(s.handle(get("/api/fp/decisions")))["decisions"] == json{{"Simple", "In"}});
}

TEST_CASE("decision request errors") {
    Session s(test::load_fixture("escooter-context.imog.json"));
    CHECK(s.handle(post("/api/fp/decisions", decide("Nope", "In"))).status == 404);
    CHECK(s.handle(post("/api/fp/decisions", decide("r.driving", "In"))).status == 404);
    CHECK(s.handle(post("/api/fp/decisions", decide("Simple", "Maybe"))).status == 400);
    CHECK(s.handle(post("/api/fp/decisions", json{{"id", "Simple"}})).status == 400);
    CHECK(s.handle(post("/api/fp/decisions", json{{"id", "Simple"}, {"state", "In"}, {"extra", 1}})).status == 400);
    CHECK(s.handle(post("/api/fp/decisions", json::object())).status == 400);
    Request broken{"POST", "/api/fp/decisions", {}, {}, "{"};
    auto r = s.handle(broken);
    CHECK(r.status == 400);
    CHECK(body(r)["error"]["kind"] == "SyntaxError");
    CHECK(s.revision() == 0);
}

TEST_CASE("optimistic revision check") {
    Session s(test::load_fixture("escooter-context.imog.json"));
    CHECK(s.handle(post("/api/fp/decisions", decide("Simple", "In"), {{"if-match", "0"}})).status == 200);
    auto stale = s.handle(post("/api/fp/decisions", decide("Comfort", "Out"), {{"if-match", "0"}}));
    CHECK(stale.status == 409);
    CHECK(body(stale)["error"]["revision"] == 1);
    CHECK(s.handle(post("/api/fp/decisions", decide("LoadingCapacity", "In"), {{"if-match", "\"1\""}})).status == 200);
    CHECK(s.handle(post("/api/fp/decisions", decide("LoadingCapacity", "Out"), {{"if-match", "*"}})).status == 200);
    CHECK(s.revision() == 3);
}

TEST_CASE("structural resolution and selections") {
    Session s(test::load_fixture("escooter.imog.json"));
    auto r = s.handle(post("/api/sp/resolve", json{{"blockId", "sp.escooter"},
                                                   {"selections", {{"variantChoices", {{"sp.escooter", "sp.escooter.comfort"}}}}}}));
    CHECK(r.status == 200);
    auto e = codec::decode_effective_block(body(r), "");
    CHECK(e.name == "Comfort E-Scooter");
    CHECK(s.revision() == 0);

    CHECK(s.handle(post("/api/sp/resolve", json{{"blockId", "nope"}})).status == 404);
    auto illegal = s.handle(post("/api/sp/resolve", json{{"blockId", "sp.motor"},
                                                         {"selections", {{"refinementChoices", {{"rg.conductor", "sp.motor"}}}}}}));
    CHECK(illegal.status == 400);
    CHECK(body(illegal)["error"]["owner"] == "rg.conductor");

    // committed selections become the default for resolve
    auto set = s.handle(post("/api/sp/selections", json{{"selections", {{"refinementChoices", {{"rg.conductor", "rb.copper"}}}}}}));
    CHECK(set.status == 200);
    CHECK(s.revision() == 1);
    auto copper = codec::decode_effective_block(body(s.handle(post("/api/sp/resolve", json{{"blockId", "sp.motor"}}))), "");
    CHECK(copper.property("Conductivity") != nullptr);
    CHECK(body(s.handle(get("/api/sp/selections")))["selections"]["refinementChoices"]["rg.conductor"] == "rb.copper");
    CHECK(s.handle(post("/api/sp/selections", json{{"selections", {{"variantChoices", {{"sp.motor", "x"}}}}}})).status == 400);
    CHECK(s.revision() == 1);
}

TEST_CASE("replacing the model") {
    test::TempDir tmp;
    auto path = tmp.write("m.imog.json", test::read_fixture("escooter-context.imog.json"));
    service::SessionOptions opts;
    opts.save_path = path;
    Session s(load_document(path), opts);
    s.handle(post("/api/fp/decisions", decide("Simple", "In")));

    auto doc = json::parse(test::read_fixture("escooter-context.imog.json"));
    doc["functional"]["relations"][5]["cardinality"] = json::array({3, 2});
    Request bad{"POST", "/api/model", {}, {}, doc.dump()};
    auto rejected = s.handle(bad);
    CHECK(rejected.status == 422);
    CHECK(body(rejected)["committed"] == false);
    CHECK(body(rejected)["diagnostics"][0]["code"] == "FP-CARD");
    CHECK(s.revision() == 1);

    Request schema{"POST", "/api/model", {}, {}, R"({"imogVersion":"1.4"})"};
    auto sr = s.handle(schema);
    CHECK(sr.status == 400);
    CHECK(body(sr)["error"]["kind"] == "SchemaError");

    doc["functional"]["relations"][5]["cardinality"] = json::array({1, 3});
    auto ok = s.handle({"POST", "/api/model", {}, {}, doc.dump()});
    CHECK(ok.status == 200);
    CHECK(body(ok)["committed"] == true);
    CHECK(body(ok)["revision"] == 2);
    // decisions are reset with the new model
    CHECK(body(s.handle(get("/api/fp/decisions")))["decisions"] == json::object());
    CHECK(body(s.handle(get("/api/fp/analysis")))["count"] != 16);
    // the file on disk now holds the canonical new document
    auto saved = load_document(path);
    CHECK(saved.functional.relations[5].cardinality == Cardinality{1, 3});
    CHECK(s.handle(get("/api/model")).body == serialize_document(saved));
}

TEST_CASE("CORS headers and preflight") {
    service::SessionOptions opts;
    opts.cors_origin = "http://localhost:5173";
    Session s(test::load_fixture("escooter-context.imog.json"), opts);
    auto r = s.handle(get("/api/model"));
    CHECK(r.headers.at("Access-Control-Allow-Origin") == "http://localhost:5173");
    auto pre = s.handle({"OPTIONS", "/api/fp/decisions", {}, {}, ""});
    CHECK(pre.status == 204);
    CHECK(pre.headers.at("Access-Control-Allow-Headers").find("If-Match") != std::string::npos);
}

TEST_CASE("concurrent readers and writers") {
    Session s(test::load_fixture("escooter.imog.json"));
    std::atomic<int> failures{0};
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t) {
        threads.emplace_back([&, t] {
            for (int i = 0; i < 10; ++i) {
                auto r = (t % 2 == 0) ? s.handle(get("/api/fp/decisions"))
                                      : s.handle(post("/api/fp/decisions", decide("LoadingCapacity", i % 2 ? "In" : "Out")));
                if (r.status != 200) ++failures;
            }
        });
    }
    for (auto& th : threads) th.join();
    CHECK(failures == 0);
    CHECK(s.revision() == 20);
}

TEST_CASE("HTTP adapter serves the API and static files") {
    test::TempDir tmp;
    tmp.write("index.html", "<html>configurator</html>");
    tmp.write("app.js", "console.log(1);");

    Session s(test::load_fixture("escooter-context.imog.json"));
    service::Server server(s, {"127.0.0.1", 0, tmp.path().string()});
    const int port = server.bind();
    std::thread th([&] { server.listen(); });

    httplib::Client client("127.0.0.1", port);
    auto a = client.Get("/api/fp/analysis");
    REQUIRE(a);
    CHECK(a->status == 200);
    CHECK(json::parse(a->body) == json::parse(R"({"count":16,"void":false,"dead":[]})"));
    CHECK(a->get_header_value("Content-Type") == "application/json");

    auto p = client.Post("/api/fp/decisions", decide("Simple", "In").dump(), "application/json");
    REQUIRE(p);
    CHECK(json::parse(p->body)["forcedOut"] == json::array({"Comfort"}));
    CHECK(p->get_header_value("ETag") == "\"1\"");

    httplib::Headers stale{{"If-Match", "0"}};
    auto conflict = client.Post("/api/fp/decisions", stale, decide("Comfort", "Out").dump(), "application/json");
    REQUIRE(conflict);
    CHECK(conflict->status == 409);

    auto index = client.Get("/");
    REQUIRE(index);
    CHECK(index->status == 200);
    CHECK(index->body == "<html>configurator</html>");
    auto js = client.Get("/app.js");
    REQUIRE(js);
    CHECK(js->body == "console.log(1);");
    CHECK(client.Get("/missing.css")->status == 404);
    CHECK(client.Get("/api/unknown")->status == 404);

    server.stop();
    th.join();
}

TEST_CASE("HTTP adapter without UI assets") {
    Session s(test::load_fixture("escooter-context.imog.json"));
    service::Server server(s, {"127.0.0.1", 0, ""});
    const int port = server.bind();
    std::thread th([&] { server.listen(); });
    httplib::Client client("127.0.0.1", port);
    auto index = client.Get("/");
    REQUIRE(index);
    CHECK(index->body.find("/api/fp/decisions") != std::string::npos);
    server.stop();
    th.join();

    CHECK_THROWS_AS(service::Server(s, {"127.0.0.1", 0, "/definitely/not/here"}), std::runtime_error);
}
