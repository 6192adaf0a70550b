#include "imog/service.hpp"

#include <httplib.h>

#include <algorithm>
#include <stdexcept>

#include "imog/document.hpp"
#include "imog/errors.hpp"
#include "imog/filter.hpp"
#include "imog/model_index.hpp"
#include "imog/report_json.hpp"
#include "imog/trace_engine.hpp"
#include "imog/validate.hpp"

namespace imog::service {

using codec::json;

namespace {

Response json_response(int status, const json& body) {
    Response r;
    r.status = status;
    r.body = body.dump() + "\n";
    return r;
}

Response error_response(int status, std::string kind, const std::string& message, json extra = json::object()) {
    extra["kind"] = std::move(kind);
    extra["message"] = message;
    return json_response(status, json{{"error", extra}});
}

json parse_body(const Request& req) {
    try {
        return json::parse(req.body);
    } catch (const json::parse_error& e) {
        throw SyntaxError(1, 1, e.what());
    }
}

// Accepts 3, "3" and *.
bool revision_matches(const Request& req, std::int64_t revision) {
    auto it = req.headers.find("if-match");
    if (it == req.headers.end()) return true;
    std::string v = it->second;
    v.erase(std::remove(v.begin(), v.end(), '"'), v.end());
    v.erase(std::remove(v.begin(), v.end(), ' '), v.end());
    if (v == "*") return true;
    return v == std::to_string(revision);
}

json decision_body(const fp::PropagationResult& result, const fp::Decisions& decisions, std::int64_t revision,
                   bool committed) {
    json body = codec::encode(result);
    body["decisions"] = codec::encode(decisions);
    body["revision"] = revision;
    body["committed"] = committed;
    return body;
}

std::vector<Diagnostic> all_diagnostics(const Model& model, const sp::SelectionState& selections) {
    auto out = validate_model(model);
    if (has_errors(out)) return out;
    auto tr = trace::trace_diagnostics(trace::build_trace_report(model));
    out.insert(out.end(), tr.begin(), tr.end());
    try {
        auto spd = sp::check_sp_consistency(model, sp::resolve_all(model, selections));
        out.insert(out.end(), spd.begin(), spd.end());
    } catch (const IllegalSelectionError&) {
        // selections are checked when they are set; a replaced model resets them
    }
    sort_diagnostics(out);
    return out;
}

}  // namespace

Session::Session(Model model, SessionOptions options) : options_(std::move(options)) {
    auto s = std::make_shared<State>();
    s->model = std::make_shared<const Model>(std::move(model));
    state_ = std::move(s);
}

std::shared_ptr<const Session::State> Session::snapshot() const {
    std::lock_guard<std::mutex> lock(state_mutex_);
    return state_;
}

void Session::commit(std::shared_ptr<const State> next) {
    std::lock_guard<std::mutex> lock(state_mutex_);
    state_ = std::move(next);
}

std::int64_t Session::revision() const { return snapshot()->revision; }

Response Session::handle(const Request& request) {
    Response r;
    if (request.method == "OPTIONS") {
        r.status = 204;
        r.content_type.clear();
        r.headers["Access-Control-Allow-Methods"] = "GET, POST, OPTIONS";
        r.headers["Access-Control-Allow-Headers"] = "Content-Type, If-Match";
    } else {
        try {
            r = dispatch(request);
        } catch (const SyntaxError& e) {
            r = error_response(400, "SyntaxError", e.what(), {{"line", e.line}, {"column", e.column}});
        } catch (const SchemaError& e) {
            r = error_response(400, "SchemaError", e.what(), {{"path", e.path}});
        } catch (const DuplicateIdError& e) {
            r = error_response(400, "DuplicateId", e.what(), {{"id", e.id.str()}});
        } catch (const NotFoundError& e) {
            r = error_response(404, "NotFound", e.what(), {{"id", e.id.str()}});
        } catch (const IllegalSelectionError& e) {
            r = error_response(400, "IllegalSelection", e.what(), {{"owner", e.owner.str()}});
        } catch (const EmptyFilterError& e) {
            r = error_response(400, "EmptyFilter", e.what());
        } catch (const CapExceededError& e) {
            r = error_response(422, "CapExceeded", e.what(), {{"blocks", e.blocks}, {"cap", e.cap}});
        } catch (const InvalidModelError& e) {
            r = error_response(422, "InvalidModel", e.what(), {{"diagnostics", codec::encode(e.diagnostics)}});
        } catch (const std::exception& e) {
            r = error_response(500, "Internal", e.what());
        }
    }
    const auto rev = std::to_string(revision());
    r.headers["ETag"] = "\"" + rev + "\"";
    r.headers["X-Revision"] = rev;
    r.headers["Access-Control-Allow-Origin"] = options_.cors_origin;
    r.headers["Access-Control-Expose-Headers"] = "ETag, X-Revision";
    return r;
}

Response Session::dispatch(const Request& req) {
    struct Route {
        const char* path;
        bool get;
        bool post;
    };
    static const Route routes[] = {
        {"/api/model", true, true},          {"/api/diagnostics", true, false}, {"/api/fp/analysis", true, false},
        {"/api/fp/decisions", true, true},   {"/api/sp/resolve", false, true},  {"/api/sp/selections", true, true},
        {"/api/trace/report", true, false},
    };
    const Route* route = nullptr;
    for (const auto& r : routes) {
        if (req.path == r.path) route = &r;
    }
    if (!route) return error_response(404, "NotFound", "no endpoint " + req.path);
    const bool is_get = req.method == "GET" || req.method == "HEAD";
    const bool is_post = req.method == "POST";
    if ((is_get && !route->get) || (is_post && !route->post) || (!is_get && !is_post)) {
        auto r = error_response(405, "MethodNotAllowed", req.method + " is not supported on " + req.path);
        r.headers["Allow"] = std::string(route->get ? "GET" : "") + (route->get && route->post ? ", " : "") +
                             (route->post ? "POST" : "");
        return r;
    }

    if (is_post) {
        if (req.path == "/api/fp/decisions") return post_decisions(req);
        if (req.path == "/api/sp/selections") return post_selections(req);
        if (req.path == "/api/model") return post_model(req);
        // /api/sp/resolve is a POST only for its body; it changes nothing.
        auto s = snapshot();
        const auto body = parse_body(req);
        codec::ObjectReader r(body, "");
        const auto id = r.id("blockId");
        auto selections = s->selections;
        if (const auto* v = r.optional("selections")) selections = codec::decode_selection(*v, "selections");
        r.finish();
        return json_response(200, codec::encode(sp::resolve_effective_block(*s->model, id, selections)));
    }

    auto s = snapshot();
    const auto& model = *s->model;
    if (req.path == "/api/model") {
        Response r;
        r.body = serialize_unchecked(model);
        return r;
    }
    if (req.path == "/api/diagnostics") {
        return json_response(200, json{{"diagnostics", codec::encode(all_diagnostics(model, s->selections))},
                                       {"revision", s->revision}});
    }
    if (req.path == "/api/fp/analysis") {
        bool groups = options_.groups_enabled;
        if (auto it = req.query.find("groups"); it != req.query.end()) {
            if (it->second != "on" && it->second != "off") {
                return error_response(400, "BadRequest", "groups must be on or off");
            }
            groups = it->second == "on";
        }
        const Model* view = &model;
        Model filtered;
        if (auto it = req.query.find("level"); it != req.query.end()) {
            filtered = filter_by_abstraction_level(model, parse_level_list(it->second));
            view = &filtered;
        }
        auto tree = fp::normalize(*view, groups);
        fp::EnumerationOptions opts{std::nullopt, options_.cap};
        auto count = fp::count_configurations(tree, opts);
        return json_response(200, json{{"count", count.count},
                                       {"dead", codec::encode_ids(fp::dead_blocks(tree, opts))},
                                       {"void", count.count == 0}});
    }
    if (req.path == "/api/fp/decisions") {
        auto tree = fp::normalize(model, options_.groups_enabled);
        auto result = fp::propagate(tree, s->decisions, {std::nullopt, options_.cap});
        return json_response(200, decision_body(result, s->decisions, s->revision, true));
    }
    if (req.path == "/api/sp/selections") {
        return json_response(200, json{{"selections", codec::encode(s->selections)}, {"revision", s->revision}});
    }
    // /api/trace/report
    return json_response(200, codec::encode(trace::build_trace_report(model)));
}

Response Session::post_decisions(const Request& req) {
    std::lock_guard<std::mutex> write(write_mutex_);
    auto s = snapshot();
    if (!revision_matches(req, s->revision)) {
        return error_response(409, "RevisionMismatch", "model is at revision " + std::to_string(s->revision),
                              {{"revision", s->revision}});
    }
    const auto body = parse_body(req);
    codec::ObjectReader r(body, "");
    const auto id = r.optional_id("id");
    const auto* state = r.optional("state");
    const bool clear = r.has("clear") && r.boolean("clear");
    r.finish();
    if (!id && !clear) throw SchemaError("id", "a block id", "missing key");
    if (state && clear) throw SchemaError("state", "either state or clear", "both");
    if (id && !state && !clear) throw SchemaError("state", "\"In\"|\"Out\"", "missing key");

    auto decisions = s->decisions;
    if (!id) {
        decisions.clear();
    } else {
        ModelIndex index(*s->model);
        if (!index.is(*id, ElementKind::FpBlock)) throw NotFoundError(*id, "functional block");
        if (clear) {
            decisions.erase(*id);
        } else {
            auto d = state->is_string() ? fp::decision_from_string(state->get<std::string>()) : std::nullopt;
            if (!d) codec::schema_fail("state", "\"In\"|\"Out\"", *state);
            decisions[*id] = *d;
        }
    }

    auto tree = fp::normalize(*s->model, options_.groups_enabled);
    auto result = fp::propagate(tree, decisions, {std::nullopt, options_.cap});
    if (result.conflict) {
        // Nothing is committed; the client keeps its previous state.
        return json_response(200, decision_body(result, s->decisions, s->revision, false));
    }
    auto next = std::make_shared<State>(*s);
    next->decisions = std::move(decisions);
    next->revision = s->revision + 1;
    auto out = decision_body(result, next->decisions, next->revision, true);
    commit(std::move(next));
    return json_response(200, out);
}

Response Session::post_selections(const Request& req) {
    std::lock_guard<std::mutex> write(write_mutex_);
    auto s = snapshot();
    if (!revision_matches(req, s->revision)) {
        return error_response(409, "RevisionMismatch", "model is at revision " + std::to_string(s->revision),
                              {{"revision", s->revision}});
    }
    const auto body = parse_body(req);
    codec::ObjectReader r(body, "");
    auto selections = codec::decode_selection(r.required("selections"), "selections");
    r.finish();
    sp::resolve_all(*s->model, selections);  // throws on an illegal choice
    auto next = std::make_shared<State>(*s);
    next->selections = std::move(selections);
    next->revision = s->revision + 1;
    json out{{"selections", codec::encode(next->selections)}, {"revision", next->revision}};
    commit(std::move(next));
    return json_response(200, out);
}

Response Session::post_model(const Request& req) {
    std::lock_guard<std::mutex> write(write_mutex_);
    auto s = snapshot();
    if (!revision_matches(req, s->revision)) {
        return error_response(409, "RevisionMismatch", "model is at revision " + std::to_string(s->revision),
                              {{"revision", s->revision}});
    }
    auto model = parse_document(req.body);
    auto diagnostics = validate_model(model);
    if (has_errors(diagnostics)) {
        return json_response(422, json{{"diagnostics", codec::encode(diagnostics)},
                                       {"committed", false},
                                       {"revision", s->revision}});
    }
    if (!options_.save_path.empty()) save_document(options_.save_path, model);
    auto next = std::make_shared<State>();
    next->model = std::make_shared<const Model>(std::move(model));
    next->revision = s->revision + 1;
    json out{{"diagnostics", codec::encode(all_diagnostics(*next->model, next->selections))},
             {"committed", true},
             {"revision", next->revision}};
    commit(std::move(next));
    return json_response(200, out);
}

// ---------------------------------------------------------------------------
// HTTP adapter

namespace {

const char* kBuiltinPage = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>imog</title></head>
<body>
<h1>imog service</h1>
<p>No UI assets were configured (start with <code>--static DIR</code>). JSON endpoints:</p>
<ul>
<li>GET /api/model, POST /api/model</li>
<li>GET /api/diagnostics</li>
<li>GET /api/fp/analysis?level=context&amp;groups=on</li>
<li>GET /api/fp/decisions, POST /api/fp/decisions</li>
<li>POST /api/sp/resolve</li>
<li>GET /api/sp/selections, POST /api/sp/selections</li>
<li>GET /api/trace/report</li>
</ul>
</body></html>
)";

}  // namespace

struct Server::Impl {
    Session& session;
    ServeOptions options;
    httplib::Server http;

    Impl(Session& s, ServeOptions o) : session(s), options(std::move(o)) {}

    static Request translate(const httplib::Request& in) {
        Request out;
        out.method = in.method;
        out.path = in.path;
        for (const auto& [k, v] : in.params) out.query.emplace(k, v);
        for (const auto& [k, v] : in.headers) {
            std::string key = k;
            std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            out.headers.emplace(key, v);
        }
        out.body = in.body;
        return out;
    }

    void setup() {
        // Method routes rather than the pre-routing hook: the hook fires before
        // the body has been read.
        auto api = [this](const httplib::Request& in, httplib::Response& res) {
            auto r = session.handle(translate(in));
            res.status = r.status;
            for (const auto& [k, v] : r.headers) res.set_header(k, v);
            if (!r.content_type.empty()) res.set_content(r.body, r.content_type);
        };
        const std::string pattern = "/api(/.*)?";
        http.Get(pattern, api);
        http.Post(pattern, api);
        http.Put(pattern, api);
        http.Patch(pattern, api);
        http.Delete(pattern, api);
        http.Options(pattern, api);
        if (!options.static_dir.empty()) {
            if (!http.set_mount_point("/", options.static_dir)) {
                throw std::runtime_error("static directory '" + options.static_dir + "' does not exist");
            }
        } else {
            http.Get("/", [](const httplib::Request&, httplib::Response& res) { res.set_content(kBuiltinPage, "text/html"); });
        }
    }
};

Server::Server(Session& session, ServeOptions options) : impl_(std::make_unique<Impl>(session, std::move(options))) {
    impl_->setup();
}

Server::~Server() { stop(); }

int Server::bind() {
    int port = impl_->options.port;
    if (port == 0) {
        port = impl_->http.bind_to_any_port(impl_->options.host);
    } else if (!impl_->http.bind_to_port(impl_->options.host, port)) {
        port = -1;
    }
    if (port < 0) {
        throw std::runtime_error("cannot bind " + impl_->options.host + ":" + std::to_string(impl_->options.port));
    }
    return port;
}

void Server::listen() { impl_->http.listen_after_bind(); }

void Server::stop() {
    if (impl_) impl_->http.stop();
}

}  // namespace imog::service
