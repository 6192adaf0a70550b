#ifndef IMOG_SERVICE_HPP
#define IMOG_SERVICE_HPP

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>

#include "imog/fp_engine.hpp"
#include "imog/model.hpp"
#include "imog/sp_engine.hpp"

namespace imog::service {

struct Request {
    std::string method;
    std::string path;
    std::map<std::string, std::string> query;
    std::map<std::string, std::string> headers;  // keys lower-case
    std::string body;
};

struct Response {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
    std::map<std::string, std::string> headers;
};

struct SessionOptions {
    bool groups_enabled = false;
    std::size_t cap = 64;
    /// Document written back by POST /api/model; nothing is written when empty.
    std::string save_path;
    std::string cors_origin = "*";
};

/// One loaded model plus the configurator's decisions and selections.
/// handle() is safe to call from many threads: reads work on an immutable
/// snapshot, writes are serialized and swap in a new snapshot.
class Session {
public:
    explicit Session(Model model, SessionOptions options = {});

    Response handle(const Request& request);

    std::int64_t revision() const;

    struct State {
        std::shared_ptr<const Model> model;
        fp::Decisions decisions;
        sp::SelectionState selections;
        std::int64_t revision = 0;
    };

private:
    std::shared_ptr<const State> snapshot() const;
    void commit(std::shared_ptr<const State> next);
    Response dispatch(const Request& request);
    Response post_decisions(const Request& request);
    Response post_selections(const Request& request);
    Response post_model(const Request& request);

    SessionOptions options_;
    mutable std::mutex state_mutex_;  // guards the pointer only
    std::mutex write_mutex_;          // one mutation at a time
    std::shared_ptr<const State> state_;
};

struct ServeOptions {
    std::string host = "127.0.0.1";
    int port = 8377;  // 0 picks a free port
    /// Directory with the UI assets; a small built-in page is served when empty.
    std::string static_dir;
};

/// HTTP adapter around a Session.
class Server {
public:
    Server(Session& session, ServeOptions options);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Binds the socket; returns the bound port. Throws std::runtime_error on failure.
    int bind();
    /// Blocks until stop() is called.
    void listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace imog::service

#endif  // IMOG_SERVICE_HPP
