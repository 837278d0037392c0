#pragma once

// HTTP session API. Each session owns an Engine; the event log is the only
// source of truth, so persistence and export are both just the session's
// script.
//
//   POST   /api/sessions                     create
//   GET    /api/sessions/{id}                state
//   DELETE /api/sessions/{id}                delete
//   POST   /api/sessions/{id}/events         commit one event
//   POST   /api/sessions/{id}/preview        same, without committing
//   POST   /api/sessions/{id}/undo           drop the last event
//   GET    /api/sessions/{id}/trace          canonical trace document
//   GET    /api/sessions/{id}/export?format=dsl|trace

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "affect/engine.hpp"
#include "affect/scenario.hpp"
#include "affect/trace_json.hpp"

namespace affect {

struct ServiceConfig {
    std::size_t max_agents = 64;
    std::string cors_origin = "*";
    /// Sessions idle for longer than this are dropped. Unset keeps them forever.
    std::optional<std::chrono::seconds> idle_ttl;
    /// When set, every session is mirrored to `<dir>/<id>.af` and reloaded on start.
    std::optional<std::filesystem::path> data_dir;
};

struct ApiResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

class Session {
public:
    using Clock = std::chrono::steady_clock;

    Session(std::string id, Engine engine)
        : id_(std::move(id)), engine_(std::move(engine)), created_(Clock::now()), updated_(created_) {}

    const std::string& id() const { return id_; }
    Clock::time_point created() const { return created_; }

    /// Serializes writers; readers take the same lock for a consistent copy.
    template <typename Fn>
    auto with_engine(Fn&& fn) {
        std::lock_guard lock(mutex_);
        updated_ = Clock::now();
        return fn(engine_);
    }

    Clock::time_point updated() const {
        std::lock_guard lock(mutex_);
        return updated_;
    }

private:
    std::string id_;
    mutable std::mutex mutex_;
    Engine engine_;
    Clock::time_point created_;
    Clock::time_point updated_;
};

/// Script that replays the session's events.
inline Scenario export_scenario(const Engine& engine) {
    Scenario sc;
    sc.roster = engine.roster();
    sc.types = engine.types();
    for (const auto& e : engine.state().event_log) {
        UtilitySpec u = e.label ? UtilitySpec(*e.label) : UtilitySpec(e.utility);
        sc.statements.emplace_back(EventStatement{e.causer, e.target, std::move(u)});
    }
    return sc;
}

class SessionStore {
public:
    explicit SessionStore(ServiceConfig config = {}) : config_(std::move(config)), rng_(std::random_device{}()) {
        if (config_.data_dir) load_all();
    }

    const ServiceConfig& config() const { return config_; }

    std::shared_ptr<Session> create(Roster roster, TypeTable types) {
        std::unique_lock lock(mutex_);
        evict_idle_locked();
        std::string id;
        do {
            id = new_id_locked();
        } while (sessions_.contains(id));
        auto s = std::make_shared<Session>(id, Engine(std::move(roster), std::move(types)));
        sessions_.emplace(id, s);
        lock.unlock();
        s->with_engine([&](Engine& e) { persist(*s, e); });
        return s;
    }

    std::shared_ptr<Session> find(const std::string& id) {
        {
            std::shared_lock lock(mutex_);
            auto it = sessions_.find(id);
            if (it == sessions_.end()) return nullptr;
            if (!expired(*it->second)) return it->second;
        }
        std::unique_lock lock(mutex_);
        evict_idle_locked();
        auto it = sessions_.find(id);
        return it == sessions_.end() ? nullptr : it->second;
    }

    bool erase(const std::string& id) {
        std::unique_lock lock(mutex_);
        if (sessions_.erase(id) == 0) return false;
        if (config_.data_dir) {
            std::error_code ec;
            std::filesystem::remove(*config_.data_dir / (id + ".af"), ec);
        }
        return true;
    }

    std::size_t size() const {
        std::shared_lock lock(mutex_);
        return sessions_.size();
    }

    /// Writes the session script to the data directory, if one is configured.
    /// Call with the session lock held (from inside with_engine).
    void persist(const Session& s, const Engine& engine) const {
        if (!config_.data_dir) return;
        const auto path = *config_.data_dir / (s.id() + ".af");
        const auto tmp = *config_.data_dir / (s.id() + ".af.tmp");
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out << serialize_scenario(export_scenario(engine));
            if (!out) throw std::runtime_error("cannot write " + tmp.string());
        }
        std::filesystem::rename(tmp, path);
    }

private:
    bool expired(const Session& s) const {
        return config_.idle_ttl && Session::Clock::now() - s.updated() > *config_.idle_ttl;
    }

    void evict_idle_locked() {
        if (!config_.idle_ttl) return;
        for (auto it = sessions_.begin(); it != sessions_.end();) {
            if (expired(*it->second)) {
                if (config_.data_dir) {
                    std::error_code ec;
                    std::filesystem::remove(*config_.data_dir / (it->first + ".af"), ec);
                }
                it = sessions_.erase(it);
            } else {
                ++it;
            }
        }
    }

    std::string new_id_locked() {
        static constexpr char hex[] = "0123456789abcdef";
        std::string id;
        auto bits = rng_();
        for (int i = 0; i < 16; ++i, bits >>= 4) id += hex[bits & 0xf];
        return id;
    }

    void load_all() {
        namespace fs = std::filesystem;
        fs::create_directories(*config_.data_dir);
        for (const auto& entry : fs::directory_iterator(*config_.data_dir)) {
            if (!entry.is_regular_file() || entry.path().extension() != ".af") continue;
            std::ifstream in(entry.path(), std::ios::binary);
            std::stringstream ss;
            ss << in.rdbuf();
            const Scenario sc = parse_scenario(ss.str());
            Engine engine(sc.roster, sc.types);
            for (const auto& st : sc.statements)
                if (const auto* ev = std::get_if<EventStatement>(&st))
                    engine.step(EventInput{ev->causer, ev->target, ev->utility});
            const auto id = entry.path().stem().string();
            sessions_.emplace(id, std::make_shared<Session>(id, std::move(engine)));
        }
    }

    ServiceConfig config_;
    mutable std::shared_mutex mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::mt19937_64 rng_;
};

/// Request handling, independent of the transport.
class Service {
public:
    explicit Service(ServiceConfig config = {}) : store_(std::move(config)) {}

    SessionStore& store() { return store_; }

    ApiResponse create_session(const std::string& body) {
        nlohmann::json req;
        if (auto err = parse_body(body, req)) return *err;
        if (!req.is_object() || !req.contains("agents")) return error(422, "missing 'agents'");
        const auto& agents = req["agents"];
        Roster roster;
        const std::size_t max = store_.config().max_agents;
        if (agents.is_number_integer()) {
            const auto n = agents.get<std::int64_t>();
            if (n < 1 || static_cast<std::uint64_t>(n) > max)
                return error(422, "agent count must be between 1 and " + std::to_string(max));
            roster = Roster::numbered(static_cast<std::size_t>(n));
        } else if (agents.is_array()) {
            if (agents.empty() || agents.size() > max)
                return error(422, "agent count must be between 1 and " + std::to_string(max));
            for (const auto& a : agents) {
                if (!a.is_string() || !is_name(a.get<std::string>()))
                    return error(422, "agent names must be identifiers");
                if (roster.find(a.get<std::string>())) return error(422, "duplicate agent name");
                roster.names.push_back(a.get<std::string>());
            }
        } else {
            return error(422, "'agents' must be a count or a list of names");
        }
        TypeTable types;
        if (req.contains("types")) {
            const auto& t = req["types"];
            if (!t.is_object()) return error(422, "'types' must map names to utilities");
            for (const auto& [name, value] : t.items()) {
                if (!is_name(name)) return error(422, "invalid event type name '" + name + "'");
                if (!value.is_number() || !std::isfinite(value.get<double>()))
                    return error(422, "utility of '" + name + "' must be a finite number");
                types.emplace(name, value.get<double>());
            }
        }
        auto s = store_.create(std::move(roster), std::move(types));
        return s->with_engine([&](Engine& e) { return ApiResponse{201, state_document(*s, e).dump()}; });
    }

    ApiResponse post_event(const std::string& id, const std::string& body, bool commit) {
        auto s = store_.find(id);
        if (!s) return error(404, "unknown session '" + id + "'");
        nlohmann::json req;
        if (auto err = parse_body(body, req)) return *err;
        return s->with_engine([&](Engine& e) -> ApiResponse {
            EventInput in;
            if (auto err = parse_event(req, e.roster(), in)) return *err;
            try {
                StepResult r = commit ? e.step(in) : e.preview(in);
                if (commit) store_.persist(*s, e);
                nlohmann::json out = {{"schema_version", kSchemaVersion}, {"session_id", s->id()}, {"step", step_to_json(r)}};
                return {200, out.dump()};
            } catch (const AffectError& ex) {
                return error(422, ex.what());
            }
        });
    }

    ApiResponse undo(const std::string& id) {
        auto s = store_.find(id);
        if (!s) return error(404, "unknown session '" + id + "'");
        return s->with_engine([&](Engine& e) -> ApiResponse {
            if (!e.undo()) return error(409, "nothing to undo");
            store_.persist(*s, e);
            return {200, state_document(*s, e).dump()};
        });
    }

    ApiResponse get_state(const std::string& id) {
        auto s = store_.find(id);
        if (!s) return error(404, "unknown session '" + id + "'");
        return s->with_engine([&](Engine& e) { return ApiResponse{200, state_document(*s, e).dump()}; });
    }

    ApiResponse get_trace(const std::string& id) {
        auto s = store_.find(id);
        if (!s) return error(404, "unknown session '" + id + "'");
        return s->with_engine([&](Engine& e) { return ApiResponse{200, encode_trace(e.trace())}; });
    }

    ApiResponse export_session(const std::string& id, const std::string& format) {
        auto s = store_.find(id);
        if (!s) return error(404, "unknown session '" + id + "'");
        if (format == "trace") return get_trace(id);
        if (format != "dsl") return error(422, "format must be 'dsl' or 'trace'");
        return s->with_engine([&](Engine& e) {
            return ApiResponse{200, serialize_scenario(export_scenario(e)), "text/plain; charset=utf-8"};
        });
    }

    ApiResponse delete_session(const std::string& id) {
        if (!store_.erase(id)) return error(404, "unknown session '" + id + "'");
        nlohmann::json out = {{"schema_version", kSchemaVersion}, {"deleted", id}};
        return {200, out.dump()};
    }

    /// Registers the API routes and CORS handling on `server`.
    void mount(httplib::Server& server) {
        const std::string origin = store_.config().cors_origin;
        if (!origin.empty()) server.set_default_headers({{"Access-Control-Allow-Origin", origin}});
        auto send = [](httplib::Response& res, const ApiResponse& r) {
            res.status = r.status;
            res.set_content(r.body, r.content_type);
        };
        const std::string sid = R"(/api/sessions/([A-Za-z0-9_-]+))";

        server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
            res.status = 204;
            res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
            res.set_header("Access-Control-Allow-Headers", "Content-Type");
        });
        server.Post("/api/sessions", [this, send](const httplib::Request& req, httplib::Response& res) {
            send(res, create_session(req.body));
        });
        server.Get(sid, [this, send](const httplib::Request& req, httplib::Response& res) {
            send(res, get_state(req.matches[1]));
        });
        server.Delete(sid, [this, send](const httplib::Request& req, httplib::Response& res) {
            send(res, delete_session(req.matches[1]));
        });
        server.Post(sid + "/events", [this, send](const httplib::Request& req, httplib::Response& res) {
            send(res, post_event(req.matches[1], req.body, true));
        });
        server.Post(sid + "/preview", [this, send](const httplib::Request& req, httplib::Response& res) {
            send(res, post_event(req.matches[1], req.body, false));
        });
        server.Post(sid + "/undo", [this, send](const httplib::Request& req, httplib::Response& res) {
            send(res, undo(req.matches[1]));
        });
        server.Get(sid + "/trace", [this, send](const httplib::Request& req, httplib::Response& res) {
            send(res, get_trace(req.matches[1]));
        });
        server.Get(sid + "/export", [this, send](const httplib::Request& req, httplib::Response& res) {
            send(res, export_session(req.matches[1], req.has_param("format") ? req.get_param_value("format") : "dsl"));
        });
    }

private:
    static ApiResponse error(int status, const std::string& message) {
        nlohmann::json out = {{"schema_version", kSchemaVersion}, {"error", message}};
        return {status, out.dump()};
    }

    static std::optional<ApiResponse> parse_body(const std::string& body, nlohmann::json& out) {
        out = nlohmann::json::parse(body, nullptr, false);
        if (out.is_discarded()) return error(422, "request body is not valid JSON");
        return std::nullopt;
    }

    static std::optional<ApiResponse> parse_agent(const nlohmann::json& req, const char* key, const Roster& roster,
                                                  AgentId& out) {
        if (!req.contains(key)) return error(422, std::string("missing '") + key + "'");
        const auto& v = req[key];
        if (v.is_number_integer()) {
            const auto n = v.get<std::int64_t>();
            if (n < 1 || static_cast<std::uint64_t>(n) > roster.size())
                return error(422, "unknown agent " + std::to_string(n));
            out = AgentId(static_cast<std::uint32_t>(n));
            return std::nullopt;
        }
        if (v.is_string()) {
            if (auto id = roster.find(v.get<std::string>())) {
                out = *id;
                return std::nullopt;
            }
            return error(422, "unknown agent '" + v.get<std::string>() + "'");
        }
        return error(422, std::string("'") + key + "' must be an agent id or name");
    }

    static std::optional<ApiResponse> parse_event(const nlohmann::json& req, const Roster& roster, EventInput& in) {
        if (!req.is_object()) return error(422, "event body must be an object");
        if (auto err = parse_agent(req, "causer", roster, in.causer)) return err;
        if (auto err = parse_agent(req, "target", roster, in.target)) return err;
        if (req.contains("utility")) {
            const auto& u = req["utility"];
            if (!u.is_number()) return error(422, "'utility' must be a number");
            in.utility = u.get<double>();
        } else if (req.contains("type")) {
            if (!req["type"].is_string()) return error(422, "'type' must be a string");
            in.utility = req["type"].get<std::string>();
        } else {
            return error(422, "missing 'utility' or 'type'");
        }
        return std::nullopt;
    }

    static nlohmann::json state_document(const Session& s, const Engine& e) {
        nlohmann::json types = nlohmann::json::object();
        for (const auto& [name, value] : e.types()) types[name] = value;
        return {{"schema_version", kSchemaVersion},
                {"session_id", s.id()},
                {"agents", roster_to_json(e.roster())},
                {"types", std::move(types)},
                {"event_count", e.state().event_log.size()},
                {"snapshot", agents_to_json(snapshot(e.state()))}};
    }

    SessionStore store_;
};

}  // namespace affect
