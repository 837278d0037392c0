#pragma once

// Canonical trace documents (schema_version 1). Keys are sorted and zeros
// are unsigned so identical traces always encode to identical bytes.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "affect/engine.hpp"

namespace affect {

inline constexpr int kSchemaVersion = 1;

class TraceError : public std::runtime_error {
public:
    TraceError(std::string position, const std::string& what)
        : std::runtime_error(position + ": " + what), position_(std::move(position)) {}

    /// Byte offset ("byte 120") or JSON pointer ("/steps/3/event") of the problem.
    const std::string& position() const { return position_; }

private:
    std::string position_;
};

namespace json_detail {

using nlohmann::json;

inline double canonical(double v) { return v == 0.0 ? 0.0 : v; }

inline json encode_event(const Event& e) {
    json j = {{"causer", e.causer.value}, {"target", e.target.value}, {"utility", canonical(e.utility)}};
    if (e.label) j["label"] = *e.label;
    return j;
}

inline json encode_affect(const AffectInstance& a) {
    return {{"agent", a.experiencer.value},
            {"kind", to_string(a.kind)},
            {"target_kind", to_string(a.target_kind)},
            {"target", a.target_ref},
            {"intensity", canonical(a.intensity)},
            {"consciousness", to_string(a.consciousness)}};
}

inline json encode_agent(const AgentSnapshot& s) {
    json rels = json::array();
    for (const auto& r : s.relations)
        rels.push_back({{"object", r.object.value},
                        {"count", r.count},
                        {"sum", canonical(r.sum)},
                        {"mean", canonical(r.mean)},
                        {"attitude", to_string(r.attitude)}});
    return {{"id", s.id.value},
            {"mood", to_string(s.mood.label)},
            {"depressed", s.mood.depressed},
            {"efu", canonical(s.efu)},
            {"attention", s.attention ? json(s.attention->value) : json(nullptr)},
            {"relations", std::move(rels)}};
}

inline json encode_agents(const std::vector<AgentSnapshot>& agents) {
    json out = json::array();
    for (const auto& a : agents) out.push_back(encode_agent(a));
    return out;
}

// Decoding helpers carry a JSON pointer for error positions.
struct Reader {
    const json& j;
    std::string path;

    Reader at(const std::string& key) const {
        if (!j.is_object()) throw TraceError(path.empty() ? "/" : path, "expected object");
        auto it = j.find(key);
        if (it == j.end()) throw TraceError(path.empty() ? "/" : path, "missing key '" + key + "'");
        return {*it, path + "/" + key};
    }
    bool has(const std::string& key) const { return j.is_object() && j.contains(key); }
    Reader at(std::size_t i) const { return {j.at(i), path + "/" + std::to_string(i)}; }

    const json& array() const {
        if (!j.is_array()) throw TraceError(path, "expected array");
        return j;
    }
    double number() const {
        if (!j.is_number()) throw TraceError(path, "expected number");
        return j.get<double>();
    }
    std::uint64_t uint() const {
        if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
            throw TraceError(path, "expected non-negative integer");
        return j.get<std::uint64_t>();
    }
    AgentId agent(std::size_t agent_count) const {
        auto v = uint();
        if (v < 1 || v > agent_count) throw TraceError(path, "agent id out of range");
        return AgentId(static_cast<std::uint32_t>(v));
    }
    std::string str() const {
        if (!j.is_string()) throw TraceError(path, "expected string");
        return j.get<std::string>();
    }
    bool boolean() const {
        if (!j.is_boolean()) throw TraceError(path, "expected boolean");
        return j.get<bool>();
    }
};

inline Event decode_event(const Reader& r, std::size_t index, std::size_t n) {
    Event e;
    e.index = index;
    e.causer = r.at("causer").agent(n);
    e.target = r.at("target").agent(n);
    e.utility = r.at("utility").number();
    if (r.has("label")) e.label = r.at("label").str();
    return e;
}

inline AffectInstance decode_affect(const Reader& r, std::size_t cause, std::size_t n) {
    AffectInstance a;
    a.experiencer = r.at("agent").agent(n);
    auto kind = parse_affect_kind(r.at("kind").str());
    if (!kind || to_string(*kind) != r.at("kind").str()) throw TraceError(r.path + "/kind", "unknown affect kind");
    a.kind = *kind;
    auto tk = parse_target_kind(r.at("target_kind").str());
    if (!tk) throw TraceError(r.path + "/target_kind", "unknown target kind");
    a.target_kind = *tk;
    a.target_ref = static_cast<std::uint32_t>(r.at("target").uint());
    a.cause_event = cause;
    a.intensity = r.at("intensity").number();
    auto c = parse_consciousness(r.at("consciousness").str());
    if (!c) throw TraceError(r.path + "/consciousness", "unknown consciousness level");
    a.consciousness = *c;
    return a;
}

inline Attitude decode_attitude(const Reader& r) {
    const auto s = r.str();
    for (auto a : {Attitude::liked, Attitude::neutral, Attitude::disliked, Attitude::unknown})
        if (to_string(a) == s) return a;
    throw TraceError(r.path, "unknown attitude");
}

inline MoodLabel decode_mood(const Reader& r) {
    const auto s = r.str();
    for (auto m : {MoodLabel::good, MoodLabel::neutral, MoodLabel::bad})
        if (to_string(m) == s) return m;
    throw TraceError(r.path, "unknown mood");
}

inline std::vector<AgentSnapshot> decode_agents(const Reader& r, std::size_t n) {
    std::vector<AgentSnapshot> out;
    const auto& arr = r.array();
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const Reader a = r.at(i);
        AgentSnapshot s;
        s.id = a.at("id").agent(n);
        s.mood.label = decode_mood(a.at("mood"));
        s.mood.depressed = a.at("depressed").boolean();
        s.efu = a.at("efu").number();
        const Reader att = a.at("attention");
        if (!att.j.is_null()) s.attention = att.agent(n);
        const Reader rels = a.at("relations");
        for (std::size_t k = 0; k < rels.array().size(); ++k) {
            const Reader rel = rels.at(k);
            RelationSnapshot rs;
            rs.object = rel.at("object").agent(n);
            rs.count = rel.at("count").uint();
            rs.sum = rel.at("sum").number();
            rs.mean = rel.at("mean").number();
            rs.attitude = decode_attitude(rel.at("attitude"));
            s.relations.push_back(rs);
        }
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace json_detail

inline nlohmann::json step_to_json(const StepResult& s) {
    using nlohmann::json;
    json affects = json::array();
    for (const auto& a : s.affects) affects.push_back(json_detail::encode_affect(a));
    return {{"index", s.event.index},
            {"event", json_detail::encode_event(s.event)},
            {"affects", std::move(affects)},
            {"agents", json_detail::encode_agents(s.agents)}};
}

inline nlohmann::json roster_to_json(const Roster& r) {
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t i = 0; i < r.size(); ++i) out.push_back({{"id", i + 1}, {"name", r.names[i]}});
    return out;
}

inline nlohmann::json agents_to_json(const std::vector<AgentSnapshot>& agents) {
    return json_detail::encode_agents(agents);
}

inline nlohmann::json trace_to_json(const Trace& t) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : t.steps) steps.push_back(step_to_json(s));
    return {{"schema_version", kSchemaVersion},
            {"agents", roster_to_json(t.roster)},
            {"steps", std::move(steps)},
            {"final", json_detail::encode_agents(t.final_agents)}};
}

/// Pretty-printed canonical document with a trailing newline.
inline std::string encode_trace(const Trace& t) { return trace_to_json(t).dump(2) + "\n"; }

inline Trace trace_from_json(const nlohmann::json& doc) {
    using json_detail::Reader;
    const Reader root{doc, ""};
    const auto version = root.at("schema_version").uint();
    if (version != static_cast<std::uint64_t>(kSchemaVersion))
        throw TraceError("/schema_version", "unsupported schema version " + std::to_string(version));
    Trace t;
    const Reader agents = root.at("agents");
    for (std::size_t i = 0; i < agents.array().size(); ++i) {
        const Reader a = agents.at(i);
        if (a.at("id").uint() != i + 1) throw TraceError(a.path + "/id", "agent ids must be 1..n in order");
        t.roster.names.push_back(a.at("name").str());
    }
    const std::size_t n = t.roster.size();
    const Reader steps = root.at("steps");
    for (std::size_t i = 0; i < steps.array().size(); ++i) {
        const Reader s = steps.at(i);
        const auto index = s.at("index").uint();
        if (index != i + 1) throw TraceError(s.path + "/index", "step indices must be 1..n in order");
        StepResult r;
        r.event = json_detail::decode_event(s.at("event"), index, n);
        const Reader affects = s.at("affects");
        for (std::size_t k = 0; k < affects.array().size(); ++k)
            r.affects.push_back(json_detail::decode_affect(affects.at(k), index, n));
        r.agents = json_detail::decode_agents(s.at("agents"), n);
        t.steps.push_back(std::move(r));
    }
    t.final_agents = json_detail::decode_agents(root.at("final"), n);
    return t;
}

/// Parses a trace document. Throws TraceError carrying a byte offset for
/// syntax errors and a JSON pointer for schema errors.
inline Trace decode_trace(std::string_view document) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(document);
    } catch (const nlohmann::json::parse_error& e) {
        throw TraceError("byte " + std::to_string(e.byte), e.what());
    }
    return trace_from_json(doc);
}

}  // namespace affect
