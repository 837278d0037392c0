#pragma once

// Step cycle: classify against the pre-event state, commit the event, then
// read mood, attention and prospective affects off the post-event state.

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "affect/affect_kind.hpp"
#include "affect/classifier.hpp"
#include "affect/core.hpp"

namespace affect {

/// Event-type name to fixed utility.
using TypeTable = std::map<std::string, double>;

/// Agent names, indexed by ordinal - 1. Count-declared worlds use the
/// decimal ordinal as name.
struct Roster {
    std::vector<std::string> names;

    static Roster numbered(std::size_t count) {
        Roster r;
        for (std::size_t i = 1; i <= count; ++i) r.names.push_back(std::to_string(i));
        return r;
    }

    std::size_t size() const { return names.size(); }

    bool is_named() const {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] != std::to_string(i + 1)) return true;
        return false;
    }

    const std::string& name(AgentId id) const { return names.at(id.value - 1); }

    std::optional<AgentId> find(std::string_view name) const {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return AgentId(static_cast<std::uint32_t>(i + 1));
        return std::nullopt;
    }

    bool operator==(const Roster&) const = default;
};

/// Either a literal utility or an event-type label.
using UtilitySpec = std::variant<double, std::string>;

struct EventInput {
    AgentId causer;
    AgentId target;
    UtilitySpec utility;
};

struct RelationSnapshot {
    AgentId object;
    std::size_t count = 0;
    double sum = 0.0;
    double mean = 0.0;
    Attitude attitude = Attitude::neutral;

    bool operator==(const RelationSnapshot&) const = default;
};

struct AgentSnapshot {
    AgentId id;
    Mood mood;
    double efu = 0.0;
    std::optional<AgentId> attention;
    std::vector<RelationSnapshot> relations;

    bool operator==(const AgentSnapshot&) const = default;
};

struct StepResult {
    Event event;
    std::vector<AffectInstance> affects;
    std::vector<AgentSnapshot> agents;

    bool operator==(const StepResult&) const = default;
};

struct Trace {
    Roster roster;
    std::vector<StepResult> steps;
    std::vector<AgentSnapshot> final_agents;

    bool operator==(const Trace&) const = default;
};

inline std::vector<AgentSnapshot> snapshot(const WorldState& state) {
    std::vector<AgentSnapshot> out;
    out.reserve(state.agents.size());
    for (const auto& a : state.agents) {
        AgentSnapshot s;
        s.id = a.id;
        s.mood = mood(state, a.id);
        s.efu = expected_future_utility(state, a.id);
        s.attention = a.attention;
        for (const auto& [object, rel] : a.relations)
            s.relations.push_back({object, rel.count, rel.sum, rel.mean(), rel.attitude()});
        out.push_back(std::move(s));
    }
    return out;
}

inline double resolve_utility(const UtilitySpec& spec, const TypeTable& types, std::optional<std::string>& label) {
    if (const double* u = std::get_if<double>(&spec)) {
        label.reset();
        return *u;
    }
    const auto& name = std::get<std::string>(spec);
    auto it = types.find(name);
    if (it == types.end()) throw AffectError("unknown event type '" + name + "'");
    label = name;
    return it->second;
}

inline Event make_event(const WorldState& state, const EventInput& in, const TypeTable& types) {
    if (state.agents.empty()) throw AffectError("world has no agents");
    Event e;
    e.index = state.event_log.size() + 1;
    e.causer = in.causer;
    e.target = in.target;
    e.utility = resolve_utility(in.utility, types, e.label);
    if (e.utility == 0.0) e.utility = 0.0;
    validate_event(state, e);
    return e;
}

/// Pure step: returns the committed state and what happened.
inline std::pair<WorldState, StepResult> step(const WorldState& state, const EventInput& in,
                                              const TypeTable& types = {}) {
    const Event event = make_event(state, in, types);
    WorldState post = apply_event(state, event);
    StepResult r;
    r.event = event;
    r.affects = classify_all(state, post, event);
    r.agents = snapshot(post);
    return {std::move(post), std::move(r)};
}

inline StepResult preview(const WorldState& state, const EventInput& in, const TypeTable& types = {}) {
    return step(state, in, types).second;
}

/// Mutable world with history. Undo replays the retained log.
class Engine {
public:
    Engine() = default;
    Engine(Roster roster, TypeTable types)
        : roster_(std::move(roster)), types_(std::move(types)), state_(make_world(roster_.size())) {}

    const Roster& roster() const { return roster_; }
    const TypeTable& types() const { return types_; }
    const WorldState& state() const { return state_; }
    const std::vector<StepResult>& history() const { return history_; }

    StepResult step(const EventInput& in) {
        auto [next, result] = affect::step(state_, in, types_);
        state_ = std::move(next);
        history_.push_back(result);
        return result;
    }

    StepResult preview(const EventInput& in) const { return affect::preview(state_, in, types_); }

    /// Drops the last event. Returns false when there is nothing to undo.
    bool undo() {
        if (state_.event_log.empty()) return false;
        std::vector<Event> log = state_.event_log;
        log.pop_back();
        state_ = replay(roster_.size(), log);
        history_.pop_back();
        return true;
    }

    Trace trace() const { return Trace{roster_, history_, snapshot(state_)}; }

private:
    Roster roster_;
    TypeTable types_;
    WorldState state_;
    std::vector<StepResult> history_;
};

}  // namespace affect
