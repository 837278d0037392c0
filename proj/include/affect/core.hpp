#pragma once

// Domain types and state arithmetic for the affect model: per-object
// relations built from directly experienced events, expectations,
// attitudes, mood, attention and expected future utility.

#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace affect {

/// Numeric tolerance used wherever two utilities are compared for equality.
inline constexpr double kTolerance = 1e-9;

inline bool nearly_equal(double a, double b, double tol = kTolerance) {
    return std::fabs(a - b) <= tol;
}

class AffectError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// 1-based agent ordinal.
struct AgentId {
    std::uint32_t value = 0;

    constexpr AgentId() = default;
    constexpr explicit AgentId(std::uint32_t v) : value(v) {}

    constexpr auto operator<=>(const AgentId&) const = default;
};

inline std::string to_string(AgentId id) { return std::to_string(id.value); }

struct Event {
    std::size_t index = 0;
    AgentId causer;
    AgentId target;
    double utility = 0.0;
    std::optional<std::string> label;

    bool operator==(const Event&) const = default;
};

enum class Attitude { liked, neutral, disliked, unknown };

std::string_view to_string(Attitude a);

inline Attitude attitude_of_sum(double sum) {
    if (sum > 0) return Attitude::liked;
    if (sum < 0) return Attitude::disliked;
    return Attitude::neutral;
}

/// Observer's model of one object. Only exists after a first direct event.
struct Relation {
    AgentId object;
    std::size_t count = 0;
    double sum = 0.0;

    double mean() const { return sum / static_cast<double>(count); }
    Attitude attitude() const { return attitude_of_sum(sum); }

    bool operator==(const Relation&) const = default;
};

struct AgentState {
    AgentId id;
    std::map<AgentId, Relation> relations;
    std::size_t received_count = 0;
    double received_sum = 0.0;
    std::optional<AgentId> attention;

    bool operator==(const AgentState&) const = default;
};

enum class MoodLabel { good, neutral, bad };

std::string_view to_string(MoodLabel m);

struct Mood {
    MoodLabel label = MoodLabel::neutral;
    bool depressed = false;

    bool operator==(const Mood&) const = default;
};

struct WorldState {
    std::vector<AgentState> agents;
    std::vector<Event> event_log;

    bool operator==(const WorldState&) const = default;

    std::size_t agent_count() const { return agents.size(); }
    bool contains(AgentId id) const { return id.value >= 1 && id.value <= agents.size(); }

    const AgentState& agent(AgentId id) const {
        require(id);
        return agents[id.value - 1];
    }
    AgentState& agent(AgentId id) {
        require(id);
        return agents[id.value - 1];
    }

    void require(AgentId id) const {
        if (!contains(id)) throw AffectError("unknown agent " + to_string(id));
    }
};

// ---------------------------------------------------------------------------

inline std::string_view to_string(Attitude a) {
    switch (a) {
        case Attitude::liked: return "liked";
        case Attitude::neutral: return "neutral";
        case Attitude::disliked: return "disliked";
        case Attitude::unknown: return "unknown";
    }
    return "unknown";
}

inline std::string_view to_string(MoodLabel m) {
    switch (m) {
        case MoodLabel::good: return "good";
        case MoodLabel::neutral: return "neutral";
        case MoodLabel::bad: return "bad";
    }
    return "neutral";
}

inline WorldState make_world(std::size_t agent_count) {
    WorldState w;
    w.agents.reserve(agent_count);
    for (std::size_t i = 1; i <= agent_count; ++i) {
        AgentState a;
        a.id = AgentId(static_cast<std::uint32_t>(i));
        w.agents.push_back(std::move(a));
    }
    return w;
}

inline std::optional<double> expectation(const WorldState& state, AgentId observer, AgentId object) {
    state.require(object);
    const auto& rels = state.agent(observer).relations;
    auto it = rels.find(object);
    if (it == rels.end()) return std::nullopt;
    return it->second.mean();
}

inline Attitude attitude(const WorldState& state, AgentId observer, AgentId object) {
    state.require(object);
    const auto& rels = state.agent(observer).relations;
    auto it = rels.find(object);
    if (it == rels.end()) return Attitude::unknown;
    return it->second.attitude();
}

/// Sum of the means of every relation in the agent's model.
inline double expected_future_utility(const WorldState& state, AgentId agent) {
    double total = 0.0;
    for (const auto& [object, rel] : state.agent(agent).relations) total += rel.mean();
    return total;
}

inline Mood mood(const WorldState& state, AgentId agent) {
    const auto& a = state.agent(agent);
    Mood m;
    if (a.received_count > 0) {
        const double avg = a.received_sum / static_cast<double>(a.received_count);
        if (avg > 0)
            m.label = MoodLabel::good;
        else if (avg < 0)
            m.label = MoodLabel::bad;
    }
    if (!a.relations.empty()) {
        m.depressed = true;
        for (const auto& [object, rel] : a.relations) {
            if (rel.mean() > 0) {
                m.depressed = false;
                break;
            }
        }
    }
    return m;
}

/// Object with the largest |mean|; ties go to the lowest ordinal.
inline std::optional<AgentId> compute_attention(const AgentState& a) {
    std::optional<AgentId> best;
    double best_abs = -1.0;
    // relations are ordered by ordinal, so strict > keeps the lowest on ties
    for (const auto& [object, rel] : a.relations) {
        const double m = std::fabs(rel.mean());
        if (m > best_abs) {
            best_abs = m;
            best = object;
        }
    }
    return best;
}

inline std::optional<AgentId> attention(const WorldState& state, AgentId agent) {
    return compute_attention(state.agent(agent));
}

inline void validate_event(const WorldState& state, const Event& event) {
    state.require(event.causer);
    state.require(event.target);
    if (!std::isfinite(event.utility)) throw AffectError("utility must be finite");
    if (event.index != state.event_log.size() + 1)
        throw AffectError("event index " + std::to_string(event.index) + " out of sequence, expected " +
                          std::to_string(state.event_log.size() + 1));
}

/// Commits one event: only the target's relation toward the causer changes.
inline WorldState apply_event(WorldState state, const Event& event) {
    validate_event(state, event);
    auto& target = state.agent(event.target);
    auto [it, inserted] = target.relations.try_emplace(event.causer, Relation{event.causer, 0, 0.0});
    it->second.count += 1;
    it->second.sum += event.utility;
    target.received_count += 1;
    target.received_sum += event.utility;
    target.attention = compute_attention(target);
    state.event_log.push_back(event);
    return state;
}

inline WorldState replay(std::size_t agent_count, const std::vector<Event>& log) {
    WorldState w = make_world(agent_count);
    for (const auto& e : log) w = apply_event(std::move(w), e);
    return w;
}

}  // namespace affect
