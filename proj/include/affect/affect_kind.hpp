#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "affect/core.hpp"

namespace affect {

// Declaration order is the canonical output order.
enum class AffectKind : std::uint8_t {
    delight,
    fright,
    surprise,
    hope,
    fear,
    satisfaction,
    disappointment,
    fears_confirmed,
    relief,
    pride,
    shame,
    remorse,
    gratitude,
    anger,
    happy_for,
    pity,
    envy,
    gloating,
    desire,
    disgust,
    like,
    dislike,
};

inline constexpr std::size_t kAffectKindCount = 22;

inline constexpr std::array<std::string_view, kAffectKindCount> kAffectKindNames = {
    "delight",  "fright",    "surprise", "hope",  "fear",      "satisfaction", "disappointment", "fears_confirmed",
    "relief",   "pride",     "shame",    "remorse", "gratitude", "anger",      "happy_for",      "pity",
    "envy",     "gloating",  "desire",   "disgust", "like",     "dislike",
};

inline std::string_view to_string(AffectKind k) { return kAffectKindNames[static_cast<std::size_t>(k)]; }

/// Accepts canonical names and the aliases resentment, love and hate.
inline std::optional<AffectKind> parse_affect_kind(std::string_view name) {
    if (name == "resentment") return AffectKind::envy;
    if (name == "love") return AffectKind::like;
    if (name == "hate") return AffectKind::dislike;
    for (std::size_t i = 0; i < kAffectKindCount; ++i)
        if (kAffectKindNames[i] == name) return static_cast<AffectKind>(i);
    return std::nullopt;
}

enum class TargetKind : std::uint8_t { event, agent, self, own_action };

inline std::string_view to_string(TargetKind t) {
    switch (t) {
        case TargetKind::event: return "event";
        case TargetKind::agent: return "agent";
        case TargetKind::self: return "self";
        case TargetKind::own_action: return "own_action";
    }
    return "event";
}

inline std::optional<TargetKind> parse_target_kind(std::string_view s) {
    if (s == "event") return TargetKind::event;
    if (s == "agent") return TargetKind::agent;
    if (s == "self") return TargetKind::self;
    if (s == "own_action") return TargetKind::own_action;
    return std::nullopt;
}

enum class Consciousness : std::uint8_t { preconscious, conscious };

inline std::string_view to_string(Consciousness c) {
    return c == Consciousness::conscious ? "conscious" : "preconscious";
}

inline std::optional<Consciousness> parse_consciousness(std::string_view s) {
    if (s == "conscious") return Consciousness::conscious;
    if (s == "preconscious") return Consciousness::preconscious;
    return std::nullopt;
}

/// One classified affect.
///
/// `target_ref` holds an event index for `event` and `own_action` targets and
/// an agent ordinal for `agent` and `self` targets.
struct AffectInstance {
    AgentId experiencer;
    AffectKind kind = AffectKind::delight;
    TargetKind target_kind = TargetKind::event;
    std::uint32_t target_ref = 0;
    std::size_t cause_event = 0;
    double intensity = 0.0;
    Consciousness consciousness = Consciousness::preconscious;

    bool operator==(const AffectInstance&) const = default;

    bool is_agent_directed() const { return target_kind == TargetKind::agent || target_kind == TargetKind::self; }
    std::optional<AgentId> target_agent() const {
        if (is_agent_directed()) return AgentId(target_ref);
        return std::nullopt;
    }
};

inline bool canonical_less(const AffectInstance& a, const AffectInstance& b) {
    if (a.experiencer != b.experiencer) return a.experiencer < b.experiencer;
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.target_kind != b.target_kind) return a.target_kind < b.target_kind;
    return a.target_ref < b.target_ref;
}

}  // namespace affect
