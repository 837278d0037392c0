#pragma once

// Appraisal of a single event from every agent's point of view.
//
// Event-related affects are computed from the state *before* the event is
// applied; prospective affects and consciousness tags use the state after it.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "affect/affect_kind.hpp"
#include "affect/core.hpp"

namespace affect {

/// Affect of the event's target, given its prior expectation of the causer.
inline std::optional<AffectKind> classify_target_affect(std::optional<double> expectation, double utility) {
    if (!expectation || *expectation == 0.0) {
        if (utility > 0) return AffectKind::delight;
        if (utility < 0) return AffectKind::fright;
        if (!expectation) return AffectKind::surprise;
        return std::nullopt;
    }
    const double e = *expectation;
    if (e > 0) return utility >= e ? AffectKind::satisfaction : AffectKind::disappointment;
    return utility <= e ? AffectKind::fears_confirmed : AffectKind::relief;
}

/// Utility as felt by an observer of an event aimed at an object it holds
/// `attitude` towards. Neutral counts as liked.
inline std::optional<double> observer_valence(Attitude attitude, double utility) {
    switch (attitude) {
        case Attitude::unknown: return std::nullopt;
        case Attitude::disliked: return -utility;
        case Attitude::liked:
        case Attitude::neutral: return utility;
    }
    return std::nullopt;
}

namespace detail {

inline AffectInstance agent_affect(AgentId experiencer, AffectKind kind, AgentId toward, std::size_t cause,
                                   double intensity) {
    AffectInstance a;
    a.experiencer = experiencer;
    a.kind = kind;
    a.target_kind = toward == experiencer ? TargetKind::self : TargetKind::agent;
    a.target_ref = toward.value;
    a.cause_event = cause;
    a.intensity = intensity;
    return a;
}

inline AffectInstance event_affect(AgentId experiencer, AffectKind kind, TargetKind tk, std::size_t cause,
                                   double intensity) {
    AffectInstance a;
    a.experiencer = experiencer;
    a.kind = kind;
    a.target_kind = tk;
    a.target_ref = static_cast<std::uint32_t>(cause);
    a.cause_event = cause;
    a.intensity = intensity;
    return a;
}

}  // namespace detail

/// Target's event affect, plus gratitude/anger toward another causer.
inline std::vector<AffectInstance> classify_target_event(const WorldState& state, const Event& event) {
    std::vector<AffectInstance> out;
    const auto e = expectation(state, event.target, event.causer);
    if (auto kind = classify_target_affect(e, event.utility)) {
        const double intensity = std::fabs(event.utility - e.value_or(0.0));
        out.push_back(detail::event_affect(event.target, *kind, TargetKind::event, event.index, intensity));
    }
    if (event.causer != event.target && event.utility != 0.0) {
        const auto kind = event.utility > 0 ? AffectKind::gratitude : AffectKind::anger;
        out.push_back(
            detail::agent_affect(event.target, kind, event.causer, event.index, std::fabs(event.utility)));
    }
    return out;
}

/// Reactions of an agent that is not the event's target.
inline std::vector<AffectInstance> classify_bystander_affects(const WorldState& state, AgentId observer,
                                                              const Event& event) {
    std::vector<AffectInstance> out;
    if (observer == event.target) return out;
    const Attitude att = attitude(state, observer, event.target);
    const auto valence = observer_valence(att, event.utility);
    if (!valence || event.utility == 0.0) return out;

    const double intensity = std::fabs(event.utility);
    const bool likes_target = att != Attitude::disliked;
    AffectKind toward_target;
    if (likes_target)
        toward_target = event.utility > 0 ? AffectKind::happy_for : AffectKind::pity;
    else
        toward_target = event.utility > 0 ? AffectKind::envy : AffectKind::gloating;
    out.push_back(detail::agent_affect(observer, toward_target, event.target, event.index, intensity));

    if (event.causer != observer) {
        const auto kind = *valence > 0 ? AffectKind::gratitude : AffectKind::anger;
        out.push_back(detail::agent_affect(observer, kind, event.causer, event.index, intensity));
    }
    return out;
}

/// Pride, or remorse with shame and self-directed anger, for the causer.
inline std::vector<AffectInstance> classify_causer_affects(const WorldState& state, AgentId causer,
                                                           const Event& event) {
    std::vector<AffectInstance> out;
    if (causer != event.causer) return out;
    const double self_expectation = expectation(state, causer, causer).value_or(0.0);
    double v = event.utility - self_expectation;
    if (event.target != causer && attitude(state, causer, event.target) == Attitude::disliked) v = -v;
    if (v == 0.0) return out;

    const double intensity = std::fabs(v);
    if (v > 0) {
        out.push_back(detail::event_affect(causer, AffectKind::pride, TargetKind::own_action, event.index, intensity));
    } else {
        out.push_back(
            detail::event_affect(causer, AffectKind::remorse, TargetKind::own_action, event.index, intensity));
        out.push_back(detail::agent_affect(causer, AffectKind::shame, causer, event.index, intensity));
        out.push_back(detail::agent_affect(causer, AffectKind::anger, causer, event.index, intensity));
    }
    return out;
}

/// Object-directed affects implied by the agent's current model.
inline std::vector<AffectInstance> prospective_affects(const WorldState& state, AgentId agent,
                                                       std::size_t cause_event = 0) {
    std::vector<AffectInstance> out;
    for (const auto& [object, rel] : state.agent(agent).relations) {
        const double m = rel.mean();
        const double intensity = std::fabs(m);
        if (m > 0) {
            out.push_back(detail::agent_affect(agent, AffectKind::hope, object, cause_event, intensity));
            out.push_back(detail::agent_affect(agent, AffectKind::desire, object, cause_event, intensity));
        } else if (m < 0) {
            out.push_back(detail::agent_affect(agent, AffectKind::fear, object, cause_event, intensity));
            out.push_back(detail::agent_affect(agent, AffectKind::disgust, object, cause_event, intensity));
        }
        if (rel.sum > 0)
            out.push_back(detail::agent_affect(agent, AffectKind::like, object, cause_event, intensity));
        else if (rel.sum < 0)
            out.push_back(detail::agent_affect(agent, AffectKind::dislike, object, cause_event, intensity));
    }
    return out;
}

/// The agent an affect is "about" for attention purposes.
inline AgentId attention_anchor(const AffectInstance& a, const Event& event) {
    if (a.is_agent_directed()) return AgentId(a.target_ref);
    return event.causer;
}

/// Marks as conscious exactly the affects anchored at `attention`.
inline void tag_consciousness(std::vector<AffectInstance>& affects, std::optional<AgentId> attention,
                              const Event& event) {
    for (auto& a : affects) {
        a.consciousness = attention && attention_anchor(a, event) == *attention ? Consciousness::conscious
                                                                                : Consciousness::preconscious;
    }
}

/// Every affect triggered by `event`, in canonical order, given the
/// pre-event state and the already computed post-event state.
inline std::vector<AffectInstance> classify_all(const WorldState& pre, const WorldState& post, const Event& event) {
    std::vector<AffectInstance> out = classify_target_event(pre, event);
    for (const auto& agent : pre.agents) {
        auto c = classify_causer_affects(pre, agent.id, event);
        out.insert(out.end(), c.begin(), c.end());
        auto b = classify_bystander_affects(pre, agent.id, event);
        out.insert(out.end(), b.begin(), b.end());
    }
    for (const auto& agent : post.agents) {
        auto p = prospective_affects(post, agent.id, event.index);
        out.insert(out.end(), p.begin(), p.end());
    }
    for (auto& a : out) {
        const auto att = post.agent(a.experiencer).attention;
        a.consciousness = att && attention_anchor(a, event) == *att ? Consciousness::conscious
                                                                     : Consciousness::preconscious;
    }
    std::stable_sort(out.begin(), out.end(), canonical_less);
    return out;
}

inline std::vector<AffectInstance> classify_all(const WorldState& pre, const Event& event) {
    return classify_all(pre, apply_event(pre, event), event);
}

}  // namespace affect
