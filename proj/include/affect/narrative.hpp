#pragma once

// Plain-text rendering of a run, phrased for reading side by side with a
// hand-written description of the same events.

#include <ostream>
#include <string>

#include "affect/engine.hpp"
#include "affect/number.hpp"

namespace affect {

namespace narrative_detail {

inline std::string agent_label(const Roster& r, AgentId id) {
    return r.is_named() ? r.name(id) : "agent " + r.name(id);
}

inline std::string object_label(const Roster& r, const AffectInstance& a) {
    if (a.target_kind == TargetKind::self) return "itself";
    return agent_label(r, AgentId(a.target_ref));
}

}  // namespace narrative_detail

inline std::string describe(const Roster& r, const AffectInstance& a) {
    const std::string obj = a.is_agent_directed() ? narrative_detail::object_label(r, a) : std::string();
    switch (a.kind) {
        case AffectKind::delight: return "is delighted";
        case AffectKind::fright: return "is frightened";
        case AffectKind::surprise: return "is surprised";
        case AffectKind::hope: return "hopes for good from " + obj;
        case AffectKind::fear: return "fears harm from " + obj;
        case AffectKind::satisfaction: return "feels satisfaction";
        case AffectKind::disappointment: return "is disappointed";
        case AffectKind::fears_confirmed: return "has its fears confirmed";
        case AffectKind::relief: return "feels relief";
        case AffectKind::pride: return "feels pride of its own action";
        case AffectKind::shame: return "feels shame";
        case AffectKind::remorse: return "feels remorse";
        case AffectKind::gratitude: return "feels gratitude towards " + obj;
        case AffectKind::anger: return "feels anger towards " + obj;
        case AffectKind::happy_for: return "is happy for " + obj;
        case AffectKind::pity: return "feels pity towards " + obj;
        case AffectKind::envy: return "feels envy towards " + obj;
        case AffectKind::gloating: return "gloats over " + obj;
        case AffectKind::desire: return "desires " + obj;
        case AffectKind::disgust: return "is disgusted by " + obj;
        case AffectKind::like: return "likes " + obj;
        case AffectKind::dislike: return "dislikes " + obj;
    }
    return std::string(to_string(a.kind));
}

inline bool is_prospective(AffectKind k) {
    switch (k) {
        case AffectKind::hope:
        case AffectKind::fear:
        case AffectKind::desire:
        case AffectKind::disgust:
        case AffectKind::like:
        case AffectKind::dislike: return true;
        default: return false;
    }
}

/// Event-driven affects first, then a one-line state summary per agent.
inline void write_step(std::ostream& out, const Roster& r, const StepResult& s) {
    using narrative_detail::agent_label;
    const auto& e = s.event;
    out << "step " << e.index << ": " << agent_label(r, e.causer) << " gives " << agent_label(r, e.target)
        << " a utility of " << format_number(e.utility);
    if (e.label) out << " (" << *e.label << ")";
    out << '\n';
    for (const auto& a : s.affects) {
        if (is_prospective(a.kind)) continue;
        out << "  " << agent_label(r, a.experiencer) << ' ' << describe(r, a) << " [" << to_string(a.consciousness)
            << ", " << format_number(a.intensity) << "]\n";
    }
    for (const auto& ag : s.agents) {
        out << "  * " << agent_label(r, ag.id) << ": mood " << to_string(ag.mood.label);
        if (ag.mood.depressed) out << " (depressed)";
        out << ", expects " << format_number(ag.efu);
        if (ag.attention) out << ", attends to " << agent_label(r, *ag.attention);
        for (const auto kind : {AffectKind::like, AffectKind::dislike}) {
            std::string objects;
            for (const auto& a : s.affects) {
                if (a.experiencer != ag.id || a.kind != kind) continue;
                objects += (objects.empty() ? " " : ", ") + narrative_detail::object_label(r, a);
            }
            if (!objects.empty()) out << "; " << to_string(kind) << 's' << objects;
        }
        out << '\n';
    }
}

inline void write_narrative(std::ostream& out, const Trace& t) {
    out << t.roster.size() << " agents\n";
    for (const auto& s : t.steps) write_step(out, t.roster, s);
}

}  // namespace affect
