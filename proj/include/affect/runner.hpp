#pragma once

#include <optional>
#include <string>
#include <vector>

#include "affect/engine.hpp"
#include "affect/number.hpp"
#include "affect/scenario.hpp"

namespace affect {

struct AssertionResult {
    Assertion assertion;
    std::size_t step = 0;  // events committed when evaluated
    bool passed = false;
    std::string message;
};

struct RunReport {
    Trace trace;
    std::vector<AssertionResult> results;

    const AssertionResult* first_failure() const {
        for (const auto& r : results)
            if (!r.passed) return &r;
        return nullptr;
    }
    std::size_t failures() const {
        std::size_t n = 0;
        for (const auto& r : results) n += r.passed ? 0 : 1;
        return n;
    }
};

inline bool matches_toward(const AffectInstance& a, const Toward& t) {
    switch (t.kind) {
        case Toward::Kind::event:
            return a.target_kind == TargetKind::event || a.target_kind == TargetKind::own_action;
        case Toward::Kind::self: return a.is_agent_directed() && a.target_ref == a.experiencer.value;
        case Toward::Kind::agent: return a.is_agent_directed() && a.target_ref == t.agent.value;
    }
    return false;
}

/// Checks one assertion against the most recent step and the current state.
inline AssertionResult evaluate_assertion(const Assertion& a, const Engine& engine) {
    AssertionResult r{a, engine.state().event_log.size(), false, {}};
    const auto& state = engine.state();
    const auto& roster = engine.roster();
    const std::string who = "agent " + roster.name(a.subject);
    switch (a.kind) {
        case AssertionKind::feels: {
            if (engine.history().empty()) {
                r.message = who + " cannot feel anything before the first event";
                return r;
            }
            for (const auto& inst : engine.history().back().affects) {
                if (inst.experiencer == a.subject && inst.kind == a.affect && (!a.toward || matches_toward(inst, *a.toward))) {
                    r.passed = true;
                    return r;
                }
            }
            r.message = who + " does not feel " + std::string(to_string(a.affect));
            if (a.toward) {
                switch (a.toward->kind) {
                    case Toward::Kind::self: r.message += " toward self"; break;
                    case Toward::Kind::event: r.message += " toward the event"; break;
                    case Toward::Kind::agent: r.message += " toward agent " + roster.name(a.toward->agent); break;
                }
            }
            return r;
        }
        case AssertionKind::expects: {
            const auto e = expectation(state, a.subject, a.object);
            r.passed = e && nearly_equal(*e, a.value);
            if (!r.passed)
                r.message = who + " expects " + (e ? format_number(*e) : std::string("nothing")) + " from agent " +
                            roster.name(a.object) + ", wanted " + format_number(a.value);
            return r;
        }
        case AssertionKind::efu: {
            const double v = expected_future_utility(state, a.subject);
            r.passed = nearly_equal(v, a.value);
            if (!r.passed)
                r.message = who + " expected future utility is " + format_number(v) + ", wanted " + format_number(a.value);
            return r;
        }
        case AssertionKind::mood: {
            const Mood m = mood(state, a.subject);
            switch (a.mood) {
                case MoodCheck::good: r.passed = m.label == MoodLabel::good; break;
                case MoodCheck::bad: r.passed = m.label == MoodLabel::bad; break;
                case MoodCheck::neutral: r.passed = m.label == MoodLabel::neutral; break;
                case MoodCheck::depressed: r.passed = m.depressed; break;
            }
            if (!r.passed)
                r.message = who + " mood is " + std::string(to_string(m.label)) + (m.depressed ? " (depressed)" : "");
            return r;
        }
        case AssertionKind::attitude: {
            const Attitude at = attitude(state, a.subject, a.object);
            r.passed = at == a.attitude;
            if (!r.passed)
                r.message = who + " attitude toward agent " + roster.name(a.object) + " is " + std::string(to_string(at)) +
                            ", wanted " + std::string(to_string(a.attitude));
            return r;
        }
    }
    return r;
}

/// Runs every statement in order. Engine errors (unknown ids, bad
/// utilities) propagate as AffectError.
inline RunReport run(const Scenario& sc) {
    Engine engine(sc.roster, sc.types);
    RunReport report;
    for (const auto& st : sc.statements) {
        if (const auto* ev = std::get_if<EventStatement>(&st)) {
            engine.step(EventInput{ev->causer, ev->target, ev->utility});
        } else {
            report.results.push_back(evaluate_assertion(std::get<Assertion>(st), engine));
        }
    }
    report.trace = engine.trace();
    return report;
}

}  // namespace affect
