// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any selected criterion fails. Pass criterion names as
// arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "affect/affect.hpp"
#include "affect/cli.hpp"
#include "affect/service.hpp"
#include "oracle.hpp"
#include "scenario_gen.hpp"

using namespace affect;

namespace {

struct Outcome {
    bool passed = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string describe_instance(const AffectInstance& a) {
    std::ostringstream s;
    s << to_string(a.kind) << '@' << a.experiencer.value;
    if (a.is_agent_directed()) s << "->" << a.target_ref;
    else s << " (" << to_string(a.target_kind) << ')';
    s << " x" << format_number(a.intensity) << ' ' << to_string(a.consciousness);
    return s.str();
}

// ---------------------------------------------------------------- golden demo

struct Want {
    std::uint32_t who;
    AffectKind kind;
    std::optional<std::uint32_t> toward;
};

bool contains(const StepResult& s, const Want& w) {
    return std::any_of(s.affects.begin(), s.affects.end(), [&](const AffectInstance& a) {
        return a.experiencer.value == w.who && a.kind == w.kind &&
               (!w.toward || (a.is_agent_directed() && a.target_ref == *w.toward));
    });
}

const AgentSnapshot& agent_at(const StepResult& s, std::uint32_t id) { return s.agents.at(id - 1); }

std::optional<RelationSnapshot> relation_at(const StepResult& s, std::uint32_t who, std::uint32_t object) {
    for (const auto& r : agent_at(s, who).relations)
        if (r.object.value == object) return r;
    return std::nullopt;
}

Outcome golden_demo() {
    using K = AffectKind;
    const auto start = Clock::now();
    const auto report = run(builtin_demo());
    const double elapsed = seconds_since(start);
    const auto& steps = report.trace.steps;
    if (steps.size() != 13) return {false, std::to_string(steps.size()) + " steps, expected 13"};

    const std::vector<std::vector<Want>> wanted = {
        {{2, K::delight, {}}, {2, K::like, 1}},
        {{1, K::delight, {}}},
        {{1, K::surprise, {}}},
        {{2, K::fright, {}}, {2, K::dislike, 3}, {1, K::pity, 2}, {1, K::anger, 3}},
        {{3, K::fright, {}}, {3, K::dislike, 2}, {2, K::gloating, 3}, {2, K::pride, {}}, {1, K::pity, 3}, {1, K::anger, 2}},
        {{3, K::delight, {}}, {1, K::happy_for, 3}, {1, K::pride, {}}, {2, K::envy, 3}, {2, K::anger, 1}},
        {{2, K::remorse, {}}, {2, K::anger, 2}, {2, K::envy, 3}, {1, K::happy_for, 3}, {1, K::gratitude, 2}},
        {{2, K::delight, {}}, {2, K::like, 2}},
        {{2, K::satisfaction, {}}},
        {{2, K::disappointment, {}}, {2, K::remorse, {}}},
        {{3, K::fright, {}}},
        {{3, K::fears_confirmed, {}}},
        {{3, K::relief, {}}},
    };
    std::vector<std::string> missing;
    for (std::size_t i = 0; i < wanted.size(); ++i)
        for (const auto& w : wanted[i])
            if (!contains(steps[i], w)) {
                std::string m = "step " + std::to_string(i + 1) + ": " + std::string(to_string(w.kind)) + "@" +
                                std::to_string(w.who);
                if (w.toward) m += "->" + std::to_string(*w.toward);
                missing.push_back(m);
            }

    auto check = [&](bool ok, const std::string& what) {
        if (!ok) missing.push_back(what);
    };
    const auto r13 = relation_at(steps[2], 1, 3);
    check(r13 && r13->attitude == Attitude::neutral, "step 3: attitude(1,3) = neutral");
    const auto r22 = relation_at(steps[7], 2, 2);
    check(r22 && nearly_equal(r22->mean, 2.0), "step 8: expectation(2,2) = 2");
    const auto r33 = relation_at(steps[10], 3, 3);
    check(r33 && nearly_equal(r33->mean, -4.0), "step 11: expectation(3,3) = -4");
    check(nearly_equal(agent_at(steps[9], 3).efu, 2.0), "before step 11: efu(3) = 2");
    check(nearly_equal(agent_at(steps[10], 3).efu, -2.0), "step 11: efu(3) = -2");
    check(agent_at(steps[9], 3).mood.label == MoodLabel::good, "before step 11: mood(3) = good");
    check(agent_at(steps[10], 3).mood.label == MoodLabel::bad, "step 11: mood(3) = bad");
    check(elapsed < 1.0, "runtime " + format_number(elapsed) + " s >= 1 s");

    if (!missing.empty()) {
        std::string d = std::to_string(missing.size()) + " missing: ";
        for (std::size_t i = 0; i < missing.size(); ++i) d += (i ? "; " : "") + missing[i];
        return {false, d};
    }
    return {true, "13 steps contain every expected affect and value (" + format_number(elapsed) + " s)"};
}

// ------------------------------------------------------------- oracle check

EventInput input(const oracle::RawEvent& e) {
    return EventInput{AgentId(static_cast<std::uint32_t>(e.causer)), AgentId(static_cast<std::uint32_t>(e.target)),
                      e.utility};
}

Outcome oracle_equivalence() {
    const auto start = Clock::now();
    std::mt19937_64 rng(20261015);
    std::size_t checks = 0;
    for (int n = 0; n < 1000; ++n) {
        const auto sc = oracle::random_scenario(rng, 6, 50);
        Engine engine(Roster::numbered(static_cast<std::size_t>(sc.agents)), {});
        std::vector<oracle::RawEvent> prefix;
        for (const auto& ev : sc.events) {
            const auto step = engine.step(input(ev));
            prefix.push_back(ev);
            for (const auto& snap : step.agents) {
                const int me = static_cast<int>(snap.id.value);
                auto fail = [&](const std::string& what) {
                    return Outcome{false, "scenario " + std::to_string(n) + " step " + std::to_string(prefix.size()) +
                                              " agent " + std::to_string(me) + ": " + what};
                };
                for (int o = 1; o <= sc.agents; ++o) {
                    const auto want = oracle::relation(prefix, me, o);
                    std::optional<RelationSnapshot> got;
                    for (const auto& r : snap.relations)
                        if (r.object.value == static_cast<std::uint32_t>(o)) got = r;
                    if (want.has_value() != got.has_value()) return fail("relation presence toward " + std::to_string(o));
                    const std::string att = got ? std::string(to_string(got->attitude)) : "unknown";
                    if (att != oracle::attitude(prefix, me, o)) return fail("attitude toward " + std::to_string(o));
                    if (want && !nearly_equal(got->mean, want->mean)) return fail("mean toward " + std::to_string(o));
                    ++checks;
                }
                if (!nearly_equal(snap.efu, oracle::efu(prefix, me, sc.agents))) return fail("efu");
                if (std::string(to_string(snap.mood.label)) != oracle::mood(prefix, me)) return fail("mood");
                if (snap.mood.depressed != oracle::depressed(prefix, me, sc.agents)) return fail("depressed");
                const int att = snap.attention ? static_cast<int>(snap.attention->value) : 0;
                if (att != oracle::attention(prefix, me, sc.agents)) return fail("attention");
                checks += 4;
            }
        }
    }
    const double elapsed = seconds_since(start);
    if (elapsed >= 30.0) return {false, "runtime " + format_number(elapsed) + " s >= 30 s"};
    return {true, "1000 scenarios, " + std::to_string(checks) + " values agree (" + format_number(elapsed) + " s)"};
}

// ---------------------------------------------------------- negation symmetry

std::optional<AffectKind> mirror_kind(AffectKind k) {
    using K = AffectKind;
    switch (k) {
        case K::delight: return K::fright;
        case K::fright: return K::delight;
        case K::surprise: return K::surprise;
        case K::satisfaction: return K::fears_confirmed;
        case K::fears_confirmed: return K::satisfaction;
        case K::disappointment: return K::relief;
        case K::relief: return K::disappointment;
        case K::happy_for: return K::gloating;
        case K::gloating: return K::happy_for;
        case K::pity: return K::envy;
        case K::envy: return K::pity;
        case K::gratitude: return K::anger;
        case K::anger: return K::gratitude;
        case K::hope: return K::fear;
        case K::fear: return K::hope;
        case K::desire: return K::disgust;
        case K::disgust: return K::desire;
        case K::like: return K::dislike;
        case K::dislike: return K::like;
        default: return std::nullopt;  // pride / remorse / shame: handled as a group
    }
}

bool is_self_blame(const AffectInstance& a, const Event& e) {
    return a.experiencer == e.causer &&
           (a.kind == AffectKind::remorse || a.kind == AffectKind::shame ||
            (a.kind == AffectKind::anger && a.target_kind == TargetKind::self));
}

/// Instances whose kind comes from an attitude-weighted valence. Negating
/// every utility negates the attitude too, so these keep their kind.
bool valence_derived(const AffectInstance& a, const WorldState& pre, const Event& e) {
    const bool bystander_toward_causer = (a.kind == AffectKind::gratitude || a.kind == AffectKind::anger) &&
                                         a.target_kind == TargetKind::agent && a.target_ref == e.causer.value &&
                                         a.experiencer != e.target;
    const Attitude causer_view = attitude(pre, e.causer, e.target);
    const bool judged_causer = e.causer != e.target &&
                               (causer_view == Attitude::liked || causer_view == Attitude::disliked) &&
                               (a.kind == AffectKind::pride || is_self_blame(a, e));
    return bystander_toward_causer || judged_causer;
}

/// Image of a step's affects under the involution. With `fix_valence`,
/// valence-derived instances map to themselves.
std::vector<AffectInstance> mirror(const std::vector<AffectInstance>& affects, const WorldState& pre, const Event& e,
                                   bool fix_valence) {
    std::vector<AffectInstance> out;
    for (const auto& a : affects) {
        if (fix_valence && valence_derived(a, pre, e)) {
            out.push_back(a);
            continue;
        }
        if (a.kind == AffectKind::pride) {
            auto remorse = a;
            remorse.kind = AffectKind::remorse;
            out.push_back(remorse);
            for (const auto k : {AffectKind::shame, AffectKind::anger}) {
                auto self = a;
                self.kind = k;
                self.target_kind = TargetKind::self;
                self.target_ref = a.experiencer.value;
                out.push_back(self);
            }
            continue;
        }
        if (is_self_blame(a, e)) {
            // the remorse / shame / anger-at-self triple maps back to one pride
            if (a.kind != AffectKind::remorse) continue;
            auto pride = a;
            pride.kind = AffectKind::pride;
            out.push_back(pride);
            continue;
        }
        auto m = a;
        m.kind = *mirror_kind(a.kind);
        out.push_back(m);
    }
    std::stable_sort(out.begin(), out.end(), canonical_less);
    return out;
}

bool same_instance(const AffectInstance& a, const AffectInstance& b) {
    return a.experiencer == b.experiencer && a.kind == b.kind && a.target_kind == b.target_kind &&
           a.target_ref == b.target_ref && a.cause_event == b.cause_event && a.consciousness == b.consciousness &&
           nearly_equal(a.intensity, b.intensity);
}

std::string multiset_diff(const std::vector<AffectInstance>& want, const std::vector<AffectInstance>& got) {
    std::vector<bool> used(got.size(), false);
    std::string missing, extra;
    for (const auto& w : want) {
        bool found = false;
        for (std::size_t i = 0; i < got.size() && !found; ++i)
            if (!used[i] && same_instance(w, got[i])) used[i] = found = true;
        if (!found) missing += (missing.empty() ? "" : ", ") + describe_instance(w);
    }
    for (std::size_t i = 0; i < got.size(); ++i)
        if (!used[i]) extra += (extra.empty() ? "" : ", ") + describe_instance(got[i]);
    if (missing.empty() && extra.empty()) return {};
    return "expected but absent [" + missing + "], emitted but unexpected [" + extra + "]";
}

/// No zero utility, and no relation with a zero sum after any step.
bool admissible(const oracle::RandomScenario& sc) {
    WorldState w = make_world(static_cast<std::size_t>(sc.agents));
    for (const auto& ev : sc.events) {
        if (ev.utility == 0.0) return false;
        w = apply_event(std::move(w), Event{w.event_log.size() + 1, input(ev).causer, input(ev).target, ev.utility,
                                            std::nullopt});
        for (const auto& a : w.agents)
            for (const auto& [object, rel] : a.relations)
                if (rel.sum == 0.0) return false;
    }
    return true;
}

Outcome negation_symmetry(bool fix_valence) {
    std::mt19937_64 rng(5150);
    int accepted = 0, drawn = 0, mismatched_scenarios = 0, mismatched_steps = 0, total_steps = 0;
    std::string first;
    while (accepted < 500) {
        auto sc = oracle::random_scenario(rng, 6, 50, true);
        ++drawn;
        if (!admissible(sc)) continue;
        ++accepted;
        auto neg = sc;
        for (auto& ev : neg.events) ev.utility = -ev.utility;

        Engine pos_engine(Roster::numbered(static_cast<std::size_t>(sc.agents)), {});
        Engine neg_engine(Roster::numbered(static_cast<std::size_t>(sc.agents)), {});
        bool scenario_bad = false;
        for (std::size_t i = 0; i < sc.events.size(); ++i) {
            const WorldState pre = pos_engine.state();
            const auto p = pos_engine.step(input(sc.events[i]));
            const auto n = neg_engine.step(input(neg.events[i]));
            ++total_steps;
            const auto diff = multiset_diff(mirror(p.affects, pre, p.event, fix_valence), n.affects);
            if (diff.empty()) continue;
            ++mismatched_steps;
            scenario_bad = true;
            if (first.empty()) {
                std::ostringstream s;
                s << "counterexample: " << sc.agents << " agents, events";
                for (std::size_t j = 0; j <= i; ++j)
                    s << " (" << sc.events[j].causer << ',' << sc.events[j].target << ','
                      << format_number(sc.events[j].utility) << ')';
                s << "; at step " << i + 1 << " " << diff;
                first = s.str();
            }
        }
        mismatched_scenarios += scenario_bad ? 1 : 0;
    }
    const std::string tally = std::to_string(accepted) + " scenarios (" + std::to_string(drawn) + " drawn), " +
                              std::to_string(total_steps) + " steps";
    if (mismatched_scenarios == 0) return {true, tally + " map under the involution"};
    return {false, std::to_string(mismatched_scenarios) + " of " + tally.substr(0, tally.find(' ')) +
                       " scenarios and " + std::to_string(mismatched_steps) + " of " + std::to_string(total_steps) +
                       " steps break the involution; " + first};
}

// ---------------------------------------------------------------- determinism

std::string capture(const std::string& command) {
    std::string out;
    if (FILE* p = ::popen(command.c_str(), "r")) {
        char buf[4096];
        std::size_t n;
        while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
        ::pclose(p);
    }
    return out;
}

std::string cli_out(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    cli::main(args, out, err);
    return out.str();
}

Outcome determinism() {
    std::mt19937_64 rng(77);
    for (int i = 0; i < 200; ++i) {
        const auto sc = gen::random_scenario(rng);
        std::string a, b;
        try {
            a = encode_trace(run(sc).trace);
            b = encode_trace(run(sc).trace);
        } catch (const AffectError& e) {
            return {false, "scenario " + std::to_string(i) + " failed to run: " + e.what()};
        }
        if (a != b) return {false, "scenario " + std::to_string(i) + " produced two different traces"};
    }
    const auto demo = encode_trace(run(builtin_demo()).trace);
    if (demo != encode_trace(run(builtin_demo()).trace)) return {false, "demo trace differs between runs"};

    for (const auto& fmt : {"text", "structured"}) {
        const auto one = cli_out({"demo", "--format", fmt});
        if (one.empty() || one != cli_out({"demo", "--format", fmt}))
            return {false, std::string("in-process demo --format ") + fmt + " output differs"};
        const std::string cmd = std::string("'") + AFFECT_CLI_PATH + "' demo --format " + fmt;
        const auto p1 = capture(cmd), p2 = capture(cmd);
        if (p1 != one || p2 != one) return {false, std::string("separate-process demo --format ") + fmt + " output differs"};
    }
    return {true, "200 random scenarios and the demo trace twice each; CLI demo identical across 3 runs per format"};
}

// ---------------------------------------------------------------- parser laws

Outcome parser_laws() {
    std::mt19937_64 rng(424242);
    for (int i = 0; i < 500; ++i) {
        const auto sc = gen::random_scenario(rng);
        const auto text = serialize_scenario(sc);
        try {
            const auto back = parse_scenario(text);
            if (!(back == sc)) return {false, "round trip changed scenario " + std::to_string(i) + ":\n" + text};
            if (serialize_scenario(back) != text) return {false, "re-serialization differs for scenario " + std::to_string(i)};
        } catch (const ParseError& e) {
            return {false, "serialized scenario " + std::to_string(i) + " rejected: " + e.what()};
        }
    }
    const std::string seed(kDemoScript);
    int rejected = 0;
    for (int i = 0; i < 10000; ++i) {
        const auto input = gen::fuzz_input(rng, seed);
        try {
            (void)parse_scenario(input);
        } catch (const ParseError& e) {
            ++rejected;
            if (e.diagnostics().empty()) return {false, "fuzz input " + std::to_string(i) + " rejected without diagnostics"};
            for (const auto& d : e.diagnostics())
                if (d.line == 0) return {false, "fuzz input " + std::to_string(i) + " rejected without a line number"};
        } catch (const std::exception& e) {
            return {false, "fuzz input " + std::to_string(i) + " raised " + e.what()};
        }
    }
    return {true, "500 round trips; 10000 fuzz inputs, " + std::to_string(rejected) + " rejected, all with line numbers"};
}

// ------------------------------------------------------ cross-interface replay

Outcome cross_interface_replay() {
    httplib::Server server;
    Service service;
    service.mount(server);
    const int port = server.bind_to_any_port("127.0.0.1");
    if (port <= 0) return {false, "could not bind a loopback port"};
    std::thread listener([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    Outcome outcome;
    [&] {
        httplib::Client client("127.0.0.1", port);
        const auto demo = builtin_demo();
        nlohmann::json create = {{"agents", demo.roster.size()}};
        auto res = client.Post("/api/sessions", create.dump(), "application/json");
        if (!res || res->status != 201) {
            outcome = {false, "session create failed"};
            return;
        }
        const std::string base = "/api/sessions/" + nlohmann::json::parse(res->body)["session_id"].get<std::string>();
        std::size_t events = 0;
        for (const auto& st : demo.statements) {
            const auto* ev = std::get_if<EventStatement>(&st);
            if (!ev) continue;
            nlohmann::json body = {{"causer", ev->causer.value}, {"target", ev->target.value}};
            if (const auto* u = std::get_if<double>(&ev->utility)) body["utility"] = *u;
            else body["type"] = std::get<std::string>(ev->utility);
            res = client.Post(base + "/events", body.dump(), "application/json");
            if (!res || res->status != 200) {
                outcome = {false, "event " + std::to_string(events + 1) + " rejected"};
                return;
            }
            ++events;
        }
        const auto trace = client.Get(base + "/trace");
        const auto dsl = client.Get(base + "/export?format=dsl");
        if (!trace || trace->status != 200 || !dsl || dsl->status != 200) {
            outcome = {false, "trace or export request failed"};
            return;
        }
        const auto dir = std::filesystem::temp_directory_path() / ("affect_accept_" + std::to_string(::getpid()));
        std::filesystem::create_directories(dir);
        const auto script = dir / "session.af";
        const auto trace_file = dir / "session.json";
        std::ofstream(script, std::ios::binary) << dsl->body;
        const std::string cmd = std::string("'") + AFFECT_CLI_PATH + "' run '" + script.string() + "' --trace '" +
                                trace_file.string() + "' > /dev/null";
        const int rc = std::system(cmd.c_str());
        std::string cli_trace;
        cli::read_file(trace_file.string(), cli_trace);
        std::filesystem::remove_all(dir);
        if (rc != 0) outcome = {false, "CLI run of exported script failed"};
        else if (cli_trace != trace->body) outcome = {false, "HTTP trace and CLI trace differ"};
        else
            outcome = {true, std::to_string(events) + " events over HTTP; " + std::to_string(trace->body.size()) +
                                 "-byte traces identical"};
    }();
    server.stop();
    listener.join();
    return outcome;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"golden-demo", golden_demo},
        {"oracle-equivalence", oracle_equivalence},
        {"negation-symmetry", [] { return negation_symmetry(false); }},
        {"negation-symmetry-valence-fixed", [] { return negation_symmetry(true); }},
        {"determinism", determinism},
        {"parser-laws", parser_laws},
        {"cross-interface-replay", cross_interface_replay},
    };
    std::vector<std::string> selected(argv + 1, argv + argc);
    for (const auto& name : selected)
        if (std::none_of(criteria.begin(), criteria.end(), [&](const auto& c) { return c.first == name; })) {
            std::cerr << "unknown criterion " << name << '\n';
            return 2;
        }
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        if (!selected.empty() && std::find(selected.begin(), selected.end(), name) == selected.end()) continue;
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (o.passed ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
        failed += o.passed ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
