#pragma once

// Line-oriented scenario scripts (.af):
//
//   agents 3                     | agents alice bob carol
//   utility insult -1
//   event 1 2 1                  | event alice bob insult
//   assert 2 feels delight [toward (REF | self | event)]
//   assert 2 expects 1 1
//   assert 3 efu -2
//   assert 3 mood good|bad|neutral|depressed
//   assert 2 attitude 3 liked|neutral|disliked|unknown
//
// `#` starts a comment. The first statement must be `agents`.

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "affect/affect_kind.hpp"
#include "affect/core.hpp"
#include "affect/engine.hpp"
#include "affect/number.hpp"

namespace affect {

struct EventStatement {
    AgentId causer;
    AgentId target;
    UtilitySpec utility;

    bool operator==(const EventStatement&) const = default;
};

enum class AssertionKind { feels, expects, mood, attitude, efu };

struct Toward {
    enum class Kind { agent, self, event } kind = Kind::agent;
    AgentId agent;

    bool operator==(const Toward&) const = default;
};

enum class MoodCheck { good, bad, neutral, depressed };

struct Assertion {
    AssertionKind kind = AssertionKind::feels;
    AgentId subject;
    AffectKind affect = AffectKind::delight;  // feels
    std::optional<Toward> toward;             // feels
    AgentId object;                           // expects, attitude
    double value = 0.0;                       // expects, efu
    MoodCheck mood = MoodCheck::neutral;      // mood
    Attitude attitude = Attitude::unknown;    // attitude
    std::size_t line = 0;                     // source line, not part of identity

    bool operator==(const Assertion& o) const {
        if (kind != o.kind || subject != o.subject) return false;
        switch (kind) {
            case AssertionKind::feels: return affect == o.affect && toward == o.toward;
            case AssertionKind::expects: return object == o.object && value == o.value;
            case AssertionKind::mood: return mood == o.mood;
            case AssertionKind::attitude: return object == o.object && attitude == o.attitude;
            case AssertionKind::efu: return value == o.value;
        }
        return false;
    }
};

using Statement = std::variant<EventStatement, Assertion>;

struct Scenario {
    Roster roster;
    TypeTable types;
    std::vector<Statement> statements;

    bool operator==(const Scenario&) const = default;

    std::size_t event_count() const {
        return static_cast<std::size_t>(std::count_if(statements.begin(), statements.end(), [](const Statement& s) {
            return std::holds_alternative<EventStatement>(s);
        }));
    }
};

struct Diagnostic {
    std::size_t line = 0;
    std::size_t column = 0;
    std::string message;
};

inline std::string to_string(const Diagnostic& d) {
    return "line " + std::to_string(d.line) + ", column " + std::to_string(d.column) + ": " + d.message;
}

class ParseError : public std::runtime_error {
public:
    explicit ParseError(std::vector<Diagnostic> diagnostics)
        : std::runtime_error(summarize(diagnostics)), diagnostics_(std::move(diagnostics)) {}

    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

private:
    static std::string summarize(const std::vector<Diagnostic>& ds) {
        std::string s;
        for (const auto& d : ds) {
            if (!s.empty()) s += '\n';
            s += to_string(d);
        }
        return s;
    }

    std::vector<Diagnostic> diagnostics_;
};

inline constexpr std::size_t kMaxParsedAgents = 4096;

inline constexpr std::array<std::string_view, 11> kKeywords = {
    "agents", "utility", "event", "assert", "feels", "toward", "self", "expects", "efu", "mood", "attitude",
};

/// [A-Za-z_][A-Za-z0-9_-]* and not a keyword.
inline bool is_name(std::string_view s) {
    if (s.empty()) return false;
    auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
    if (!alpha(s[0])) return false;
    for (char c : s)
        if (!alpha(c) && !(c >= '0' && c <= '9') && c != '-') return false;
    return std::find(kKeywords.begin(), kKeywords.end(), s) == kKeywords.end();
}

namespace detail {

struct Token {
    std::string_view text;
    std::size_t column = 0;  // 1-based
};

inline std::vector<Token> tokenize_line(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        const char c = line[i];
        if (c == '#') break;
        if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
            ++i;
            continue;
        }
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#' &&
               line[i] != '\f' && line[i] != '\v')
            ++i;
        out.push_back({line.substr(start, i - start), start + 1});
    }
    return out;
}

class LineParser {
public:
    LineParser(std::vector<Token> tokens, std::size_t line, std::size_t line_length, Scenario& scenario,
               std::vector<Diagnostic>& diags)
        : toks_(std::move(tokens)), line_(line), eol_col_(line_length + 1), sc_(scenario), diags_(diags) {}

    void statement() {
        const auto head = toks_[0].text;
        pos_ = 1;
        if (head == "utility")
            utility();
        else if (head == "event")
            event();
        else if (head == "assert")
            assertion();
        else if (head == "agents")
            fail(toks_[0], "duplicate agents declaration");
        else
            fail(toks_[0], "unknown statement '" + std::string(head) + "'");
    }

    /// Returns the roster or nullopt after reporting.
    std::optional<Roster> agents() {
        pos_ = 1;
        if (toks_[0].text != "agents") {
            fail(toks_[0], "first declaration must be 'agents'");
            return std::nullopt;
        }
        if (pos_ >= toks_.size()) {
            fail_eol("expected agent count or names");
            return std::nullopt;
        }
        if (is_unsigned_int(toks_[pos_].text)) {
            auto n = parse_unsigned(toks_[pos_].text);
            if (!n || *n < 1 || *n > kMaxParsedAgents) {
                fail(toks_[pos_], "agent count must be between 1 and " + std::to_string(kMaxParsedAgents));
                return std::nullopt;
            }
            ++pos_;
            if (!at_end()) return std::nullopt;
            return Roster::numbered(*n);
        }
        Roster r;
        for (; pos_ < toks_.size(); ++pos_) {
            const auto& t = toks_[pos_];
            if (!is_name(t.text)) {
                fail(t, "invalid agent name '" + std::string(t.text) + "'");
                return std::nullopt;
            }
            if (r.find(t.text)) {
                fail(t, "duplicate agent name '" + std::string(t.text) + "'");
                return std::nullopt;
            }
            if (r.size() >= kMaxParsedAgents) {
                fail(t, "too many agents");
                return std::nullopt;
            }
            r.names.emplace_back(t.text);
        }
        return r;
    }

private:
    void fail(const Token& t, std::string msg) { diags_.push_back({line_, t.column, std::move(msg)}); }
    void fail_eol(std::string msg) { diags_.push_back({line_, eol_col_, std::move(msg)}); }

    const Token* next(const char* what) {
        if (pos_ >= toks_.size()) {
            fail_eol(std::string("expected ") + what);
            return nullptr;
        }
        return &toks_[pos_++];
    }

    bool at_end() {
        if (pos_ < toks_.size()) {
            fail(toks_[pos_], "unexpected token '" + std::string(toks_[pos_].text) + "'");
            return false;
        }
        return true;
    }

    std::optional<AgentId> ref() {
        const Token* t = next("agent reference");
        if (!t) return std::nullopt;
        if (is_unsigned_int(t->text)) {
            auto n = parse_unsigned(t->text);
            if (!n || *n < 1 || *n > sc_.roster.size()) {
                fail(*t, "unknown agent " + std::string(t->text));
                return std::nullopt;
            }
            return AgentId(*n);
        }
        if (auto id = sc_.roster.find(t->text); id && is_name(t->text)) return id;
        fail(*t, "unknown agent '" + std::string(t->text) + "'");
        return std::nullopt;
    }

    std::optional<double> number() {
        const Token* t = next("number");
        if (!t) return std::nullopt;
        auto v = parse_decimal(t->text);
        if (!v) {
            fail(*t, "invalid number '" + std::string(t->text) + "'");
            return std::nullopt;
        }
        return v;
    }

    void utility() {
        const Token* name = next("event type name");
        if (!name) return;
        if (!is_name(name->text)) {
            fail(*name, "invalid event type name '" + std::string(name->text) + "'");
            return;
        }
        auto v = number();
        if (!v || !at_end()) return;
        if (!sc_.types.emplace(std::string(name->text), *v).second)
            fail(*name, "duplicate event type '" + std::string(name->text) + "'");
    }

    void event() {
        auto causer = ref();
        if (!causer) return;
        auto target = ref();
        if (!target) return;
        const Token* t = next("utility or event type");
        if (!t) return;
        EventStatement ev{*causer, *target, 0.0};
        if (is_decimal(t->text)) {
            auto v = parse_decimal(t->text);
            if (!v) {
                fail(*t, "invalid number '" + std::string(t->text) + "'");
                return;
            }
            ev.utility = *v;
        } else if (is_name(t->text)) {
            if (!sc_.types.contains(std::string(t->text))) {
                fail(*t, "unknown event type '" + std::string(t->text) + "'");
                return;
            }
            ev.utility = std::string(t->text);
        } else {
            fail(*t, "expected utility or event type, got '" + std::string(t->text) + "'");
            return;
        }
        if (!at_end()) return;
        sc_.statements.emplace_back(std::move(ev));
    }

    void assertion() {
        Assertion a;
        a.line = line_;
        auto subject = ref();
        if (!subject) return;
        a.subject = *subject;
        const Token* verb = next("assertion verb");
        if (!verb) return;
        if (verb->text == "feels") {
            a.kind = AssertionKind::feels;
            const Token* k = next("affect kind");
            if (!k) return;
            auto kind = parse_affect_kind(k->text);
            if (!kind) {
                fail(*k, "unknown affect '" + std::string(k->text) + "'");
                return;
            }
            a.affect = *kind;
            if (pos_ < toks_.size()) {
                const Token* tw = next("toward");
                if (tw->text != "toward") {
                    fail(*tw, "expected 'toward'");
                    return;
                }
                if (pos_ >= toks_.size()) {
                    fail_eol("expected agent, 'self' or 'event'");
                    return;
                }
                const auto& obj = toks_[pos_];
                if (obj.text == "self") {
                    ++pos_;
                    a.toward = Toward{Toward::Kind::self, {}};
                } else if (obj.text == "event") {
                    ++pos_;
                    a.toward = Toward{Toward::Kind::event, {}};
                } else {
                    auto id = ref();
                    if (!id) return;
                    a.toward = Toward{Toward::Kind::agent, *id};
                }
            }
        } else if (verb->text == "expects") {
            a.kind = AssertionKind::expects;
            auto obj = ref();
            if (!obj) return;
            a.object = *obj;
            auto v = number();
            if (!v) return;
            a.value = *v;
        } else if (verb->text == "efu") {
            a.kind = AssertionKind::efu;
            auto v = number();
            if (!v) return;
            a.value = *v;
        } else if (verb->text == "mood") {
            a.kind = AssertionKind::mood;
            const Token* m = next("mood");
            if (!m) return;
            if (m->text == "good")
                a.mood = MoodCheck::good;
            else if (m->text == "bad")
                a.mood = MoodCheck::bad;
            else if (m->text == "neutral")
                a.mood = MoodCheck::neutral;
            else if (m->text == "depressed")
                a.mood = MoodCheck::depressed;
            else {
                fail(*m, "unknown mood '" + std::string(m->text) + "'");
                return;
            }
        } else if (verb->text == "attitude") {
            a.kind = AssertionKind::attitude;
            auto obj = ref();
            if (!obj) return;
            a.object = *obj;
            const Token* at = next("attitude");
            if (!at) return;
            if (at->text == "liked")
                a.attitude = Attitude::liked;
            else if (at->text == "neutral")
                a.attitude = Attitude::neutral;
            else if (at->text == "disliked")
                a.attitude = Attitude::disliked;
            else if (at->text == "unknown")
                a.attitude = Attitude::unknown;
            else {
                fail(*at, "unknown attitude '" + std::string(at->text) + "'");
                return;
            }
        } else {
            fail(*verb, "unknown assertion '" + std::string(verb->text) + "'");
            return;
        }
        if (!at_end()) return;
        sc_.statements.emplace_back(std::move(a));
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::size_t line_;
    std::size_t eol_col_;
    Scenario& sc_;
    std::vector<Diagnostic>& diags_;
};

}  // namespace detail

/// Parses a scenario script. Throws ParseError listing every problem found.
inline Scenario parse_scenario(std::string_view text) {
    Scenario sc;
    std::vector<Diagnostic> diags;
    bool have_agents = false;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        const auto line = text.substr(start, end - start);
        ++line_no;
        auto toks = detail::tokenize_line(line);
        if (!toks.empty()) {
            detail::LineParser p(std::move(toks), line_no, line.size(), sc, diags);
            if (!have_agents) {
                auto roster = p.agents();
                if (!roster) break;  // nothing after can be resolved
                sc.roster = std::move(*roster);
                have_agents = true;
            } else {
                p.statement();
            }
        }
        if (end == text.size()) break;
        start = end + 1;
    }
    if (!have_agents && diags.empty()) diags.push_back({line_no == 0 ? 1 : line_no, 1, "missing 'agents' declaration"});
    if (!diags.empty()) throw ParseError(std::move(diags));
    return sc;
}

namespace detail {

inline std::string ref_text(const Roster& r, AgentId id) { return r.name(id); }

}  // namespace detail

/// Canonical text: agents, sorted type table, then statements in order.
inline std::string serialize_scenario(const Scenario& sc) {
    std::ostringstream out;
    out << "agents";
    if (sc.roster.is_named()) {
        for (const auto& n : sc.roster.names) out << ' ' << n;
    } else {
        out << ' ' << sc.roster.size();
    }
    out << '\n';
    for (const auto& [name, value] : sc.types) out << "utility " << name << ' ' << format_number(value) << '\n';
    for (const auto& st : sc.statements) {
        if (const auto* ev = std::get_if<EventStatement>(&st)) {
            out << "event " << detail::ref_text(sc.roster, ev->causer) << ' ' << detail::ref_text(sc.roster, ev->target)
                << ' ';
            if (const double* u = std::get_if<double>(&ev->utility))
                out << format_number(*u);
            else
                out << std::get<std::string>(ev->utility);
            out << '\n';
            continue;
        }
        const auto& a = std::get<Assertion>(st);
        out << "assert " << detail::ref_text(sc.roster, a.subject) << ' ';
        switch (a.kind) {
            case AssertionKind::feels:
                out << "feels " << to_string(a.affect);
                if (a.toward) {
                    out << " toward ";
                    switch (a.toward->kind) {
                        case Toward::Kind::self: out << "self"; break;
                        case Toward::Kind::event: out << "event"; break;
                        case Toward::Kind::agent: out << detail::ref_text(sc.roster, a.toward->agent); break;
                    }
                }
                break;
            case AssertionKind::expects:
                out << "expects " << detail::ref_text(sc.roster, a.object) << ' ' << format_number(a.value);
                break;
            case AssertionKind::efu: out << "efu " << format_number(a.value); break;
            case AssertionKind::mood: {
                static constexpr std::array<std::string_view, 4> names = {"good", "bad", "neutral", "depressed"};
                out << "mood " << names[static_cast<std::size_t>(a.mood)];
                break;
            }
            case AssertionKind::attitude:
                out << "attitude " << detail::ref_text(sc.roster, a.object) << ' ' << to_string(a.attitude);
                break;
        }
        out << '\n';
    }
    return out.str();
}

/// Script reproducing the three-agent demonstration run, with every claim
/// of its narrative encoded as an assertion after the matching event.
inline constexpr std::string_view kDemoScript = R"(# Three agents exchanging utilities; each block is one event and the
# affects and values it is expected to produce.
agents 3

event 1 2 1
assert 2 feels delight toward event
assert 2 feels like toward 1
assert 2 expects 1 1

event 2 1 1
assert 1 feels delight toward event

event 3 1 0
assert 1 feels surprise toward event
assert 1 attitude 3 neutral

event 3 2 -1
assert 2 feels fright toward event
assert 2 feels dislike toward 3
assert 2 attitude 3 disliked
assert 1 feels pity toward 2
assert 1 feels anger toward 3

event 2 3 -2
assert 3 feels fright toward event
assert 3 feels dislike toward 2
assert 2 feels gloating toward 3
assert 2 feels pride
assert 1 feels pity toward 3
assert 1 feels anger toward 2

event 1 3 2
assert 3 feels delight toward event
assert 1 feels happy_for toward 3
assert 1 feels pride
assert 2 feels envy toward 3
assert 2 feels anger toward 1

event 2 3 2
assert 2 feels remorse
assert 2 feels anger toward self
assert 2 feels envy toward 3
assert 1 feels happy_for toward 3
assert 1 feels gratitude toward 2

event 2 2 2
assert 2 feels delight toward event
assert 2 feels like toward self
assert 2 expects 2 2

event 2 2 2
assert 2 feels satisfaction toward event
assert 2 mood good

event 2 2 1
assert 2 feels disappointment toward event
assert 2 feels remorse
assert 3 efu 2
assert 3 mood good

event 3 3 -4
assert 3 feels fright toward event
assert 3 expects 3 -4
assert 3 efu -2
assert 3 mood bad

event 3 3 -4
assert 3 feels fears_confirmed toward event

event 3 3 -2
assert 3 feels relief toward event
)";

inline Scenario builtin_demo() { return parse_scenario(kDemoScript); }

}  // namespace affect
