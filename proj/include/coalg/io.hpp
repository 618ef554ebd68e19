#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "machines.hpp"
#include "pda.hpp"
#include "traces.hpp"

namespace coalg {

// A machine description loaded from a JSON file. `kind` is one of: nda, pa,
// mealy, moore-exception, moore-sideeffect, moore-output, prob, pda, grammar,
// lts.
struct MachineFile {
  std::string kind;
  std::variant<Nda, PartialAutomaton, PartialMealy, MooreVariant, Pda, Grammar,
               Lts>
      machine;

  bool operator==(const MachineFile&) const = default;
};

// ---------------------------------------------------------------------------
// Symbol-sequence parsing and rendering shared by the CLI and the tests.
// A sequence is written either as adjacent characters (when every name is a
// single character) or as a comma-separated list of names. The empty string
// is the empty sequence.

namespace detail {

inline bool all_single_char(const std::vector<std::string>& names) {
  for (const auto& n : names)
    if (n.size() != 1) return false;
  return true;
}

inline std::uint32_t name_index(const std::vector<std::string>& names,
                                const std::string& s, const char* what) {
  for (std::uint32_t i = 0; i < names.size(); ++i)
    if (names[i] == s) return i;
  throw ValidationError(std::string("unknown ") + what + ": '" + s + "'");
}

inline std::vector<std::uint32_t> parse_symbols(
    const std::string& text, const std::vector<std::string>& names,
    const char* what) {
  std::vector<std::uint32_t> out;
  if (text.empty()) return out;
  if (text.find(',') == std::string::npos && all_single_char(names)) {
    for (char ch : text)
      out.push_back(name_index(names, std::string(1, ch), what));
    return out;
  }
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = text.find(',', pos);
    std::string tok = text.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    while (!tok.empty() && tok.front() == ' ') tok.erase(tok.begin());
    while (!tok.empty() && tok.back() == ' ') tok.pop_back();
    if (tok.empty())
      throw ValidationError(std::string("empty ") + what + " in sequence '" +
                            text + "'");
    out.push_back(name_index(names, tok, what));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

inline std::string render_symbols(const std::vector<std::uint32_t>& seq,
                                  const std::vector<std::string>& names) {
  if (seq.empty()) return "ε";
  std::string out;
  bool single = all_single_char(names);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i && !single) out += ",";
    out += seq[i] < names.size() ? names[seq[i]]
                                 : "#" + std::to_string(seq[i]);
  }
  return out;
}

}  // namespace detail

inline Word parse_word(const std::string& text,
                       const std::vector<std::string>& letters) {
  return detail::parse_symbols(text, letters, "letter");
}

inline Stack parse_stack(const std::string& text,
                         const std::vector<std::string>& syms) {
  return detail::parse_symbols(text, syms, "stack symbol");
}

inline std::string render_word(const Word& w,
                               const std::vector<std::string>& letters) {
  return detail::render_symbols(w, letters);
}

inline std::string render_stack(const Stack& s,
                                const std::vector<std::string>& syms) {
  return detail::render_symbols(s, syms);
}

// ---------------------------------------------------------------------------
// Rendering of T-states and output values. The context carries the name
// tables that indices refer to; anything missing falls back to "#i".

struct RenderContext {
  std::vector<std::string> states;
  std::vector<std::string> letters;
  std::vector<std::string> labels;  // monad parameter names (E, S, O or B)
  std::vector<std::string> values;  // plain output value names
};

namespace detail {

inline std::string named(const std::vector<std::string>& names,
                         std::uint32_t i) {
  return i < names.size() ? names[i] : "#" + std::to_string(i);
}

}  // namespace detail

inline std::string render_tstate(const MonadKind& m, const TState& ts,
                                 const RenderContext& ctx) {
  using detail::named;
  return std::visit(
      [&](const auto& s) -> std::string {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, PsetState>) {
          std::string out = "{";
          for (std::size_t i = 0; i < s.elems.size(); ++i) {
            if (i) out += ",";
            out += named(ctx.states, s.elems[i]);
          }
          return out + "}";
        } else if constexpr (std::is_same_v<S, PartialState>) {
          return s.state ? named(ctx.states, *s.state) : "⊥";
        } else if constexpr (std::is_same_v<S, ExcState>) {
          if (s.is_exception) return "raise " + named(m.labels, s.value);
          return named(ctx.states, s.value);
        } else if constexpr (std::is_same_v<S, EffState>) {
          std::string out = "[";
          for (std::size_t i = 0; i < s.table.size(); ++i) {
            if (i) out += "; ";
            out += named(m.labels, std::uint32_t(i)) + " -> (" +
                   named(m.labels, s.table[i].first) + ", " +
                   named(ctx.states, s.table[i].second) + ")";
          }
          return out + "]";
        } else if constexpr (std::is_same_v<S, WriterState>) {
          return "(" + detail::render_symbols(s.emitted, m.labels) + ", " +
                 named(ctx.states, s.state) + ")";
        } else if constexpr (std::is_same_v<S, DistState>) {
          std::string out = "{";
          for (std::size_t i = 0; i < s.weights.size(); ++i) {
            if (i) out += ", ";
            out += named(ctx.states, s.weights[i].first) + ": " +
                   format_rational(s.weights[i].second);
          }
          return out + "}";
        } else {
          std::string out = "{";
          for (std::size_t i = 0; i < s.rules.size(); ++i) {
            const auto& r = s.rules[i];
            if (i) out += "; ";
            std::string pat =
                r.pattern.empty()
                    ? "*"
                    : detail::render_symbols(r.pattern, m.labels) + "*";
            std::string rep =
                r.replacement.empty()
                    ? "*"
                    : detail::render_symbols(r.replacement, m.labels) + "*";
            out += pat + " -> (" + named(ctx.states, r.state) + ", " + rep +
                   ")";
          }
          return out + "}";
        }
      },
      ts.v);
}

inline std::string render_output(const OutputValue& o,
                                 const RenderContext& ctx) {
  using detail::named;
  return std::visit(
      [&](const auto& v) -> std::string {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, BoolOut>) {
          return v.value ? "1" : "0";
        } else if constexpr (std::is_same_v<V, FamilyOut>) {
          std::string out = "{";
          for (std::size_t i = 0; i < v.sets.size(); ++i) {
            if (i) out += ",";
            out += "{";
            for (std::size_t k = 0; k < v.sets[i].size(); ++k) {
              if (k) out += ",";
              out += named(ctx.letters, v.sets[i][k]);
            }
            out += "}";
          }
          return out + "}";
        } else if constexpr (std::is_same_v<V, TaggedOut>) {
          if (v.is_exception) return "raise " + named(ctx.labels, v.value);
          return named(ctx.values, v.value);
        } else if constexpr (std::is_same_v<V, EffectOut>) {
          std::string out = "[";
          for (std::size_t i = 0; i < v.table.size(); ++i) {
            if (i) out += "; ";
            out += named(ctx.labels, std::uint32_t(i)) + " -> (" +
                   named(ctx.labels, v.table[i].first) + ", " +
                   named(ctx.values, v.table[i].second) + ")";
          }
          return out + "]";
        } else if constexpr (std::is_same_v<V, WriterOut>) {
          std::string fin =
              v.final_value ? named(ctx.values, *v.final_value) : "-";
          return "(" + detail::render_symbols(v.emitted, ctx.labels) + ", " +
                 fin + ")";
        } else if constexpr (std::is_same_v<V, RationalOut>) {
          return format_rational(v.value);
        } else {
          std::string out = "{";
          bool first = true;
          for (const auto& e : v.exact) {
            if (!first) out += ", ";
            first = false;
            out += detail::render_symbols(e, ctx.labels);
          }
          for (const auto& f : v.prefixes) {
            if (!first) out += ", ";
            first = false;
            out += f.empty() ? "*" : detail::render_symbols(f, ctx.labels) + "*";
          }
          return out + "}";
        }
      },
      o.v);
}

// ---------------------------------------------------------------------------
// JSON parsing.

namespace detail {

using Json = nlohmann::json;

inline const Json& jfield(const Json& j, const char* key) {
  if (!j.is_object())
    throw ValidationError(std::string("expected an object with field '") +
                          key + "'");
  auto it = j.find(key);
  if (it == j.end())
    throw ValidationError(std::string("missing field '") + key + "'");
  return *it;
}

inline std::string jstring(const Json& j, const char* what) {
  if (!j.is_string())
    throw ValidationError(std::string(what) + " must be a string");
  return j.get<std::string>();
}

inline std::vector<std::string> jnames(const Json& j, const char* what) {
  if (!j.is_array())
    throw ValidationError(std::string(what) + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) out.push_back(jstring(e, what));
  auto copy = out;
  sort_unique(copy);
  if (copy.size() != out.size())
    throw ValidationError(std::string("duplicate name in ") + what);
  return out;
}

inline const Json& jarray(const Json& j, const char* what) {
  if (!j.is_array())
    throw ValidationError(std::string(what) + " must be an array");
  return j;
}

inline const Json& jobject(const Json& j, const char* what) {
  if (!j.is_object())
    throw ValidationError(std::string(what) + " must be an object");
  return j;
}

inline std::vector<std::string> required_names(const Json& j, const char* key,
                                               const char* what) {
  auto names = jnames(jfield(j, key), what);
  if (names.empty())
    throw ValidationError(std::string("empty list of ") + what);
  return names;
}

inline std::uint32_t jref(const Json& j, const std::vector<std::string>& names,
                          const char* what) {
  return name_index(names, jstring(j, what), what);
}

struct TransSeen {
  std::vector<std::vector<bool>> seen;

  TransSeen(std::size_t n, std::size_t k)
      : seen(n, std::vector<bool>(k, false)) {}

  void mark(std::uint32_t x, std::uint32_t a, const std::string& sn,
            const std::string& an) {
    if (seen[x][a])
      throw ValidationError("duplicate transition for state '" + sn +
                            "' and letter '" + an + "'");
    seen[x][a] = true;
  }

  void require_total(const std::vector<std::string>& states,
                     const std::vector<std::string>& letters) {
    for (std::size_t x = 0; x < seen.size(); ++x)
      for (std::size_t a = 0; a < seen[x].size(); ++a)
        if (!seen[x][a])
          throw ValidationError("missing transition for state '" + states[x] +
                                "' and letter '" + letters[a] + "'");
  }
};

inline Nda parse_nda_json(const Json& j) {
  Nda n;
  n.states = required_names(j, "states", "states");
  n.letters = required_names(j, "letters", "letters");
  n.accepting.assign(n.states.size(), false);
  for (const auto& e : jarray(jfield(j, "accepting"), "accepting"))
    n.accepting[jref(e, n.states, "state")] = true;
  n.delta.assign(n.states.size(),
                 std::vector<std::vector<StateId>>(n.letters.size()));
  TransSeen seen(n.states.size(), n.letters.size());
  for (const auto& e : jarray(jfield(j, "transitions"), "transitions")) {
    StateId x = jref(jfield(e, "from"), n.states, "state");
    Letter a = jref(jfield(e, "letter"), n.letters, "letter");
    seen.mark(x, a, n.states[x], n.letters[a]);
    for (const auto& t : jarray(jfield(e, "to"), "transition targets"))
      n.delta[x][a].push_back(jref(t, n.states, "state"));
    sort_unique(n.delta[x][a]);
  }
  return n;
}

inline PartialAutomaton parse_pa_json(const Json& j) {
  PartialAutomaton p;
  p.states = required_names(j, "states", "states");
  p.letters = required_names(j, "letters", "letters");
  p.accepting.assign(p.states.size(), false);
  for (const auto& e : jarray(jfield(j, "accepting"), "accepting"))
    p.accepting[jref(e, p.states, "state")] = true;
  p.delta.assign(p.states.size(),
                 std::vector<std::optional<StateId>>(p.letters.size()));
  TransSeen seen(p.states.size(), p.letters.size());
  for (const auto& e : jarray(jfield(j, "transitions"), "transitions")) {
    StateId x = jref(jfield(e, "from"), p.states, "state");
    Letter a = jref(jfield(e, "letter"), p.letters, "letter");
    seen.mark(x, a, p.states[x], p.letters[a]);
    p.delta[x][a] = jref(jfield(e, "to"), p.states, "state");
  }
  return p;
}

inline PartialMealy parse_mealy_json(const Json& j) {
  PartialMealy m;
  m.states = required_names(j, "states", "states");
  m.inputs = required_names(j, "inputs", "inputs");
  m.outputs = required_names(j, "outputs", "outputs");
  m.bottom = jref(jfield(j, "bottom"), m.outputs, "output");
  m.trans.assign(
      m.states.size(),
      std::vector<std::optional<std::pair<std::uint32_t, StateId>>>(
          m.inputs.size()));
  TransSeen seen(m.states.size(), m.inputs.size());
  for (const auto& e : jarray(jfield(j, "transitions"), "transitions")) {
    StateId x = jref(jfield(e, "from"), m.states, "state");
    Letter a = jref(jfield(e, "input"), m.inputs, "input");
    seen.mark(x, a, m.states[x], m.inputs[a]);
    std::uint32_t out = jref(jfield(e, "output"), m.outputs, "output");
    if (out == m.bottom)
      throw ValidationError(
          "transitions may not emit the bottom output; leave the step "
          "undefined instead");
    m.trans[x][a] = {out, jref(jfield(e, "to"), m.states, "state")};
  }
  return m;
}

inline OutputValue parse_moore_output(const MooreVariant& m, const Json& j) {
  switch (m.kind) {
    case MooreKind::Exception: {
      if (j.is_string())
        return {TaggedOut{false, jref(j, m.values, "output value")}};
      const Json& o = jobject(j, "output");
      return {TaggedOut{true, jref(jfield(o, "raise"), m.labels, "exception")}};
    }
    case MooreKind::SideEffect: {
      EffectOut out;
      out.table.resize(m.labels.size());
      if (j.is_string()) {
        std::uint32_t v = jref(j, m.values, "output value");
        for (std::uint32_t s = 0; s < m.labels.size(); ++s)
          out.table[s] = {s, v};
        return {std::move(out)};
      }
      const Json& o = jobject(j, "output");
      std::vector<bool> have(m.labels.size(), false);
      for (const auto& [key, val] : o.items()) {
        std::uint32_t s = name_index(m.labels, key, "store value");
        const Json& cell = jobject(val, "output cell");
        out.table[s] = {jref(jfield(cell, "store"), m.labels, "store value"),
                        jref(jfield(cell, "value"), m.values, "output value")};
        have[s] = true;
      }
      for (std::uint32_t s = 0; s < m.labels.size(); ++s)
        if (!have[s])
          throw ValidationError("output table misses store value '" +
                                m.labels[s] + "'");
      return {std::move(out)};
    }
    case MooreKind::InteractiveOutput: {
      WriterOut out;
      if (j.is_string()) {
        out.final_value = jref(j, m.values, "output value");
        return {std::move(out)};
      }
      const Json& o = jobject(j, "output");
      if (o.contains("emit"))
        for (const auto& e : jarray(o.at("emit"), "emit"))
          out.emitted.push_back(jref(e, m.labels, "output letter"));
      if (o.contains("value"))
        out.final_value = jref(o.at("value"), m.values, "output value");
      return {std::move(out)};
    }
    case MooreKind::Probabilistic: {
      Rational p = parse_rational(jstring(j, "output value"));
      if (p < 0 || p > 1)
        throw ValidationError("output value out of [0,1]: " +
                              format_rational(p));
      return {RationalOut{std::move(p)}};
    }
  }
  throw InvariantViolation("unknown machine kind");
}

inline TState parse_moore_tstate(const MooreVariant& m, const Json& e) {
  const Json& to = jfield(e, "to");
  switch (m.kind) {
    case MooreKind::Exception: {
      if (to.is_string())
        return {ExcState{false, jref(to, m.states, "state")}};
      const Json& o = jobject(to, "transition target");
      if (o.contains("state"))
        return {ExcState{false, jref(o.at("state"), m.states, "state")}};
      return {
          ExcState{true, jref(jfield(o, "raise"), m.labels, "exception")}};
    }
    case MooreKind::SideEffect: {
      const Json& o = jobject(to, "transition target");
      EffState st;
      st.table.resize(m.labels.size());
      std::vector<bool> have(m.labels.size(), false);
      for (const auto& [key, val] : o.items()) {
        std::uint32_t s = name_index(m.labels, key, "store value");
        const Json& cell = jobject(val, "transition cell");
        st.table[s] = {jref(jfield(cell, "store"), m.labels, "store value"),
                       jref(jfield(cell, "state"), m.states, "state")};
        have[s] = true;
      }
      for (std::uint32_t s = 0; s < m.labels.size(); ++s)
        if (!have[s])
          throw ValidationError("transition table misses store value '" +
                                m.labels[s] + "'");
      return {std::move(st)};
    }
    case MooreKind::InteractiveOutput: {
      WriterState st;
      if (e.contains("emit"))
        for (const auto& o : jarray(e.at("emit"), "emit"))
          st.emitted.push_back(jref(o, m.labels, "output letter"));
      st.state = jref(to, m.states, "state");
      return {std::move(st)};
    }
    case MooreKind::Probabilistic: {
      const Json& o = jobject(to, "transition target");
      DistState st;
      Rational sum = 0;
      for (const auto& [key, val] : o.items()) {
        StateId x = name_index(m.states, key, "state");
        Rational p = parse_rational(jstring(val, "probability"));
        if (p < 0)
          throw ValidationError("negative probability: " + format_rational(p));
        sum += p;
        st.weights.emplace_back(x, std::move(p));
      }
      if (sum != 1)
        throw ValidationError("probabilities must sum to 1, got " +
                              format_rational(sum));
      canonicalize(st);
      return {std::move(st)};
    }
  }
  throw InvariantViolation("unknown machine kind");
}

inline MooreVariant parse_moore_json(const Json& j, MooreKind kind,
                                     const char* labels_key) {
  MooreVariant m;
  m.kind = kind;
  m.states = required_names(j, "states", "states");
  m.letters = required_names(j, "letters", "letters");
  if (labels_key) m.labels = required_names(j, labels_key, labels_key);
  if (kind != MooreKind::Probabilistic)
    m.values = required_names(j, "values", "values");
  const Json& jo = jobject(jfield(j, "outputs"), "outputs");
  m.outputs.resize(m.states.size());
  std::vector<bool> have(m.states.size(), false);
  for (const auto& [key, val] : jo.items()) {
    StateId x = name_index(m.states, key, "state");
    m.outputs[x] = parse_moore_output(m, val);
    have[x] = true;
  }
  for (StateId x = 0; x < m.states.size(); ++x)
    if (!have[x])
      throw ValidationError("missing output for state '" + m.states[x] + "'");
  m.trans.assign(m.states.size(), std::vector<TState>(m.letters.size()));
  TransSeen seen(m.states.size(), m.letters.size());
  for (const auto& e : jarray(jfield(j, "transitions"), "transitions")) {
    StateId x = jref(jfield(e, "from"), m.states, "state");
    Letter a = jref(jfield(e, "letter"), m.letters, "letter");
    seen.mark(x, a, m.states[x], m.letters[a]);
    m.trans[x][a] = parse_moore_tstate(m, e);
  }
  seen.require_total(m.states, m.letters);
  return m;
}

inline const char* accept_mode_name(AcceptModeKind k) {
  switch (k) {
    case AcceptModeKind::AcceptingStates:
      return "accepting-states";
    case AcceptModeKind::EmptyStack:
      return "empty-stack";
    case AcceptModeKind::AcceptingStatesEmptyStack:
      return "accepting-states-empty-stack";
    default:
      return "top-symbols";
  }
}

inline AcceptModeKind accept_mode_from(const std::string& s) {
  for (AcceptModeKind k :
       {AcceptModeKind::AcceptingStates, AcceptModeKind::EmptyStack,
        AcceptModeKind::AcceptingStatesEmptyStack, AcceptModeKind::TopSymbols})
    if (s == accept_mode_name(k)) return k;
  throw ValidationError("unknown acceptance mode: '" + s + "'");
}

inline Pda parse_pda_json(const Json& j) {
  Pda p;
  p.control = required_names(j, "control", "control states");
  p.input = required_names(j, "input", "input letters");
  p.stack_syms = required_names(j, "stack", "stack symbols");
  for (const auto& e : jarray(jfield(j, "rules"), "rules")) {
    PdaRule r;
    r.state = jref(jfield(e, "state"), p.control, "control state");
    r.letter = jref(jfield(e, "letter"), p.input, "input letter");
    r.top = jref(jfield(e, "top"), p.stack_syms, "stack symbol");
    r.next = jref(jfield(e, "next"), p.control, "control state");
    for (const auto& s : jarray(jfield(e, "push"), "push"))
      r.push.push_back(jref(s, p.stack_syms, "stack symbol"));
    p.rules.push_back(std::move(r));
  }
  const Json& ja = jobject(jfield(j, "accept"), "accept");
  p.accept.kind = accept_mode_from(jstring(jfield(ja, "mode"), "mode"));
  bool takes_states = p.accept.kind == AcceptModeKind::AcceptingStates ||
                      p.accept.kind == AcceptModeKind::AcceptingStatesEmptyStack;
  if (ja.contains("set"))
    for (const auto& e : jarray(ja.at("set"), "accept set"))
      p.accept.set.push_back(takes_states
                                 ? jref(e, p.control, "control state")
                                 : jref(e, p.stack_syms, "stack symbol"));
  sort_unique(p.accept.set);
  if (p.accept.kind == AcceptModeKind::EmptyStack && !p.accept.set.empty())
    throw ValidationError("empty-stack acceptance takes no set");
  const Json& ji = jobject(jfield(j, "init"), "init");
  p.init_state = jref(jfield(ji, "state"), p.control, "control state");
  for (const auto& s : jarray(jfield(ji, "stack"), "initial stack"))
    p.init_stack.push_back(jref(s, p.stack_syms, "stack symbol"));
  return p;
}

inline Grammar parse_grammar_json(const Json& j) {
  Grammar g;
  g.terminals = required_names(j, "terminals", "terminals");
  g.variables = required_names(j, "variables", "variables");
  for (const auto& t : g.terminals)
    for (const auto& v : g.variables)
      if (t == v)
        throw ValidationError("symbol '" + t +
                              "' is both a terminal and a variable");
  g.start = jref(jfield(j, "start"), g.variables, "variable");
  for (const auto& e : jarray(jfield(j, "productions"), "productions")) {
    Production pr;
    pr.lhs = jref(jfield(e, "lhs"), g.variables, "variable");
    for (const auto& s : jarray(jfield(e, "rhs"), "production body")) {
      std::string name = jstring(s, "grammar symbol");
      GrammarSym sym;
      bool is_t = std::find(g.terminals.begin(), g.terminals.end(), name) !=
                  g.terminals.end();
      if (is_t) {
        sym = {true, name_index(g.terminals, name, "terminal")};
      } else {
        sym = {false, name_index(g.variables, name, "grammar symbol")};
      }
      pr.rhs.push_back(sym);
    }
    g.productions.push_back(std::move(pr));
  }
  return g;
}

inline Lts parse_lts_json(const Json& j) {
  Lts l;
  l.state_names = required_names(j, "states", "states");
  l.letter_names = required_names(j, "letters", "letters");
  l.delta.assign(l.n_states(),
                 std::vector<std::vector<StateId>>(l.n_letters()));
  TransSeen seen(l.n_states(), l.n_letters());
  for (const auto& e : jarray(jfield(j, "transitions"), "transitions")) {
    StateId x = jref(jfield(e, "from"), l.state_names, "state");
    Letter a = jref(jfield(e, "letter"), l.letter_names, "letter");
    seen.mark(x, a, l.state_names[x], l.letter_names[a]);
    for (const auto& t : jarray(jfield(e, "to"), "transition targets"))
      l.delta[x][a].push_back(jref(t, l.state_names, "state"));
    sort_unique(l.delta[x][a]);
  }
  return l;
}

}  // namespace detail

inline MachineFile parse_machine(const std::string& text) {
  detail::Json j;
  try {
    j = detail::Json::parse(text);
  } catch (const detail::Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    std::size_t stop = e.byte > 0 ? e.byte - 1 : 0;
    for (std::size_t i = 0; i < stop && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SyntaxError(e.what(), line, col);
  }
  if (!j.is_object())
    throw ValidationError("machine description must be a JSON object");
  std::string kind = detail::jstring(detail::jfield(j, "kind"), "kind");
  MachineFile mf;
  mf.kind = kind;
  if (kind == "nda") {
    mf.machine = detail::parse_nda_json(j);
  } else if (kind == "pa") {
    mf.machine = detail::parse_pa_json(j);
  } else if (kind == "mealy") {
    mf.machine = detail::parse_mealy_json(j);
  } else if (kind == "moore-exception") {
    mf.machine = detail::parse_moore_json(j, MooreKind::Exception, "exceptions");
  } else if (kind == "moore-sideeffect") {
    mf.machine = detail::parse_moore_json(j, MooreKind::SideEffect, "stores");
  } else if (kind == "moore-output") {
    mf.machine =
        detail::parse_moore_json(j, MooreKind::InteractiveOutput, "emits");
  } else if (kind == "prob") {
    mf.machine = detail::parse_moore_json(j, MooreKind::Probabilistic, nullptr);
  } else if (kind == "pda") {
    mf.machine = detail::parse_pda_json(j);
  } else if (kind == "grammar") {
    mf.machine = detail::parse_grammar_json(j);
  } else if (kind == "lts") {
    mf.machine = detail::parse_lts_json(j);
  } else {
    throw ValidationError("unknown machine kind: '" + kind + "'");
  }
  return mf;
}

inline MachineFile load_machine(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw FileError("cannot read file: " + path);
  return parse_machine(ss.str());
}

// ---------------------------------------------------------------------------
// JSON serialization. parse_machine(serialize_machine(mf)) reproduces mf.

namespace detail {

inline Json names_of(const std::vector<std::uint32_t>& idx,
                     const std::vector<std::string>& names) {
  Json out = Json::array();
  for (auto i : idx) out.push_back(names[i]);
  return out;
}

inline Json serialize_moore_output(const MooreVariant& m,
                                   const OutputValue& o) {
  switch (m.kind) {
    case MooreKind::Exception: {
      const auto& t = std::get<TaggedOut>(o.v);
      if (t.is_exception) return Json{{"raise", m.labels[t.value]}};
      return Json(m.values[t.value]);
    }
    case MooreKind::SideEffect: {
      const auto& t = std::get<EffectOut>(o.v);
      Json out = Json::object();
      for (std::uint32_t s = 0; s < t.table.size(); ++s)
        out[m.labels[s]] = Json{{"store", m.labels[t.table[s].first]},
                                {"value", m.values[t.table[s].second]}};
      return out;
    }
    case MooreKind::InteractiveOutput: {
      const auto& t = std::get<WriterOut>(o.v);
      if (t.emitted.empty() && t.final_value)
        return Json(m.values[*t.final_value]);
      Json out = Json::object();
      out["emit"] = names_of(t.emitted, m.labels);
      if (t.final_value) out["value"] = m.values[*t.final_value];
      return out;
    }
    case MooreKind::Probabilistic:
      return Json(format_rational(std::get<RationalOut>(o.v).value));
  }
  throw InvariantViolation("unknown machine kind");
}

inline Json serialize_moore_transition(const MooreVariant& m, StateId x,
                                       Letter a) {
  Json e = Json::object();
  e["from"] = m.states[x];
  e["letter"] = m.letters[a];
  const TState& ts = m.trans[x][a];
  switch (m.kind) {
    case MooreKind::Exception: {
      const auto& s = std::get<ExcState>(ts.v);
      if (s.is_exception)
        e["to"] = Json{{"raise", m.labels[s.value]}};
      else
        e["to"] = m.states[s.value];
      break;
    }
    case MooreKind::SideEffect: {
      const auto& s = std::get<EffState>(ts.v);
      Json to = Json::object();
      for (std::uint32_t pre = 0; pre < s.table.size(); ++pre)
        to[m.labels[pre]] = Json{{"store", m.labels[s.table[pre].first]},
                                 {"state", m.states[s.table[pre].second]}};
      e["to"] = std::move(to);
      break;
    }
    case MooreKind::InteractiveOutput: {
      const auto& s = std::get<WriterState>(ts.v);
      if (!s.emitted.empty()) e["emit"] = names_of(s.emitted, m.labels);
      e["to"] = m.states[s.state];
      break;
    }
    case MooreKind::Probabilistic: {
      const auto& s = std::get<DistState>(ts.v);
      Json to = Json::object();
      for (const auto& [y, p] : s.weights)
        to[m.states[y]] = format_rational(p);
      e["to"] = std::move(to);
      break;
    }
  }
  return e;
}

}  // namespace detail

inline std::string machine_kind_name(const MachineFile& mf) {
  return std::visit(
      [](const auto& m) -> std::string {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Nda>) return "nda";
        if constexpr (std::is_same_v<M, PartialAutomaton>) return "pa";
        if constexpr (std::is_same_v<M, PartialMealy>) return "mealy";
        if constexpr (std::is_same_v<M, MooreVariant>) {
          switch (m.kind) {
            case MooreKind::Exception:
              return "moore-exception";
            case MooreKind::SideEffect:
              return "moore-sideeffect";
            case MooreKind::InteractiveOutput:
              return "moore-output";
            case MooreKind::Probabilistic:
              return "prob";
          }
        }
        if constexpr (std::is_same_v<M, Pda>) return "pda";
        if constexpr (std::is_same_v<M, Grammar>) return "grammar";
        if constexpr (std::is_same_v<M, Lts>) return "lts";
        throw InvariantViolation("unknown machine kind");
      },
      mf.machine);
}

inline std::string serialize_machine(const MachineFile& mf) {
  using detail::Json;
  Json j = Json::object();
  j["kind"] = machine_kind_name(mf);
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Nda>) {
          j["states"] = m.states;
          j["letters"] = m.letters;
          Json acc = Json::array();
          for (StateId x = 0; x < m.states.size(); ++x)
            if (m.accepting[x]) acc.push_back(m.states[x]);
          j["accepting"] = std::move(acc);
          Json tr = Json::array();
          for (StateId x = 0; x < m.states.size(); ++x)
            for (Letter a = 0; a < m.letters.size(); ++a)
              if (!m.delta[x][a].empty()) {
                Json to = Json::array();
                for (StateId y : m.delta[x][a]) to.push_back(m.states[y]);
                tr.push_back(Json{{"from", m.states[x]},
                                  {"letter", m.letters[a]},
                                  {"to", std::move(to)}});
              }
          j["transitions"] = std::move(tr);
        } else if constexpr (std::is_same_v<M, PartialAutomaton>) {
          j["states"] = m.states;
          j["letters"] = m.letters;
          Json acc = Json::array();
          for (StateId x = 0; x < m.states.size(); ++x)
            if (m.accepting[x]) acc.push_back(m.states[x]);
          j["accepting"] = std::move(acc);
          Json tr = Json::array();
          for (StateId x = 0; x < m.states.size(); ++x)
            for (Letter a = 0; a < m.letters.size(); ++a)
              if (m.delta[x][a])
                tr.push_back(Json{{"from", m.states[x]},
                                  {"letter", m.letters[a]},
                                  {"to", m.states[*m.delta[x][a]]}});
          j["transitions"] = std::move(tr);
        } else if constexpr (std::is_same_v<M, PartialMealy>) {
          j["states"] = m.states;
          j["inputs"] = m.inputs;
          j["outputs"] = m.outputs;
          j["bottom"] = m.outputs[m.bottom];
          Json tr = Json::array();
          for (StateId x = 0; x < m.states.size(); ++x)
            for (Letter a = 0; a < m.inputs.size(); ++a)
              if (m.trans[x][a])
                tr.push_back(Json{{"from", m.states[x]},
                                  {"input", m.inputs[a]},
                                  {"output", m.outputs[m.trans[x][a]->first]},
                                  {"to", m.states[m.trans[x][a]->second]}});
          j["transitions"] = std::move(tr);
        } else if constexpr (std::is_same_v<M, MooreVariant>) {
          j["states"] = m.states;
          j["letters"] = m.letters;
          if (m.kind == MooreKind::Exception) j["exceptions"] = m.labels;
          if (m.kind == MooreKind::SideEffect) j["stores"] = m.labels;
          if (m.kind == MooreKind::InteractiveOutput) j["emits"] = m.labels;
          if (m.kind != MooreKind::Probabilistic) j["values"] = m.values;
          Json outs = Json::object();
          for (StateId x = 0; x < m.states.size(); ++x)
            outs[m.states[x]] =
                detail::serialize_moore_output(m, m.outputs[x]);
          j["outputs"] = std::move(outs);
          Json tr = Json::array();
          for (StateId x = 0; x < m.states.size(); ++x)
            for (Letter a = 0; a < m.letters.size(); ++a)
              tr.push_back(detail::serialize_moore_transition(m, x, a));
          j["transitions"] = std::move(tr);
        } else if constexpr (std::is_same_v<M, Pda>) {
          j["control"] = m.control;
          j["input"] = m.input;
          j["stack"] = m.stack_syms;
          Json rules = Json::array();
          for (const auto& r : m.rules)
            rules.push_back(Json{{"state", m.control[r.state]},
                                 {"letter", m.input[r.letter]},
                                 {"top", m.stack_syms[r.top]},
                                 {"next", m.control[r.next]},
                                 {"push", detail::names_of(r.push,
                                                           m.stack_syms)}});
          j["rules"] = std::move(rules);
          bool takes_states =
              m.accept.kind == AcceptModeKind::AcceptingStates ||
              m.accept.kind == AcceptModeKind::AcceptingStatesEmptyStack;
          j["accept"] = Json{
              {"mode", detail::accept_mode_name(m.accept.kind)},
              {"set", detail::names_of(
                          m.accept.set,
                          takes_states ? m.control : m.stack_syms)}};
          j["init"] = Json{{"state", m.control[m.init_state]},
                           {"stack", detail::names_of(m.init_stack,
                                                      m.stack_syms)}};
        } else if constexpr (std::is_same_v<M, Grammar>) {
          j["terminals"] = m.terminals;
          j["variables"] = m.variables;
          j["start"] = m.variables[m.start];
          Json prods = Json::array();
          for (const auto& pr : m.productions) {
            Json rhs = Json::array();
            for (const auto& sym : pr.rhs)
              rhs.push_back(sym.is_terminal ? m.terminals[sym.index]
                                            : m.variables[sym.index]);
            prods.push_back(
                Json{{"lhs", m.variables[pr.lhs]}, {"rhs", std::move(rhs)}});
          }
          j["productions"] = std::move(prods);
        } else if constexpr (std::is_same_v<M, Lts>) {
          j["states"] = m.state_names;
          j["letters"] = m.letter_names;
          Json tr = Json::array();
          for (StateId x = 0; x < m.n_states(); ++x)
            for (Letter a = 0; a < m.n_letters(); ++a)
              if (!m.delta[x][a].empty()) {
                Json to = Json::array();
                for (StateId y : m.delta[x][a]) to.push_back(m.state_names[y]);
                tr.push_back(Json{{"from", m.state_names[x]},
                                  {"letter", m.letter_names[a]},
                                  {"to", std::move(to)}});
              }
          j["transitions"] = std::move(tr);
        }
      },
      mf.machine);
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Hooks from file descriptions into the core constructions.

inline FTCoalgebra machine_coalgebra(const MachineFile& mf) {
  return std::visit(
      [](const auto& m) -> FTCoalgebra {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Nda>) return nda_coalgebra(m);
        if constexpr (std::is_same_v<M, PartialAutomaton>)
          return pa_coalgebra(m);
        if constexpr (std::is_same_v<M, MooreVariant>)
          return moore_coalgebra(m);
        if constexpr (std::is_same_v<M, Pda>) return pda_coalgebra(m);
        if constexpr (std::is_same_v<M, Grammar>)
          return pda_coalgebra(grammar_to_pda(m));
        if constexpr (std::is_same_v<M, Lts>)
          throw ValidationError(
              "a transition system needs a decoration; use the trace "
              "commands");
        throw ValidationError(
            "mealy machines have no per-state outputs; use the mealy "
            "commands");
      },
      mf.machine);
}

inline RenderContext render_context(const MachineFile& mf) {
  return std::visit(
      [](const auto& m) -> RenderContext {
        using M = std::decay_t<decltype(m)>;
        RenderContext ctx;
        if constexpr (std::is_same_v<M, Nda>) {
          ctx.states = m.states;
          ctx.letters = m.letters;
        } else if constexpr (std::is_same_v<M, PartialAutomaton>) {
          ctx.states = m.states;
          ctx.letters = m.letters;
        } else if constexpr (std::is_same_v<M, PartialMealy>) {
          ctx.states = m.states;
          ctx.letters = m.inputs;
          ctx.values = m.outputs;
        } else if constexpr (std::is_same_v<M, MooreVariant>) {
          ctx.states = m.states;
          ctx.letters = m.letters;
          ctx.labels = m.labels;
          ctx.values = m.values;
        } else if constexpr (std::is_same_v<M, Pda>) {
          ctx.states = m.control;
          ctx.letters = m.input;
          ctx.labels = m.stack_syms;
        } else if constexpr (std::is_same_v<M, Grammar>) {
          ctx.states = {"*"};
          ctx.letters = m.terminals;
          ctx.labels = m.variables;
        } else {
          ctx.states = m.state_names;
          ctx.letters = m.letter_names;
        }
        return ctx;
      },
      mf.machine);
}

// ---------------------------------------------------------------------------
// GraphViz rendering of a determinized machine. One node per memoized
// T-state; edges to successors that were themselves explored.

namespace detail {

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out;
}

}  // namespace detail

inline std::string to_dot(const DetMachine& d, const RenderContext& ctx) {
  std::ostringstream os;
  os << "digraph determinized {\n"
     << "  rankdir=LR;\n"
     << "  node [shape=box];\n";
  std::map<TState, std::size_t> id;
  for (const auto& [ts, e] : d.memo) id.emplace(ts, id.size());
  for (const auto& [ts, e] : d.memo) {
    os << "  n" << id[ts] << " [label=\""
       << detail::dot_escape(render_tstate(d.base.monad, ts, ctx)) << "\\n"
       << detail::dot_escape(render_output(e.out, ctx)) << "\"];\n";
  }
  for (const auto& r : d.roots)
    os << "  n" << id.at(r) << " [peripheries=2];\n";
  for (const auto& [ts, e] : d.memo)
    for (Letter a = 0; a < e.next.size(); ++a) {
      auto it = id.find(e.next[a]);
      if (it == id.end()) continue;
      os << "  n" << id[ts] << " -> n" << it->second << " [label=\""
         << detail::dot_escape(detail::named(ctx.letters, a)) << "\"];\n";
    }
  os << "}\n";
  return os.str();
}

inline std::string to_dot(const DetMachine& d) {
  RenderContext ctx;
  ctx.states = d.base.state_names;
  ctx.letters = d.base.letter_names;
  ctx.labels = d.base.monad.labels;
  return to_dot(d, ctx);
}

}  // namespace coalg
