#pragma once

#include <optional>
#include <string>
#include <vector>

#include "determinize.hpp"

namespace coalg {

// ---------------------------------------------------------------------------
// Nondeterministic automaton.

struct Nda {
  std::vector<std::string> states;
  std::vector<std::string> letters;
  std::vector<bool> accepting;
  // [state][letter] -> sorted successor set
  std::vector<std::vector<std::vector<StateId>>> delta;

  bool operator==(const Nda&) const = default;
};

inline FTCoalgebra nda_coalgebra(const Nda& n) {
  FTCoalgebra c;
  c.monad = powerset_monad();
  c.state_names = n.states;
  c.letter_names = n.letters;
  for (std::size_t x = 0; x < n.states.size(); ++x) {
    c.output.push_back({BoolOut{n.accepting[x]}});
    std::vector<TState> row;
    for (std::size_t a = 0; a < n.letters.size(); ++a) {
      PsetState s{n.delta[x][a]};
      canonicalize(s);
      row.push_back({std::move(s)});
    }
    c.step.push_back(std::move(row));
  }
  return c;
}

// Subset construction from the given roots. The cap is the theoretical
// maximum number of subsets, so this never reports a cap error.
inline DetMachine nda_determinize(const Nda& n, std::vector<TState> roots) {
  std::uint64_t cap = n.states.size() < 63
                          ? (std::uint64_t(1) << n.states.size())
                          : ~std::uint64_t(0);
  return determinize(nda_coalgebra(n), std::move(roots), cap);
}

// Default roots: every singleton.
inline DetMachine nda_determinize(const Nda& n) {
  std::vector<TState> roots;
  for (StateId x = 0; x < n.states.size(); ++x)
    roots.push_back({PsetState{{x}}});
  return nda_determinize(n, std::move(roots));
}

// ---------------------------------------------------------------------------
// Partial automaton: deterministic transitions that may be undefined.

struct PartialAutomaton {
  std::vector<std::string> states;
  std::vector<std::string> letters;
  std::vector<bool> accepting;
  std::vector<std::vector<std::optional<StateId>>> delta;  // [state][letter]

  bool operator==(const PartialAutomaton&) const = default;
};

inline FTCoalgebra pa_coalgebra(const PartialAutomaton& p) {
  FTCoalgebra c;
  c.monad = partiality_monad();
  c.state_names = p.states;
  c.letter_names = p.letters;
  for (std::size_t x = 0; x < p.states.size(); ++x) {
    c.output.push_back({BoolOut{p.accepting[x]}});
    std::vector<TState> row;
    for (std::size_t a = 0; a < p.letters.size(); ++a)
      row.push_back({PartialState{p.delta[x][a]}});
    c.step.push_back(std::move(row));
  }
  return c;
}

// Totalization: closes every state under transitions, sending undefined
// steps to the non-accepting sink.
inline DetMachine pa_totalize(const PartialAutomaton& p) {
  FTCoalgebra c = pa_coalgebra(p);
  std::vector<TState> roots;
  for (StateId x = 0; x < p.states.size(); ++x)
    roots.push_back(unit(c.monad, x));
  return determinize(c, std::move(roots), p.states.size() + 1);
}

// Words with a defined run (W) and accepted words (V), up to `depth`.
struct VwResult {
  std::vector<Word> v;
  std::vector<Word> w;
};

inline VwResult pa_vw_semantics(const PartialAutomaton& p, StateId x,
                                std::size_t depth) {
  if (x >= p.states.size()) throw UnknownStateError("state id out of range");
  VwResult r;
  std::vector<std::pair<Word, StateId>> level{{Word{}, x}};
  for (std::size_t len = 0; len <= depth; ++len) {
    std::vector<std::pair<Word, StateId>> next;
    for (auto& [w, y] : level) {
      r.w.push_back(w);
      if (p.accepting[y]) r.v.push_back(w);
      if (len == depth) continue;
      for (Letter a = 0; a < p.letters.size(); ++a)
        if (p.delta[y][a]) {
          Word wa = w;
          wa.push_back(a);
          next.emplace_back(std::move(wa), *p.delta[y][a]);
        }
    }
    level = std::move(next);
  }
  sort_unique(r.v);
  sort_unique(r.w);
  return r;
}

// ---------------------------------------------------------------------------
// Partial Mealy machine. Output alphabet B contains a designated bottom
// element, produced from the first undefined step onwards.

struct PartialMealy {
  std::vector<std::string> states;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;  // includes the bottom element
  std::uint32_t bottom = 0;          // index into outputs
  // [state][letter] -> (output, successor), or undefined
  std::vector<std::vector<std::optional<std::pair<std::uint32_t, StateId>>>>
      trans;

  bool operator==(const PartialMealy&) const = default;
};

// Output word of the totalized machine on `w`: one output letter per input
// letter, bottom forever once the run leaves the defined part.
inline std::vector<std::uint32_t> mealy_output(const PartialMealy& m,
                                               StateId x, const Word& w) {
  if (x >= m.states.size()) throw UnknownStateError("state id out of range");
  std::vector<std::uint32_t> out;
  std::optional<StateId> cur = x;
  for (Letter a : w) {
    if (a >= m.inputs.size()) throw UnknownStateError("letter out of range");
    if (!cur) {
      out.push_back(m.bottom);
      continue;
    }
    const auto& step = m.trans[*cur][a];
    if (!step) {
      out.push_back(m.bottom);
      cur.reset();
    } else {
      out.push_back(step->first);
      cur = step->second;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Moore machines over the remaining monads.

enum class MooreKind { Exception, SideEffect, InteractiveOutput, Probabilistic };

// A description with per-state outputs and per-letter T-successors. `labels`
// is the monad parameter set (E, S or O); `values` names the plain output
// set B where there is one.
struct MooreVariant {
  MooreKind kind = MooreKind::Exception;
  std::vector<std::string> states;
  std::vector<std::string> letters;
  std::vector<std::string> labels;
  std::vector<std::string> values;
  std::vector<OutputValue> outputs;        // per state
  std::vector<std::vector<TState>> trans;  // [state][letter]

  bool operator==(const MooreVariant&) const = default;
};

inline MonadKind moore_monad(const MooreVariant& m) {
  switch (m.kind) {
    case MooreKind::Exception: return exception_monad(m.labels);
    case MooreKind::SideEffect: return side_effect_monad(m.labels);
    case MooreKind::InteractiveOutput: return writer_monad(m.labels);
    case MooreKind::Probabilistic: return distribution_monad();
  }
  throw InvariantViolation("unknown machine kind");
}

inline FTCoalgebra moore_coalgebra(const MooreVariant& m) {
  FTCoalgebra c;
  c.monad = moore_monad(m);
  c.state_names = m.states;
  c.letter_names = m.letters;
  c.output = m.outputs;
  c.step = m.trans;
  validate(c);
  return c;
}

inline BehaviourTable moore_behaviour(const MooreVariant& m, StateId x,
                                      std::size_t depth) {
  FTCoalgebra c = moore_coalgebra(m);
  if (x >= c.n_states()) throw UnknownStateError("state id out of range");
  return behaviour_table(c, unit(c.monad, x), depth);
}

}  // namespace coalg
