#pragma once

#include <string>
#include <vector>

#include "monad.hpp"
#include "types.hpp"

namespace coalg {

// A finite machine x -> O x T(X)^A: per state an output value and, per input
// letter, a T-structured successor.
struct FTCoalgebra {
  MonadKind monad;
  std::vector<std::string> state_names;
  std::vector<std::string> letter_names;
  std::vector<OutputValue> output;            // indexed by state
  std::vector<std::vector<TState>> step;      // [state][letter]

  std::size_t n_states() const { return state_names.size(); }
  std::size_t n_letters() const { return letter_names.size(); }
};

// Checks internal consistency; throws InvariantViolation on defects.
inline void validate(const FTCoalgebra& c) {
  if (c.output.size() != c.n_states() || c.step.size() != c.n_states())
    throw InvariantViolation("coalgebra tables do not match state count");
  for (std::size_t x = 0; x < c.n_states(); ++x) {
    if (c.step[x].size() != c.n_letters())
      throw InvariantViolation("step table does not match alphabet");
    if (c.output[x].v.index() != c.output[0].v.index())
      throw InvariantViolation("states have mixed output carriers");
    for (const auto& ts : c.step[x]) validate_tstate(c.monad, c.n_states(), ts);
  }
}

struct ExtendResult {
  OutputValue out;
  std::vector<TState> next;  // per letter

  bool operator==(const ExtendResult&) const = default;
};

// One step of the determinized machine: the unique extension of outputs and
// transitions from states to T-states.
inline ExtendResult extend(const FTCoalgebra& c, const TState& ts) {
  if (c.n_states() == 0) throw InvariantViolation("empty coalgebra");
  validate_tstate(c.monad, c.n_states(), ts);
  ExtendResult r;
  r.out = combine_outputs(
      c.monad, ts, [&](StateId x) -> const OutputValue& { return c.output[x]; },
      c.output[0]);
  r.next.reserve(c.n_letters());
  for (Letter a = 0; a < c.n_letters(); ++a)
    r.next.push_back(
        bind(c.monad, ts, [&](StateId x) -> const TState& { return c.step[x][a]; }));
  return r;
}

inline Letter letter_index(const FTCoalgebra& c, const std::string& name) {
  for (Letter a = 0; a < c.n_letters(); ++a)
    if (c.letter_names[a] == name) return a;
  throw UnknownStateError("unknown letter: " + name);
}

inline StateId state_index(const FTCoalgebra& c, const std::string& name) {
  for (StateId x = 0; x < c.n_states(); ++x)
    if (c.state_names[x] == name) return x;
  throw UnknownStateError("unknown state: " + name);
}

}  // namespace coalg
