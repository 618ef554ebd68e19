#pragma once

#include <map>
#include <string>
#include <vector>

#include "equivalence.hpp"

namespace coalg {

// A finitely branching transition system with a total successor table
// (delta[state][letter] lists the successors, possibly none).
struct Lts {
  std::vector<std::string> state_names;
  std::vector<std::string> letter_names;
  std::vector<std::vector<std::vector<StateId>>> delta;

  std::size_t n_states() const { return state_names.size(); }
  std::size_t n_letters() const { return letter_names.size(); }

  bool operator==(const Lts&) const = default;
};

inline void validate_lts(const Lts& l) {
  if (l.delta.size() != l.n_states())
    throw ValidationError("transition table size does not match state count");
  for (StateId x = 0; x < l.n_states(); ++x) {
    if (l.delta[x].size() != l.n_letters())
      throw ValidationError("transition row size does not match letter count");
    for (Letter a = 0; a < l.n_letters(); ++a)
      for (StateId y : l.delta[x][a])
        if (y >= l.n_states())
          throw ValidationError("transition target out of range");
  }
}

enum class Decoration { Trace, CompleteTrace, Failure, Ready };

inline const char* decoration_name(Decoration d) {
  switch (d) {
    case Decoration::Trace:
      return "trace";
    case Decoration::CompleteTrace:
      return "complete-trace";
    case Decoration::Failure:
      return "failure";
    default:
      return "ready";
  }
}

inline std::vector<Letter> enabled_letters(const Lts& l, StateId x) {
  if (x >= l.n_states()) throw UnknownStateError("state id out of range");
  std::vector<Letter> out;
  for (Letter a = 0; a < l.n_letters(); ++a)
    if (!l.delta[x][a].empty()) out.push_back(a);
  return out;
}

// All sets of letters disjoint from the enabled set of x (the refusals).
inline std::vector<std::vector<Letter>> fail_sets(const Lts& l, StateId x) {
  auto en = enabled_letters(l, x);
  std::vector<Letter> rest;
  for (Letter a = 0; a < l.n_letters(); ++a)
    if (!std::binary_search(en.begin(), en.end(), a)) rest.push_back(a);
  if (rest.size() > 20)
    throw InvariantViolation("refusal enumeration needs at most 20 letters");
  std::vector<std::vector<Letter>> out;
  for (std::size_t mask = 0; mask < (std::size_t(1) << rest.size()); ++mask) {
    std::vector<Letter> z;
    for (std::size_t i = 0; i < rest.size(); ++i)
      if (mask & (std::size_t(1) << i)) z.push_back(rest[i]);
    out.push_back(std::move(z));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Reads the transition system as a nondeterministic automaton whose outputs
// carry the chosen observation: plain acceptance for traces, deadlock
// acceptance for complete traces, the refusal family for failures, and the
// enabled-set family for readies.
inline FTCoalgebra decorate(const Lts& l, Decoration d) {
  validate_lts(l);
  FTCoalgebra c;
  c.monad = powerset_monad();
  c.state_names = l.state_names;
  c.letter_names = l.letter_names;
  c.output.resize(l.n_states());
  c.step.assign(l.n_states(), {});
  for (StateId x = 0; x < l.n_states(); ++x) {
    auto en = enabled_letters(l, x);
    switch (d) {
      case Decoration::Trace:
        c.output[x] = OutputValue{BoolOut{true}};
        break;
      case Decoration::CompleteTrace:
        c.output[x] = OutputValue{BoolOut{en.empty()}};
        break;
      case Decoration::Failure: {
        FamilyOut fam{fail_sets(l, x)};
        c.output[x] = OutputValue{std::move(fam)};
        break;
      }
      case Decoration::Ready: {
        FamilyOut fam{{std::vector<Letter>(en.begin(), en.end())}};
        c.output[x] = OutputValue{std::move(fam)};
        break;
      }
    }
    c.step[x].reserve(l.n_letters());
    for (Letter a = 0; a < l.n_letters(); ++a) {
      PsetState ps{l.delta[x][a]};
      canonicalize(ps);
      c.step[x].push_back(TState{std::move(ps)});
    }
  }
  return c;
}

// The observation table of a set of start states to the given depth under
// the chosen decoration.
inline BehaviourTable decorated_semantics(const Lts& l, Decoration d,
                                          const std::vector<StateId>& starts,
                                          std::size_t depth) {
  for (StateId x : starts)
    if (x >= l.n_states()) throw UnknownStateError("state id out of range");
  FTCoalgebra c = decorate(l, d);
  PsetState ps{starts};
  canonicalize(ps);
  return behaviour_table(c, TState{std::move(ps)}, depth);
}

inline BehaviourTable decorated_semantics(const Lts& l, Decoration d,
                                          StateId x, std::size_t depth) {
  return decorated_semantics(l, d, std::vector<StateId>{x}, depth);
}

// Compares two states under each decoration. The powerset closures are
// finite, so every verdict is definite; the depth only labels witnesses.
inline std::map<Decoration, EquivResult> spectrum_compare(
    const Lts& l, StateId x, StateId y, std::size_t depth = 1000) {
  if (x >= l.n_states() || y >= l.n_states())
    throw UnknownStateError("state id out of range");
  std::map<Decoration, EquivResult> out;
  for (Decoration d : {Decoration::Trace, Decoration::CompleteTrace,
                       Decoration::Failure, Decoration::Ready}) {
    FTCoalgebra c = decorate(l, d);
    out.emplace(d, absorbed_equivalent(c, unit(c.monad, x), unit(c.monad, y),
                                       depth));
  }
  return out;
}

}  // namespace coalg
