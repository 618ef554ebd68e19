#pragma once

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "rational.hpp"
#include "types.hpp"

namespace coalg {

enum class MonadTag {
  Powerset,
  Partiality,
  Exception,
  SideEffect,
  Writer,
  Distribution,
  StackState,
};

// Descriptor of a monad instance. `labels` names the parameter set where the
// instance has one: exception labels E, side-effect states S, output letters
// O, or stack symbols B. Empty for Powerset, Partiality and Distribution.
struct MonadKind {
  MonadTag tag = MonadTag::Powerset;
  std::vector<std::string> labels;

  bool operator==(const MonadKind&) const = default;
};

inline MonadKind powerset_monad() { return {MonadTag::Powerset, {}}; }
inline MonadKind partiality_monad() { return {MonadTag::Partiality, {}}; }
inline MonadKind exception_monad(std::vector<std::string> e) {
  return {MonadTag::Exception, std::move(e)};
}
inline MonadKind side_effect_monad(std::vector<std::string> s) {
  return {MonadTag::SideEffect, std::move(s)};
}
inline MonadKind writer_monad(std::vector<std::string> o) {
  return {MonadTag::Writer, std::move(o)};
}
inline MonadKind distribution_monad() { return {MonadTag::Distribution, {}}; }
inline MonadKind stack_state_monad(std::vector<std::string> b) {
  return {MonadTag::StackState, std::move(b)};
}

// Monads whose reachable state spaces stay finite under iterated extension,
// so closure-based algorithms terminate without a depth bound.
inline bool finitary(MonadTag t) {
  return t == MonadTag::Powerset || t == MonadTag::Partiality ||
         t == MonadTag::Exception || t == MonadTag::SideEffect;
}

inline const char* monad_name(MonadTag t) {
  switch (t) {
    case MonadTag::Powerset: return "powerset";
    case MonadTag::Partiality: return "partiality";
    case MonadTag::Exception: return "exception";
    case MonadTag::SideEffect: return "sideeffect";
    case MonadTag::Writer: return "writer";
    case MonadTag::Distribution: return "distribution";
    case MonadTag::StackState: return "stackstate";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// T-state payloads. All kept in canonical form so that equal values compare
// equal structurally.

struct PsetState {
  std::vector<StateId> elems;  // sorted, no duplicates

  bool operator==(const PsetState&) const = default;
  bool operator<(const PsetState& o) const { return elems < o.elems; }
};

struct PartialState {
  std::optional<StateId> state;  // nullopt is the added sink

  bool operator==(const PartialState&) const = default;
  bool operator<(const PartialState& o) const { return state < o.state; }
};

struct ExcState {
  bool is_exception = false;
  std::uint32_t value = 0;  // exception label index, or a state id

  bool operator==(const ExcState&) const = default;
  bool operator<(const ExcState& o) const {
    return std::pair(is_exception, value) < std::pair(o.is_exception, o.value);
  }
};

// Total table over the side-effect set S: position s holds (s', x).
struct EffState {
  std::vector<std::pair<std::uint32_t, StateId>> table;

  bool operator==(const EffState&) const = default;
  bool operator<(const EffState& o) const { return table < o.table; }
};

struct WriterState {
  std::vector<std::uint32_t> emitted;  // word over O, oldest first
  StateId state = 0;

  bool operator==(const WriterState&) const = default;
  bool operator<(const WriterState& o) const {
    return std::tie(emitted, state) < std::tie(o.emitted, o.state);
  }
};

// Finitely supported distribution: sorted by state, weights positive,
// summing to exactly one.
struct DistState {
  std::vector<std::pair<StateId, Rational>> weights;

  bool operator==(const DistState& o) const { return weights == o.weights; }
  bool operator<(const DistState& o) const { return weights < o.weights; }
};

// One rewrite clause of a stack-indexed state: on any stack matching
// `pattern` followed by rest, contribute (state, replacement ++ rest).
struct StackRule {
  Stack pattern;
  StateId state = 0;
  Stack replacement;

  bool operator==(const StackRule&) const = default;
  bool operator<(const StackRule& o) const {
    return std::tie(pattern, state, replacement) <
           std::tie(o.pattern, o.state, o.replacement);
  }
};

struct StackTable {
  std::vector<StackRule> rules;  // sorted, reduced

  bool operator==(const StackTable&) const = default;
  bool operator<(const StackTable& o) const { return rules < o.rules; }
};

struct TState {
  std::variant<PsetState, PartialState, ExcState, EffState, WriterState,
               DistState, StackTable>
      v;

  bool operator==(const TState& o) const { return v == o.v; }
  bool operator<(const TState& o) const { return v < o.v; }
};

// ---------------------------------------------------------------------------
// Output values (carriers of the output algebra).

struct BoolOut {
  bool value = false;

  bool operator==(const BoolOut&) const = default;
  bool operator<(const BoolOut& o) const { return value < o.value; }
};

// A family of subsets of the alphabet; each set sorted, family sorted.
struct FamilyOut {
  std::vector<std::vector<Letter>> sets;

  bool operator==(const FamilyOut&) const = default;
  bool operator<(const FamilyOut& o) const { return sets < o.sets; }
};

// Element of E + B: an exception label or a plain output value.
struct TaggedOut {
  bool is_exception = false;
  std::uint32_t value = 0;

  bool operator==(const TaggedOut&) const = default;
  bool operator<(const TaggedOut& o) const {
    return std::pair(is_exception, value) < std::pair(o.is_exception, o.value);
  }
};

// Total table over S: position s holds (s', b).
struct EffectOut {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> table;

  bool operator==(const EffectOut&) const = default;
  bool operator<(const EffectOut& o) const { return table < o.table; }
};

// Word over O, optionally paired with a final value from B.
struct WriterOut {
  std::vector<std::uint32_t> emitted;
  std::optional<std::uint32_t> final_value;

  bool operator==(const WriterOut&) const = default;
  bool operator<(const WriterOut& o) const {
    return std::tie(emitted, final_value) < std::tie(o.emitted, o.final_value);
  }
};

struct RationalOut {
  Rational value;

  bool operator==(const RationalOut& o) const { return value == o.value; }
  bool operator<(const RationalOut& o) const { return value < o.value; }
};

// Boolean function on stacks with finite representation: true exactly on the
// stacks listed in `exact` plus every stack extending a pattern in `prefixes`.
struct StackPredicate {
  std::vector<Stack> exact;
  std::vector<Stack> prefixes;

  bool operator==(const StackPredicate&) const = default;
  bool operator<(const StackPredicate& o) const {
    return std::tie(exact, prefixes) < std::tie(o.exact, o.prefixes);
  }
};

struct OutputValue {
  std::variant<BoolOut, FamilyOut, TaggedOut, EffectOut, WriterOut, RationalOut,
               StackPredicate>
      v;

  bool operator==(const OutputValue& o) const { return v == o.v; }
  bool operator<(const OutputValue& o) const { return v < o.v; }
};

// ---------------------------------------------------------------------------
// Canonicalization.

inline void canonicalize(PsetState& s) { sort_unique(s.elems); }

inline void canonicalize(DistState& d) {
  std::sort(d.weights.begin(), d.weights.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<StateId, Rational>> merged;
  for (auto& [x, p] : d.weights) {
    if (!merged.empty() && merged.back().first == x)
      merged.back().second += p;
    else
      merged.emplace_back(x, p);
  }
  Rational sum = 0;
  std::vector<std::pair<StateId, Rational>> out;
  for (auto& [x, p] : merged) {
    if (p == 0) continue;
    if (p < 0) throw InvariantViolation("negative weight in distribution");
    sum += p;
    out.emplace_back(x, p);
  }
  if (sum != 1) throw InvariantViolation("distribution weights must sum to 1");
  d.weights = std::move(out);
}

inline void canonicalize(StackTable& t) {
  sort_unique(t.rules);
  // A clause is redundant when a clause with a shorter pattern already yields
  // its contributions: (p ++ e, q, r ++ e) is implied by (p, q, r).
  std::vector<StackRule> kept;
  for (const auto& rule : t.rules) {
    bool redundant = false;
    for (const auto& other : t.rules) {
      if (other.state != rule.state) continue;
      if (!is_proper_prefix(other.pattern, rule.pattern)) continue;
      Stack ext = drop(rule.pattern, other.pattern.size());
      if (rule.replacement == concat(other.replacement, ext)) {
        redundant = true;
        break;
      }
    }
    if (!redundant) kept.push_back(rule);
  }
  t.rules = std::move(kept);
}

inline void canonicalize(FamilyOut& f) {
  for (auto& s : f.sets) sort_unique(s);
  sort_unique(f.sets);
}

// Number of stack symbols has to be known to fold a complete fan of child
// cones back into their root; callers inside one machine pass |B|.
inline void canonicalize(StackPredicate& p, std::size_t n_stack_syms) {
  sort_unique(p.exact);
  sort_unique(p.prefixes);
  auto covered = [&](const Stack& s) {
    for (const auto& f : p.prefixes)
      if (is_prefix(f, s)) return true;
    return false;
  };
  // Promote an exact stack to a prefix pattern when every one-symbol
  // extension is already covered; repeat to fixpoint so completed cones have
  // one root form.
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& e : p.exact) {
      if (covered(e)) continue;
      bool all = n_stack_syms > 0;
      for (StackSym b = 0; b < n_stack_syms && all; ++b) {
        Stack child = e;
        child.push_back(b);
        all = covered(child);
      }
      if (all) {
        p.prefixes.push_back(e);
        sort_unique(p.prefixes);
        changed = true;
        break;
      }
    }
  }
  // Keep only minimal prefix patterns and exact stacks not under a pattern.
  std::vector<Stack> minimal;
  for (const auto& f : p.prefixes) {
    bool shadowed = false;
    for (const auto& g : p.prefixes)
      if (g != f && is_prefix(g, f)) shadowed = true;
    if (!shadowed) minimal.push_back(f);
  }
  p.prefixes = std::move(minimal);
  std::vector<Stack> exact;
  for (const auto& e : p.exact)
    if (!covered(e)) exact.push_back(e);
  p.exact = std::move(exact);
}

inline void canonicalize(const MonadKind& m, TState& ts) {
  switch (m.tag) {
    case MonadTag::Powerset:
      canonicalize(std::get<PsetState>(ts.v));
      break;
    case MonadTag::Distribution:
      canonicalize(std::get<DistState>(ts.v));
      break;
    case MonadTag::StackState:
      canonicalize(std::get<StackTable>(ts.v));
      break;
    default:
      break;
  }
}

// ---------------------------------------------------------------------------
// Structural validation of a T-state against a machine with n_atoms states.

inline void validate_tstate(const MonadKind& m, std::size_t n_atoms,
                            const TState& ts) {
  auto atom_ok = [&](StateId x) {
    if (x >= n_atoms) throw InvariantViolation("state id out of range");
  };
  switch (m.tag) {
    case MonadTag::Powerset: {
      const auto* s = std::get_if<PsetState>(&ts.v);
      if (!s) throw InvariantViolation("payload is not a state set");
      for (std::size_t i = 0; i < s->elems.size(); ++i) {
        atom_ok(s->elems[i]);
        if (i > 0 && s->elems[i - 1] >= s->elems[i])
          throw InvariantViolation("state set not in canonical order");
      }
      break;
    }
    case MonadTag::Partiality: {
      const auto* s = std::get_if<PartialState>(&ts.v);
      if (!s) throw InvariantViolation("payload is not a partial state");
      if (s->state) atom_ok(*s->state);
      break;
    }
    case MonadTag::Exception: {
      const auto* s = std::get_if<ExcState>(&ts.v);
      if (!s) throw InvariantViolation("payload is not an exception state");
      if (s->is_exception) {
        if (s->value >= m.labels.size())
          throw InvariantViolation("exception label out of range");
      } else {
        atom_ok(s->value);
      }
      break;
    }
    case MonadTag::SideEffect: {
      const auto* s = std::get_if<EffState>(&ts.v);
      if (!s) throw InvariantViolation("payload is not a side-effect table");
      if (s->table.size() != m.labels.size())
        throw InvariantViolation("side-effect table has wrong size");
      for (auto& [s2, x] : s->table) {
        if (s2 >= m.labels.size())
          throw InvariantViolation("side-effect target out of range");
        atom_ok(x);
      }
      break;
    }
    case MonadTag::Writer: {
      const auto* s = std::get_if<WriterState>(&ts.v);
      if (!s) throw InvariantViolation("payload is not a writer state");
      for (auto o : s->emitted)
        if (o >= m.labels.size())
          throw InvariantViolation("output letter out of range");
      atom_ok(s->state);
      break;
    }
    case MonadTag::Distribution: {
      const auto* s = std::get_if<DistState>(&ts.v);
      if (!s) throw InvariantViolation("payload is not a distribution");
      Rational sum = 0;
      StateId prev = 0;
      bool first = true;
      for (auto& [x, p] : s->weights) {
        atom_ok(x);
        if (!first && prev >= x)
          throw InvariantViolation("distribution not in canonical order");
        if (p <= 0) throw InvariantViolation("distribution weight not positive");
        sum += p;
        prev = x;
        first = false;
      }
      if (sum != 1)
        throw InvariantViolation("distribution weights must sum to 1");
      break;
    }
    case MonadTag::StackState: {
      const auto* s = std::get_if<StackTable>(&ts.v);
      if (!s) throw InvariantViolation("payload is not a stack table");
      for (const auto& rule : s->rules) {
        atom_ok(rule.state);
        for (auto b : rule.pattern)
          if (b >= m.labels.size())
            throw InvariantViolation("stack symbol out of range");
        for (auto b : rule.replacement)
          if (b >= m.labels.size())
            throw InvariantViolation("stack symbol out of range");
      }
      break;
    }
  }
}

// ---------------------------------------------------------------------------
// unit: X -> T(X).

inline TState unit(const MonadKind& m, StateId x) {
  switch (m.tag) {
    case MonadTag::Powerset:
      return {PsetState{{x}}};
    case MonadTag::Partiality:
      return {PartialState{x}};
    case MonadTag::Exception:
      return {ExcState{false, x}};
    case MonadTag::SideEffect: {
      EffState e;
      for (std::uint32_t s = 0; s < m.labels.size(); ++s)
        e.table.emplace_back(s, x);
      return {std::move(e)};
    }
    case MonadTag::Writer:
      return {WriterState{{}, x}};
    case MonadTag::Distribution:
      return {DistState{{{x, Rational(1)}}}};
    case MonadTag::StackState:
      return {StackTable{{StackRule{{}, x, {}}}}};
  }
  throw InvariantViolation("unknown monad");
}

// ---------------------------------------------------------------------------
// bind: T(X) x (X -> T(Y)) -> T(Y). This is Kleisli extension with the
// multiplication folded in; all determinization steps go through it.

template <class F>
TState bind(const MonadKind& m, const TState& ts, F&& f) {
  auto expect = [&]<class P>(const TState& t, P*) -> const P& {
    const P* p = std::get_if<P>(&t.v);
    if (!p) throw InvariantViolation("mixed monad payloads in bind");
    return *p;
  };
  switch (m.tag) {
    case MonadTag::Powerset: {
      const auto& s = expect(ts, (PsetState*)nullptr);
      PsetState out;
      for (StateId x : s.elems) {
        // decltype(auto) keeps a by-value f(x) alive past this statement.
        decltype(auto) fr = f(x);
        const auto& fx = expect(fr, (PsetState*)nullptr);
        out.elems.insert(out.elems.end(), fx.elems.begin(), fx.elems.end());
      }
      canonicalize(out);
      return {std::move(out)};
    }
    case MonadTag::Partiality: {
      const auto& s = expect(ts, (PartialState*)nullptr);
      if (!s.state) return ts;
      return {expect(f(*s.state), (PartialState*)nullptr)};
    }
    case MonadTag::Exception: {
      const auto& s = expect(ts, (ExcState*)nullptr);
      if (s.is_exception) return ts;
      return {expect(f(s.value), (ExcState*)nullptr)};
    }
    case MonadTag::SideEffect: {
      const auto& s = expect(ts, (EffState*)nullptr);
      EffState out;
      out.table.resize(s.table.size());
      for (std::uint32_t pre = 0; pre < s.table.size(); ++pre) {
        auto [mid, x] = s.table[pre];
        decltype(auto) fr = f(x);
        const auto& fx = expect(fr, (EffState*)nullptr);
        if (fx.table.size() != s.table.size())
          throw InvariantViolation("side-effect tables of different size");
        out.table[pre] = fx.table[mid];
      }
      return {std::move(out)};
    }
    case MonadTag::Writer: {
      const auto& s = expect(ts, (WriterState*)nullptr);
      decltype(auto) fr = f(s.state);
      const auto& fx = expect(fr, (WriterState*)nullptr);
      WriterState out;
      out.emitted = s.emitted;
      out.emitted.insert(out.emitted.end(), fx.emitted.begin(),
                         fx.emitted.end());
      out.state = fx.state;
      return {std::move(out)};
    }
    case MonadTag::Distribution: {
      const auto& s = expect(ts, (DistState*)nullptr);
      std::map<StateId, Rational> acc;
      for (auto& [x, p] : s.weights) {
        decltype(auto) fr = f(x);
        const auto& fx = expect(fr, (DistState*)nullptr);
        for (auto& [y, q] : fx.weights) acc[y] += p * q;
      }
      DistState out;
      for (auto& [y, q] : acc) out.weights.emplace_back(y, q);
      canonicalize(out);
      return {std::move(out)};
    }
    case MonadTag::StackState: {
      const auto& s = expect(ts, (StackTable*)nullptr);
      StackTable out;
      for (const auto& rule : s.rules) {
        decltype(auto) fr = f(rule.state);
        const auto& inner = expect(fr, (StackTable*)nullptr);
        for (const auto& ir : inner.rules) {
          if (is_prefix(ir.pattern, rule.replacement)) {
            // Inner clause consumes part of the pushed material.
            out.rules.push_back(
                {rule.pattern, ir.state,
                 concat(ir.replacement,
                        drop(rule.replacement, ir.pattern.size()))});
          } else if (is_proper_prefix(rule.replacement, ir.pattern)) {
            // Inner clause reaches below: the pattern grows.
            out.rules.push_back(
                {concat(rule.pattern, drop(ir.pattern, rule.replacement.size())),
                 ir.state, ir.replacement});
          }
        }
      }
      canonicalize(out);
      return {std::move(out)};
    }
  }
  throw InvariantViolation("unknown monad");
}

// Atom renaming as a special case of bind.
template <class F>
TState map_atoms(const MonadKind& m, const TState& ts, F&& f) {
  return bind(m, ts, [&](StateId x) { return unit(m, f(x)); });
}

// ---------------------------------------------------------------------------
// Output algebra: collapse a T-structured collection of output values into a
// single output value. `fo` maps each atom to its output; `shape` supplies
// the neutral element when the structure is empty (or the added sink).

namespace detail {

template <class T>
const T& expect_out(const OutputValue& o) {
  const T* p = std::get_if<T>(&o.v);
  if (!p) throw InvariantViolation("mixed output carriers");
  return *p;
}

inline OutputValue neutral_output(const OutputValue& shape) {
  if (std::holds_alternative<BoolOut>(shape.v)) return {BoolOut{false}};
  if (std::holds_alternative<FamilyOut>(shape.v)) return {FamilyOut{}};
  if (std::holds_alternative<StackPredicate>(shape.v))
    return {StackPredicate{}};
  throw InvariantViolation("output carrier has no neutral element");
}

inline void merge_into(OutputValue& acc, const OutputValue& o) {
  if (auto* b = std::get_if<BoolOut>(&acc.v)) {
    b->value = b->value || expect_out<BoolOut>(o).value;
    return;
  }
  if (auto* f = std::get_if<FamilyOut>(&acc.v)) {
    const auto& g = expect_out<FamilyOut>(o);
    f->sets.insert(f->sets.end(), g.sets.begin(), g.sets.end());
    sort_unique(f->sets);
    return;
  }
  throw InvariantViolation("output carrier does not support joins");
}

}  // namespace detail

template <class F>
OutputValue combine_outputs(const MonadKind& m, const TState& ts, F&& fo,
                            const OutputValue& shape) {
  switch (m.tag) {
    case MonadTag::Powerset: {
      const auto& s = std::get<PsetState>(ts.v);
      OutputValue acc = detail::neutral_output(shape);
      for (StateId x : s.elems) detail::merge_into(acc, fo(x));
      return acc;
    }
    case MonadTag::Partiality: {
      const auto& s = std::get<PartialState>(ts.v);
      if (!s.state) return detail::neutral_output(shape);
      return fo(*s.state);
    }
    case MonadTag::Exception: {
      const auto& s = std::get<ExcState>(ts.v);
      if (s.is_exception) return {TaggedOut{true, s.value}};
      return fo(s.value);
    }
    case MonadTag::SideEffect: {
      const auto& s = std::get<EffState>(ts.v);
      EffectOut out;
      out.table.resize(s.table.size());
      for (std::uint32_t pre = 0; pre < s.table.size(); ++pre) {
        auto [mid, x] = s.table[pre];
        decltype(auto) fr = fo(x);
        const auto& ox = detail::expect_out<EffectOut>(fr);
        if (ox.table.size() != s.table.size())
          throw InvariantViolation("side-effect tables of different size");
        out.table[pre] = ox.table[mid];
      }
      return {std::move(out)};
    }
    case MonadTag::Writer: {
      const auto& s = std::get<WriterState>(ts.v);
      WriterOut out = detail::expect_out<WriterOut>(fo(s.state));
      out.emitted.insert(out.emitted.begin(), s.emitted.begin(),
                         s.emitted.end());
      return {std::move(out)};
    }
    case MonadTag::Distribution: {
      const auto& s = std::get<DistState>(ts.v);
      Rational sum = 0;
      for (auto& [x, p] : s.weights)
        sum += p * detail::expect_out<RationalOut>(fo(x)).value;
      return {RationalOut{sum}};
    }
    case MonadTag::StackState: {
      const auto& s = std::get<StackTable>(ts.v);
      StackPredicate out;
      for (const auto& rule : s.rules) {
        decltype(auto) fr = fo(rule.state);
        const auto& pr = detail::expect_out<StackPredicate>(fr);
        for (const auto& e : pr.exact)
          if (is_prefix(rule.replacement, e))
            out.exact.push_back(
                concat(rule.pattern, drop(e, rule.replacement.size())));
        for (const auto& f : pr.prefixes) {
          if (is_prefix(f, rule.replacement))
            out.prefixes.push_back(rule.pattern);
          else if (is_proper_prefix(rule.replacement, f))
            out.prefixes.push_back(
                concat(rule.pattern, drop(f, rule.replacement.size())));
        }
      }
      canonicalize(out, m.labels.size());
      return {std::move(out)};
    }
  }
  throw InvariantViolation("unknown monad");
}

// Same collapse with the outputs given as a table indexed by atom.
inline OutputValue algebra_combine(const MonadKind& m, const TState& ts,
                                   const std::vector<OutputValue>& outputs,
                                   const OutputValue& shape) {
  return combine_outputs(
      m, ts,
      [&](StateId x) -> const OutputValue& {
        if (x >= outputs.size())
          throw InvariantViolation("atom without an output value");
        return outputs[x];
      },
      shape);
}

// ---------------------------------------------------------------------------
// Kleisli composition of finite maps f: X -> T(Y), g: Y -> T(Z), both given
// as tables indexed by atom.

inline std::vector<TState> kleisli_compose(const MonadKind& m,
                                           const std::vector<TState>& f,
                                           const std::vector<TState>& g) {
  std::vector<TState> out;
  out.reserve(f.size());
  for (const auto& fx : f)
    out.push_back(bind(m, fx, [&](StateId y) -> const TState& {
      if (y >= g.size()) throw InvariantViolation("atom outside domain of g");
      return g[y];
    }));
  return out;
}

// ---------------------------------------------------------------------------
// Randomized law checking: the three Kleisli laws plus the two algebra
// axioms, on freshly drawn small instances. All comparisons are exact.

struct LawReport {
  int samples = 0;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

namespace detail {

class LawGen {
 public:
  LawGen(const MonadKind& m, std::uint64_t seed) : m_(m), rng_(seed) {}

  std::uint32_t pick(std::uint32_t n) {
    return std::uniform_int_distribution<std::uint32_t>(0, n - 1)(rng_);
  }

  TState random_tstate(std::uint32_t n_atoms) {
    switch (m_.tag) {
      case MonadTag::Powerset: {
        PsetState s;
        for (StateId x = 0; x < n_atoms; ++x)
          if (pick(2)) s.elems.push_back(x);
        return {std::move(s)};
      }
      case MonadTag::Partiality: {
        if (pick(4) == 0) return {PartialState{}};
        return {PartialState{pick(n_atoms)}};
      }
      case MonadTag::Exception: {
        if (pick(4) == 0)
          return {ExcState{true, pick(std::uint32_t(m_.labels.size()))}};
        return {ExcState{false, pick(n_atoms)}};
      }
      case MonadTag::SideEffect: {
        EffState s;
        for (std::uint32_t i = 0; i < m_.labels.size(); ++i)
          s.table.emplace_back(pick(std::uint32_t(m_.labels.size())),
                               pick(n_atoms));
        return {std::move(s)};
      }
      case MonadTag::Writer: {
        WriterState s;
        std::uint32_t len = pick(3);
        for (std::uint32_t i = 0; i < len; ++i)
          s.emitted.push_back(pick(std::uint32_t(m_.labels.size())));
        s.state = pick(n_atoms);
        return {std::move(s)};
      }
      case MonadTag::Distribution: {
        DistState s;
        std::uint32_t k = 1 + pick(std::min(n_atoms, 3u));
        std::vector<StateId> supp;
        while (supp.size() < k) {
          StateId x = pick(n_atoms);
          if (std::find(supp.begin(), supp.end(), x) == supp.end())
            supp.push_back(x);
        }
        std::vector<std::uint32_t> raw;
        std::uint32_t total = 0;
        for (std::uint32_t i = 0; i < k; ++i) {
          raw.push_back(1 + pick(4));
          total += raw.back();
        }
        for (std::uint32_t i = 0; i < k; ++i)
          s.weights.emplace_back(supp[i], Rational(raw[i], total));
        canonicalize(s);
        return {std::move(s)};
      }
      case MonadTag::StackState: {
        StackTable t;
        std::uint32_t n = pick(3);
        for (std::uint32_t i = 0; i < n; ++i) {
          StackRule r;
          r.pattern = random_stack(2);
          r.state = pick(n_atoms);
          r.replacement = random_stack(2);
          t.rules.push_back(std::move(r));
        }
        canonicalize(t);
        return {std::move(t)};
      }
    }
    throw InvariantViolation("unknown monad");
  }

  Stack random_stack(std::uint32_t max_len) {
    Stack s;
    std::uint32_t len = pick(max_len + 1);
    for (std::uint32_t i = 0; i < len; ++i)
      s.push_back(pick(std::uint32_t(m_.labels.size())));
    return s;
  }

  // An output value of the carrier natural for the monad.
  OutputValue random_output() {
    switch (m_.tag) {
      case MonadTag::Powerset:
      case MonadTag::Partiality:
        return {BoolOut{pick(2) == 1}};
      case MonadTag::Exception:
        return {TaggedOut{pick(4) == 0, pick(2)}};
      case MonadTag::SideEffect: {
        EffectOut o;
        for (std::uint32_t i = 0; i < m_.labels.size(); ++i)
          o.table.emplace_back(pick(std::uint32_t(m_.labels.size())), pick(2));
        return {std::move(o)};
      }
      case MonadTag::Writer: {
        WriterOut o;
        std::uint32_t len = pick(3);
        for (std::uint32_t i = 0; i < len; ++i)
          o.emitted.push_back(pick(std::uint32_t(m_.labels.size())));
        o.final_value = pick(2);
        return {std::move(o)};
      }
      case MonadTag::Distribution: {
        std::uint32_t den = 1 + pick(4);
        return {RationalOut{Rational(pick(den + 1), den)}};
      }
      case MonadTag::StackState: {
        StackPredicate p;
        std::uint32_t n = pick(3);
        for (std::uint32_t i = 0; i < n; ++i)
          p.exact.push_back(random_stack(2));
        std::uint32_t k = pick(2);
        for (std::uint32_t i = 0; i < k; ++i)
          p.prefixes.push_back(random_stack(2));
        canonicalize(p, m_.labels.size());
        return {std::move(p)};
      }
    }
    throw InvariantViolation("unknown monad");
  }

  OutputValue output_shape() {
    switch (m_.tag) {
      case MonadTag::Powerset:
      case MonadTag::Partiality:
        return {BoolOut{}};
      case MonadTag::Exception:
        return {TaggedOut{}};
      case MonadTag::SideEffect:
        return random_output();
      case MonadTag::Writer:
        return {WriterOut{}};
      case MonadTag::Distribution:
        return {RationalOut{Rational(0)}};
      case MonadTag::StackState:
        return {StackPredicate{}};
    }
    throw InvariantViolation("unknown monad");
  }

 private:
  MonadKind m_;
  std::mt19937_64 rng_;
};

}  // namespace detail

inline LawReport check_monad_laws(const MonadKind& m, int samples,
                                  std::uint64_t seed = 20260815u) {
  LawReport report;
  detail::LawGen gen(m, seed);
  constexpr std::uint32_t kAtoms = 4;
  for (int i = 0; i < samples; ++i) {
    report.samples++;
    std::vector<TState> f, g;
    for (std::uint32_t x = 0; x < kAtoms; ++x) {
      f.push_back(gen.random_tstate(kAtoms));
      g.push_back(gen.random_tstate(kAtoms));
    }
    TState c = gen.random_tstate(kAtoms);
    auto at = [](const std::vector<TState>& h) {
      return [&h](StateId x) -> const TState& { return h[x]; };
    };

    // Left identity: extending f over a unit gives f back.
    for (StateId x = 0; x < kAtoms; ++x)
      if (bind(m, unit(m, x), at(f)) != f[x]) {
        report.violations.push_back("left identity failed (sample " +
                                    std::to_string(i) + ")");
        break;
      }
    // Right identity: extending unit is the identity.
    if (bind(m, c, [&](StateId x) { return unit(m, x); }) != c)
      report.violations.push_back("right identity failed (sample " +
                                  std::to_string(i) + ")");
    // Associativity of Kleisli composition.
    TState lhs = bind(m, bind(m, c, at(f)), at(g));
    TState rhs = bind(m, c, [&](StateId x) { return bind(m, f[x], at(g)); });
    if (lhs != rhs)
      report.violations.push_back("associativity failed (sample " +
                                  std::to_string(i) + ")");

    // Algebra axioms for the output carrier.
    std::vector<OutputValue> outs;
    for (std::uint32_t x = 0; x < kAtoms; ++x) outs.push_back(gen.random_output());
    OutputValue shape = gen.output_shape();
    for (StateId x = 0; x < kAtoms; ++x)
      if (algebra_combine(m, unit(m, x), outs, shape) != outs[x]) {
        report.violations.push_back("algebra unit axiom failed (sample " +
                                    std::to_string(i) + ")");
        break;
      }
    // Flattening: collapsing a two-layer structure in either order agrees.
    std::vector<TState> inner;
    for (std::uint32_t k = 0; k < kAtoms; ++k)
      inner.push_back(gen.random_tstate(kAtoms));
    TState outer = gen.random_tstate(kAtoms);
    OutputValue lhs_o = algebra_combine(
        m, bind(m, outer, at(inner)), outs, shape);
    std::vector<OutputValue> collapsed;
    for (std::uint32_t k = 0; k < kAtoms; ++k)
      collapsed.push_back(algebra_combine(m, inner[k], outs, shape));
    OutputValue rhs_o = algebra_combine(m, outer, collapsed, shape);
    if (lhs_o != rhs_o)
      report.violations.push_back("algebra flattening axiom failed (sample " +
                                  std::to_string(i) + ")");
  }
  return report;
}

}  // namespace coalg
