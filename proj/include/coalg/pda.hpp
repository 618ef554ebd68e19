#pragma once

#include <string>
#include <tuple>
#include <vector>

#include "determinize.hpp"

namespace coalg {

// ---------------------------------------------------------------------------
// Realtime pushdown automaton: every rule reads one input letter and pops
// exactly one stack symbol, so a word of length n is processed in exactly n
// rounds and empty-stack configurations are stuck.

enum class AcceptModeKind {
  AcceptingStates,            // control state in F, any stack
  EmptyStack,                 // any control state, empty stack
  AcceptingStatesEmptyStack,  // control state in F and empty stack
  TopSymbols,                 // nonempty stack whose top symbol is listed
};

struct AcceptMode {
  AcceptModeKind kind = AcceptModeKind::EmptyStack;
  std::vector<std::uint32_t> set;  // states F, or stack symbols

  bool operator==(const AcceptMode&) const = default;
};

struct PdaRule {
  StateId state = 0;
  Letter letter = 0;
  StackSym top = 0;
  StateId next = 0;
  Stack push;  // replacement for the popped symbol, topmost first

  bool operator==(const PdaRule&) const = default;
  bool operator<(const PdaRule& o) const {
    return std::tie(state, letter, top, next, push) <
           std::tie(o.state, o.letter, o.top, o.next, o.push);
  }
};

struct Pda {
  std::vector<std::string> control;
  std::vector<std::string> input;
  std::vector<std::string> stack_syms;
  std::vector<PdaRule> rules;
  AcceptMode accept;
  StateId init_state = 0;
  Stack init_stack;

  bool operator==(const Pda&) const = default;
};

struct Configuration {
  StateId state = 0;
  Stack stack;  // topmost first

  bool operator==(const Configuration&) const = default;
  bool operator<(const Configuration& o) const {
    return std::tie(state, stack) < std::tie(o.state, o.stack);
  }
};

inline bool config_accepting(const Pda& p, const Configuration& c) {
  auto in_set = [&](std::uint32_t x) {
    return std::find(p.accept.set.begin(), p.accept.set.end(), x) !=
           p.accept.set.end();
  };
  switch (p.accept.kind) {
    case AcceptModeKind::AcceptingStates:
      return in_set(c.state);
    case AcceptModeKind::EmptyStack:
      return c.stack.empty();
    case AcceptModeKind::AcceptingStatesEmptyStack:
      return in_set(c.state) && c.stack.empty();
    case AcceptModeKind::TopSymbols:
      return !c.stack.empty() && in_set(c.stack.front());
  }
  return false;
}

// Successor configurations on one input letter; empty when the stack is
// empty (nothing to pop).
inline std::vector<Configuration> pda_step(const Pda& p, const Configuration& c,
                                           Letter a) {
  std::vector<Configuration> out;
  if (c.stack.empty()) return out;
  for (const auto& r : p.rules) {
    if (r.state != c.state || r.letter != a || r.top != c.stack.front())
      continue;
    Configuration n;
    n.state = r.next;
    n.stack = concat(r.push, drop(c.stack, 1));
    out.push_back(std::move(n));
  }
  sort_unique(out);
  return out;
}

// Words are consumed in exactly |w| rounds of pda_step.
inline bool pda_semantics(const Pda& p, StateId q, const Word& w,
                          const Stack& beta) {
  std::vector<Configuration> frontier{{q, beta}};
  for (Letter a : w) {
    std::vector<Configuration> next;
    for (const auto& c : frontier) {
      auto succ = pda_step(p, c, a);
      next.insert(next.end(), succ.begin(), succ.end());
    }
    sort_unique(next);
    frontier = std::move(next);
    if (frontier.empty()) return false;
  }
  for (const auto& c : frontier)
    if (config_accepting(p, c)) return true;
  return false;
}

inline bool pda_accepts(const Pda& p, const Word& w) {
  return pda_semantics(p, p.init_state, w, p.init_stack);
}

// ---------------------------------------------------------------------------
// Context-free grammars in Greibach normal form.

struct GrammarSym {
  bool is_terminal = false;
  std::uint32_t index = 0;

  bool operator==(const GrammarSym&) const = default;
};

struct Production {
  std::uint32_t lhs = 0;          // variable index
  std::vector<GrammarSym> rhs;    // expected: one terminal then variables

  bool operator==(const Production&) const = default;
};

struct Grammar {
  std::vector<std::string> terminals;
  std::vector<std::string> variables;
  std::uint32_t start = 0;
  std::vector<Production> productions;

  bool operator==(const Grammar&) const = default;
};

// Single-control-state PDA over the grammar's variables as stack symbols:
// a production v -> a w becomes the rule (*, a, v, *, w), acceptance is by
// empty stack from the start variable.
inline Pda grammar_to_pda(const Grammar& g) {
  Pda p;
  p.control = {"*"};
  p.input = g.terminals;
  p.stack_syms = g.variables;
  for (const auto& prod : g.productions) {
    if (prod.rhs.empty() || !prod.rhs[0].is_terminal)
      throw NotGreibachError(
          "production does not start with a terminal symbol");
    PdaRule r;
    r.state = 0;
    r.letter = prod.rhs[0].index;
    r.top = prod.lhs;
    r.next = 0;
    for (std::size_t i = 1; i < prod.rhs.size(); ++i) {
      if (prod.rhs[i].is_terminal)
        throw NotGreibachError("terminal symbol after the first position");
      r.push.push_back(prod.rhs[i].index);
    }
    p.rules.push_back(std::move(r));
  }
  p.accept = {AcceptModeKind::EmptyStack, {}};
  p.init_state = 0;
  p.init_stack = {g.start};
  return p;
}

// ---------------------------------------------------------------------------
// The stack-indexed coalgebra of a PDA: control states as atoms, rewrite
// tables as T-states, stack predicates as outputs.

inline OutputValue pda_output(const Pda& p, StateId q) {
  StackPredicate out;
  switch (p.accept.kind) {
    case AcceptModeKind::AcceptingStates: {
      auto in = std::find(p.accept.set.begin(), p.accept.set.end(), q);
      if (in != p.accept.set.end()) out.prefixes.push_back({});
      break;
    }
    case AcceptModeKind::EmptyStack:
      out.exact.push_back({});
      break;
    case AcceptModeKind::AcceptingStatesEmptyStack: {
      auto in = std::find(p.accept.set.begin(), p.accept.set.end(), q);
      if (in != p.accept.set.end()) out.exact.push_back({});
      break;
    }
    case AcceptModeKind::TopSymbols:
      for (auto b : p.accept.set) out.prefixes.push_back({b});
      break;
  }
  canonicalize(out, p.stack_syms.size());
  return {std::move(out)};
}

inline FTCoalgebra pda_coalgebra(const Pda& p) {
  FTCoalgebra c;
  c.monad = stack_state_monad(p.stack_syms);
  c.state_names = p.control;
  c.letter_names = p.input;
  for (StateId q = 0; q < p.control.size(); ++q) {
    c.output.push_back(pda_output(p, q));
    std::vector<TState> row;
    for (Letter a = 0; a < p.input.size(); ++a) {
      StackTable t;
      for (const auto& r : p.rules)
        if (r.state == q && r.letter == a)
          t.rules.push_back({Stack{r.top}, r.next, r.push});
      canonicalize(t);
      row.push_back({std::move(t)});
    }
    c.step.push_back(std::move(row));
  }
  return c;
}

// Depth-bounded unfolding of the determinized machine, rooted at the unit of
// every control state (reproducing the machine's full first layers).
inline DetMachine pda_moore_states(const Pda& p, std::size_t depth,
                                   std::uint64_t cap = kDefaultCap) {
  FTCoalgebra c = pda_coalgebra(p);
  std::vector<TState> roots;
  for (StateId q = 0; q < p.control.size(); ++q)
    roots.push_back(unit(c.monad, q));
  return determinize_to_depth(c, std::move(roots), depth, cap);
}

// Denotation of a rewrite table at a concrete stack.
inline std::vector<Configuration> stack_table_at(const StackTable& t,
                                                 const Stack& beta) {
  std::vector<Configuration> out;
  for (const auto& r : t.rules)
    if (is_prefix(r.pattern, beta))
      out.push_back({r.state, concat(r.replacement, drop(beta, r.pattern.size()))});
  sort_unique(out);
  return out;
}

// Denotation of a stack predicate at a concrete stack.
inline bool stack_predicate_at(const StackPredicate& p, const Stack& beta) {
  for (const auto& e : p.exact)
    if (e == beta) return true;
  for (const auto& f : p.prefixes)
    if (is_prefix(f, beta)) return true;
  return false;
}

}  // namespace coalg
