#pragma once

// Shared fixtures, brute-force oracles and random machine generators for the
// test suites. The oracles deliberately avoid the library's T-state and
// determinization machinery: they enumerate runs, paths or derivations
// directly on the machine descriptions.

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "coalg/equivalence.hpp"
#include "coalg/io.hpp"
#include "coalg/machines.hpp"
#include "coalg/pda.hpp"
#include "coalg/traces.hpp"

namespace testutil {

inline std::string fixture_path(const std::string& name) {
  return std::string(FIXTURES_DIR) + "/" + name;
}

inline coalg::MachineFile load_fixture(const std::string& name) {
  return coalg::load_machine(fixture_path(name));
}

// All words over {0, ..., n_letters-1} of length at most max_len, in
// length-then-lexicographic order.
inline std::vector<coalg::Word> all_words(std::size_t n_letters,
                                          std::size_t max_len) {
  std::vector<coalg::Word> out{coalg::Word{}};
  std::size_t level_begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::size_t level_end = out.size();
    for (std::size_t i = level_begin; i < level_end; ++i)
      for (coalg::Letter a = 0; a < n_letters; ++a) {
        coalg::Word w = out[i];
        w.push_back(a);
        out.push_back(std::move(w));
      }
    level_begin = level_end;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Nondeterministic automata: acceptance by enumerating individual runs.

inline bool nda_run_accepts(const coalg::Nda& n, coalg::StateId x,
                            const coalg::Word& word, std::size_t pos = 0) {
  if (pos == word.size()) return n.accepting[x];
  for (coalg::StateId y : n.delta[x][word[pos]])
    if (nda_run_accepts(n, y, word, pos + 1)) return true;
  return false;
}

inline bool nda_set_accepts(const coalg::Nda& n,
                            const std::vector<coalg::StateId>& xs,
                            const coalg::Word& word) {
  for (coalg::StateId x : xs)
    if (nda_run_accepts(n, x, word)) return true;
  return false;
}

// Classical product construction on plain sets: breadth-first search over
// pairs of subsets, reporting the first word where acceptance differs.
inline std::optional<coalg::Word> product_dfa_counterexample(
    const coalg::Nda& n, const std::set<coalg::StateId>& x0,
    const std::set<coalg::StateId>& y0) {
  using Subset = std::set<coalg::StateId>;
  auto accepts = [&](const Subset& s) {
    for (coalg::StateId x : s)
      if (n.accepting[x]) return true;
    return false;
  };
  auto post = [&](const Subset& s, coalg::Letter a) {
    Subset t;
    for (coalg::StateId x : s)
      t.insert(n.delta[x][a].begin(), n.delta[x][a].end());
    return t;
  };
  std::set<std::pair<Subset, Subset>> seen;
  std::vector<std::pair<std::pair<Subset, Subset>, coalg::Word>> queue{
      {{x0, y0}, {}}};
  seen.insert(queue.front().first);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    auto [pair, w] = queue[head];
    if (accepts(pair.first) != accepts(pair.second)) return w;
    for (coalg::Letter a = 0; a < n.letters.size(); ++a) {
      std::pair<Subset, Subset> next{post(pair.first, a),
                                     post(pair.second, a)};
      if (!seen.insert(next).second) continue;
      coalg::Word wa = w;
      wa.push_back(a);
      queue.emplace_back(std::move(next), std::move(wa));
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Probabilistic machines: acceptance weight as a sum over individual paths.

inline coalg::Rational prob_path_sum(const coalg::MooreVariant& m,
                                     coalg::StateId x, const coalg::Word& word,
                                     std::size_t pos = 0) {
  if (pos == word.size())
    return std::get<coalg::RationalOut>(m.outputs[x].v).value;
  const auto& d = std::get<coalg::DistState>(m.trans[x][word[pos]].v);
  coalg::Rational sum = 0;
  for (const auto& [y, p] : d.weights)
    sum += p * prob_path_sum(m, y, word, pos + 1);
  return sum;
}

// ---------------------------------------------------------------------------
// Greibach grammars: membership by enumerating leftmost derivations. The
// sentential form is the stack of variables still to be rewritten.

inline bool gnf_derives(const coalg::Grammar& g,
                        const std::vector<std::uint32_t>& vars,
                        const coalg::Word& word, std::size_t pos = 0) {
  if (vars.size() > word.size() - pos) return false;
  if (pos == word.size()) return vars.empty();
  if (vars.empty()) return false;
  for (const auto& prod : g.productions) {
    if (prod.lhs != vars.front()) continue;
    if (!(prod.rhs.front().is_terminal &&
          prod.rhs.front().index == word[pos]))
      continue;
    std::vector<std::uint32_t> next;
    for (std::size_t i = 1; i < prod.rhs.size(); ++i)
      next.push_back(prod.rhs[i].index);
    next.insert(next.end(), vars.begin() + 1, vars.end());
    if (gnf_derives(g, next, word, pos + 1)) return true;
  }
  return false;
}

inline bool grammar_generates(const coalg::Grammar& g,
                              const coalg::Word& word) {
  return gnf_derives(g, {g.start}, word);
}

// ---------------------------------------------------------------------------
// Transition systems: observations collected over all paths up to a depth.

struct PathObservations {
  std::set<coalg::Word> traces;
  std::set<coalg::Word> complete_traces;
  std::set<std::pair<coalg::Word, std::vector<coalg::Letter>>> failure_pairs;
  std::set<std::pair<coalg::Word, std::vector<coalg::Letter>>> ready_pairs;

  bool operator==(const PathObservations&) const = default;
};

inline void collect_paths(const coalg::Lts& l, coalg::StateId x,
                          coalg::Word& cur, std::size_t depth,
                          PathObservations& obs) {
  std::vector<coalg::Letter> enabled = coalg::enabled_letters(l, x);
  obs.traces.insert(cur);
  if (enabled.empty()) obs.complete_traces.insert(cur);
  obs.ready_pairs.emplace(cur, enabled);
  for (const auto& z : coalg::fail_sets(l, x)) obs.failure_pairs.emplace(cur, z);
  if (cur.size() == depth) return;
  for (coalg::Letter a : enabled)
    for (coalg::StateId y : l.delta[x][a]) {
      cur.push_back(a);
      collect_paths(l, y, cur, depth, obs);
      cur.pop_back();
    }
}

inline PathObservations observe_paths(const coalg::Lts& l, coalg::StateId x,
                                      std::size_t depth) {
  PathObservations obs;
  coalg::Word cur;
  collect_paths(l, x, cur, depth, obs);
  return obs;
}

// ---------------------------------------------------------------------------
// Random machine generators.

struct Rng {
  std::mt19937_64 eng;

  explicit Rng(std::uint64_t seed) : eng(seed) {}

  std::uint32_t pick(std::uint32_t n) {
    return std::uniform_int_distribution<std::uint32_t>(0, n - 1)(eng);
  }

  bool coin() { return pick(2) == 1; }
};

inline std::vector<std::string> numbered_names(const std::string& prefix,
                                               std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(prefix + std::to_string(i));
  return out;
}

inline coalg::Nda random_nda(Rng& rng, std::uint32_t max_states = 6,
                             std::uint32_t max_letters = 3) {
  coalg::Nda n;
  std::uint32_t ns = 1 + rng.pick(max_states);
  std::uint32_t nl = 1 + rng.pick(max_letters);
  n.states = numbered_names("q", ns);
  n.letters = numbered_names("a", nl);
  for (std::uint32_t x = 0; x < ns; ++x) {
    n.accepting.push_back(rng.coin());
    std::vector<std::vector<coalg::StateId>> row(nl);
    for (std::uint32_t a = 0; a < nl; ++a) {
      for (std::uint32_t y = 0; y < ns; ++y)
        if (rng.pick(3) == 0) row[a].push_back(y);
    }
    n.delta.push_back(std::move(row));
  }
  return n;
}

inline coalg::PartialAutomaton random_pa(Rng& rng,
                                         std::uint32_t max_states = 6,
                                         std::uint32_t max_letters = 3) {
  coalg::PartialAutomaton p;
  std::uint32_t ns = 1 + rng.pick(max_states);
  std::uint32_t nl = 1 + rng.pick(max_letters);
  p.states = numbered_names("q", ns);
  p.letters = numbered_names("a", nl);
  for (std::uint32_t x = 0; x < ns; ++x) {
    p.accepting.push_back(rng.coin());
    std::vector<std::optional<coalg::StateId>> row(nl);
    for (std::uint32_t a = 0; a < nl; ++a)
      if (rng.pick(4) != 0) row[a] = rng.pick(ns);
    p.delta.push_back(std::move(row));
  }
  return p;
}

// Probabilistic machine with exact rational rows summing to 1.
inline coalg::MooreVariant random_prob(Rng& rng, std::uint32_t max_states = 4,
                                       std::uint32_t max_letters = 2) {
  coalg::MooreVariant m;
  m.kind = coalg::MooreKind::Probabilistic;
  std::uint32_t ns = 1 + rng.pick(max_states);
  std::uint32_t nl = 1 + rng.pick(max_letters);
  m.states = numbered_names("q", ns);
  m.letters = numbered_names("a", nl);
  for (std::uint32_t x = 0; x < ns; ++x) {
    std::uint32_t den = 1 + rng.pick(4);
    m.outputs.push_back(
        {coalg::RationalOut{coalg::Rational(rng.pick(den + 1), den)}});
    std::vector<coalg::TState> row;
    for (std::uint32_t a = 0; a < nl; ++a) {
      std::uint32_t k = 1 + rng.pick(std::min(ns, 3u));
      std::vector<coalg::StateId> supp;
      while (supp.size() < k) {
        coalg::StateId y = rng.pick(ns);
        if (std::find(supp.begin(), supp.end(), y) == supp.end())
          supp.push_back(y);
      }
      std::vector<std::uint32_t> raw;
      std::uint32_t total = 0;
      for (std::uint32_t i = 0; i < k; ++i) {
        raw.push_back(1 + rng.pick(4));
        total += raw.back();
      }
      coalg::DistState d;
      for (std::uint32_t i = 0; i < k; ++i)
        d.weights.emplace_back(supp[i], coalg::Rational(raw[i], total));
      coalg::canonicalize(d);
      row.push_back({std::move(d)});
    }
    m.trans.push_back(std::move(row));
  }
  return m;
}

// Random grammar with every production already in Greibach form.
inline coalg::Grammar random_gnf(Rng& rng, std::uint32_t max_vars = 3,
                                 std::uint32_t max_prods = 6,
                                 std::uint32_t n_terminals = 2) {
  coalg::Grammar g;
  std::uint32_t nv = 1 + rng.pick(max_vars);
  g.terminals = numbered_names("a", n_terminals);
  g.variables = numbered_names("V", nv);
  g.start = 0;
  std::uint32_t np = 1 + rng.pick(max_prods);
  for (std::uint32_t i = 0; i < np; ++i) {
    coalg::Production p;
    p.lhs = rng.pick(nv);
    p.rhs.push_back({true, rng.pick(n_terminals)});
    std::uint32_t tail = rng.pick(3);
    for (std::uint32_t j = 0; j < tail; ++j)
      p.rhs.push_back({false, rng.pick(nv)});
    g.productions.push_back(std::move(p));
  }
  return g;
}

inline coalg::Lts random_lts(Rng& rng, std::uint32_t max_states = 6,
                             std::uint32_t max_letters = 3) {
  coalg::Lts l;
  std::uint32_t ns = 1 + rng.pick(max_states);
  std::uint32_t nl = 1 + rng.pick(max_letters);
  l.state_names = numbered_names("p", ns);
  l.letter_names = numbered_names("a", nl);
  for (std::uint32_t x = 0; x < ns; ++x) {
    std::vector<std::vector<coalg::StateId>> row(nl);
    for (std::uint32_t a = 0; a < nl; ++a)
      for (std::uint32_t y = 0; y < ns; ++y)
        if (rng.pick(3) == 0) row[a].push_back(y);
    l.delta.push_back(std::move(row));
  }
  return l;
}

// Convenience builders for hand-written machines.

inline coalg::Word make_word(std::initializer_list<coalg::Letter> ls) {
  return coalg::Word(ls);
}

}  // namespace testutil
