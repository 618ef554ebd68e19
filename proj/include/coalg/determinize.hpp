#pragma once

#include <deque>
#include <map>
#include <vector>

#include "coalgebra.hpp"

namespace coalg {

inline constexpr std::uint64_t kDefaultCap = 100000;

// Memoized fragment of the determinized machine, closed under transitions
// unless built depth-bounded.
struct DetMachine {
  FTCoalgebra base;
  std::vector<TState> roots;
  std::uint64_t cap = kDefaultCap;
  std::map<TState, ExtendResult> memo;

  bool operator==(const DetMachine& o) const {
    return roots == o.roots && memo == o.memo;
  }
};

// Breadth-first closure of the roots under extension. Throws
// CapExceededError carrying the count at which the cap was crossed.
inline DetMachine determinize(const FTCoalgebra& c, std::vector<TState> roots,
                              std::uint64_t cap = kDefaultCap) {
  DetMachine d;
  d.base = c;
  d.roots = roots;
  d.cap = cap;
  std::deque<TState> frontier;
  for (auto& r : roots) {
    validate_tstate(c.monad, c.n_states(), r);
    if (d.memo.count(r)) continue;
    if (d.memo.size() + 1 > cap) throw CapExceededError(d.memo.size() + 1);
    d.memo.emplace(r, ExtendResult{});
    frontier.push_back(r);
  }
  while (!frontier.empty()) {
    TState ts = frontier.front();
    frontier.pop_front();
    ExtendResult e = extend(c, ts);
    for (const auto& nxt : e.next) {
      if (d.memo.count(nxt)) continue;
      if (d.memo.size() + 1 > cap) throw CapExceededError(d.memo.size() + 1);
      d.memo.emplace(nxt, ExtendResult{});
      frontier.push_back(nxt);
    }
    d.memo[ts] = std::move(e);
  }
  return d;
}

// Same exploration cut off after `depth` transition steps from the roots.
// T-states on the rim keep their outputs and successors in the memo, but
// unseen successors are not expanded further.
inline DetMachine determinize_to_depth(const FTCoalgebra& c,
                                       std::vector<TState> roots,
                                       std::size_t depth,
                                       std::uint64_t cap = kDefaultCap) {
  DetMachine d;
  d.base = c;
  d.roots = roots;
  d.cap = cap;
  std::deque<std::pair<TState, std::size_t>> frontier;
  auto admit = [&](const TState& ts, std::size_t lvl) {
    if (d.memo.count(ts)) return;
    if (d.memo.size() + 1 > cap) throw CapExceededError(d.memo.size() + 1);
    d.memo.emplace(ts, ExtendResult{});
    frontier.emplace_back(ts, lvl);
  };
  for (auto& r : roots) {
    validate_tstate(c.monad, c.n_states(), r);
    admit(r, 0);
  }
  while (!frontier.empty()) {
    auto [ts, lvl] = frontier.front();
    frontier.pop_front();
    ExtendResult e = extend(c, ts);
    if (lvl < depth)
      for (const auto& nxt : e.next) admit(nxt, lvl + 1);
    d.memo[ts] = std::move(e);
  }
  return d;
}

// Table of the final-semantics values of `start` at every word of length at
// most `depth`.
struct BehaviourTable {
  std::size_t depth = 0;
  std::vector<std::string> letter_names;
  std::map<Word, OutputValue> entries;

  bool operator==(const BehaviourTable&) const = default;
};

inline BehaviourTable behaviour_table(const FTCoalgebra& c, const TState& start,
                                      std::size_t depth) {
  BehaviourTable t;
  t.depth = depth;
  t.letter_names = c.letter_names;
  std::map<TState, ExtendResult> cache;
  auto step = [&](const TState& ts) -> const ExtendResult& {
    auto it = cache.find(ts);
    if (it == cache.end()) it = cache.emplace(ts, extend(c, ts)).first;
    return it->second;
  };
  std::vector<std::pair<Word, TState>> level{{Word{}, start}};
  for (std::size_t len = 0; len <= depth; ++len) {
    std::vector<std::pair<Word, TState>> next;
    for (auto& [w, ts] : level) {
      const ExtendResult& e = step(ts);
      t.entries.emplace(w, e.out);
      if (len == depth) continue;
      for (Letter a = 0; a < c.n_letters(); ++a) {
        Word wa = w;
        wa.push_back(a);
        next.emplace_back(std::move(wa), e.next[a]);
      }
    }
    level = std::move(next);
  }
  return t;
}

}  // namespace coalg
