#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <vector>

#include "determinize.hpp"

namespace coalg {

struct EquivResult {
  enum class Kind { Equivalent, Distinguished, DepthBounded };
  Kind kind = Kind::Equivalent;
  Word witness;           // set for Distinguished
  std::size_t depth = 0;  // set for DepthBounded

  bool operator==(const EquivResult&) const = default;
};

inline EquivResult equivalent_result() { return {}; }
inline EquivResult distinguished_result(Word w) {
  return {EquivResult::Kind::Distinguished, std::move(w), 0};
}
inline EquivResult depth_bounded_result(std::size_t depth) {
  return {EquivResult::Kind::DepthBounded, {}, depth};
}

namespace detail {

inline std::vector<StateId> tstate_atoms(const TState& ts) {
  std::vector<StateId> out;
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, PsetState>) {
          out = s.elems;
        } else if constexpr (std::is_same_v<S, PartialState>) {
          if (s.state) out.push_back(*s.state);
        } else if constexpr (std::is_same_v<S, ExcState>) {
          if (!s.is_exception) out.push_back(s.value);
        } else if constexpr (std::is_same_v<S, EffState>) {
          for (auto& [s2, x] : s.table) out.push_back(x);
        } else if constexpr (std::is_same_v<S, WriterState>) {
          out.push_back(s.state);
        } else if constexpr (std::is_same_v<S, DistState>) {
          for (auto& [x, p] : s.weights) out.push_back(x);
        } else {
          for (auto& r : s.rules) out.push_back(r.state);
        }
      },
      ts.v);
  sort_unique(out);
  return out;
}

// Partition refinement rounds. hist[k][state] is the block of the state
// after k rounds; round 0 groups by output value, each later round by the
// per-letter T-successors with atoms rewritten to previous-round blocks.
// The last entry is the stable partition (coarsest bisimulation).
inline std::vector<std::vector<int>> refinement_history(const FTCoalgebra& c) {
  std::size_t n = c.n_states();
  std::vector<int> blk(n, 0);
  {
    std::map<OutputValue, int> ids;
    for (StateId x = 0; x < n; ++x)
      blk[x] = ids.emplace(c.output[x], int(ids.size())).first->second;
  }
  std::vector<std::vector<int>> hist{blk};
  while (true) {
    std::map<std::pair<int, std::vector<TState>>, int> ids;
    std::vector<int> next(n, 0);
    for (StateId x = 0; x < n; ++x) {
      std::vector<TState> sig;
      sig.reserve(c.n_letters());
      for (Letter a = 0; a < c.n_letters(); ++a)
        sig.push_back(map_atoms(c.monad, c.step[x][a],
                                [&](StateId y) { return StateId(blk[y]); }));
      next[x] =
          ids.emplace(std::pair(blk[x], std::move(sig)), int(ids.size()))
              .first->second;
    }
    bool stable = true;
    for (StateId x = 0; x < n && stable; ++x)
      for (StateId y = x + 1; y < n && stable; ++y)
        if ((blk[x] == blk[y]) != (next[x] == next[y])) stable = false;
    if (stable) break;
    blk = next;
    hist.push_back(blk);
  }
  return hist;
}

// A letter path leading from the split that separated x and y down to a
// directly observable difference (an output mismatch or a structural
// mismatch of the T-successors).
inline Word bisim_witness(const FTCoalgebra& c,
                          const std::vector<std::vector<int>>& hist, StateId x,
                          StateId y) {
  auto first_split = [&](StateId u, StateId v) -> std::size_t {
    for (std::size_t k = 0; k < hist.size(); ++k)
      if (hist[k][u] != hist[k][v]) return k;
    throw InvariantViolation("states are not separated");
  };
  Word w;
  std::size_t k = first_split(x, y);
  while (k > 0) {
    const auto& blk = hist[k - 1];
    auto rewrite = [&](const TState& ts) {
      return map_atoms(c.monad, ts, [&](StateId z) { return StateId(blk[z]); });
    };
    Letter split_letter = 0;
    bool found = false;
    for (Letter a = 0; a < c.n_letters() && !found; ++a)
      if (rewrite(c.step[x][a]) != rewrite(c.step[y][a])) {
        split_letter = a;
        found = true;
      }
    if (!found) throw InvariantViolation("refinement split without a letter");
    w.push_back(split_letter);
    // Descend into a pair of atoms in different blocks when one exists;
    // otherwise the mismatch is structural and visible after this letter.
    auto ax = tstate_atoms(c.step[x][split_letter]);
    auto ay = tstate_atoms(c.step[y][split_letter]);
    std::vector<int> bx, by;
    for (auto u : ax) bx.push_back(blk[u]);
    for (auto v : ay) by.push_back(blk[v]);
    sort_unique(bx);
    sort_unique(by);
    StateId u = 0, v = 0;
    bool have_pair = false;
    for (auto uu : ax)
      if (!std::binary_search(by.begin(), by.end(), blk[uu]) && !ay.empty()) {
        u = uu;
        v = ay.front();
        have_pair = true;
        break;
      }
    if (!have_pair)
      for (auto vv : ay)
        if (!std::binary_search(bx.begin(), bx.end(), blk[vv]) && !ax.empty()) {
          u = ax.front();
          v = vv;
          have_pair = true;
          break;
        }
    if (!have_pair) break;
    x = u;
    y = v;
    k = first_split(x, y);
  }
  return w;
}

}  // namespace detail

// Behavioural equivalence of the machine itself: are x and y identified by
// the coarsest partition stable under outputs and T-successors?
inline EquivResult ft_bisimilar(const FTCoalgebra& c, StateId x, StateId y) {
  if (x >= c.n_states() || y >= c.n_states())
    throw UnknownStateError("state id out of range");
  auto hist = detail::refinement_history(c);
  if (hist.back()[x] == hist.back()[y]) return equivalent_result();
  return distinguished_result(detail::bisim_witness(c, hist, x, y));
}

// Equivalence after determinization: compare the unfoldings of two T-states
// word by word, merging pairs with a union-find. For finitary monads this
// terminates on its own; otherwise exploration stops at depth_cap and the
// verdict degrades to DepthBounded when nothing was found.
inline EquivResult absorbed_equivalent(const FTCoalgebra& c, const TState& x,
                                       const TState& y,
                                       std::size_t depth_cap = 1000) {
  bool bounded = !finitary(c.monad.tag);
  std::map<TState, std::size_t> index;
  std::vector<ExtendResult> ext;
  std::vector<std::size_t> parent;
  auto intern = [&](const TState& ts) {
    auto it = index.find(ts);
    if (it != index.end()) return it->second;
    std::size_t i = parent.size();
    index.emplace(ts, i);
    parent.push_back(i);
    ext.push_back(extend(c, ts));
    return i;
  };
  std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };
  std::deque<std::tuple<std::size_t, std::size_t, Word>> queue;
  queue.emplace_back(intern(x), intern(y), Word{});
  bool capped = false;
  while (!queue.empty()) {
    auto [i, j, w] = queue.front();
    queue.pop_front();
    std::size_t ri = find(i), rj = find(j);
    if (ri == rj) continue;
    if (ext[i].out != ext[j].out) return distinguished_result(w);
    parent[ri] = rj;
    if (bounded && w.size() >= depth_cap) {
      capped = true;
      continue;
    }
    for (Letter a = 0; a < c.n_letters(); ++a) {
      Word wa = w;
      wa.push_back(a);
      queue.emplace_back(intern(ext[i].next[a]), intern(ext[j].next[a]),
                         std::move(wa));
    }
  }
  return capped ? depth_bounded_result(depth_cap) : equivalent_result();
}

inline EquivResult absorbed_equivalent(const FTCoalgebra& c, StateId x,
                                       StateId y,
                                       std::size_t depth_cap = 1000) {
  if (x >= c.n_states() || y >= c.n_states())
    throw UnknownStateError("state id out of range");
  return absorbed_equivalent(c, unit(c.monad, x), unit(c.monad, y), depth_cap);
}

// Every pair identified by the machine's bisimilarity must also be equal
// after determinization (the absorbing direction of the inclusion).
struct Theorem1Report {
  std::size_t pairs_checked = 0;
  std::vector<std::pair<StateId, StateId>> violations;

  bool ok() const { return violations.empty(); }
};

inline Theorem1Report theorem1_check(const FTCoalgebra& c,
                                     std::size_t max_pairs = std::size_t(-1)) {
  if (!finitary(c.monad.tag))
    throw InvariantViolation(
        "inclusion check needs a monad with finite closures");
  Theorem1Report rep;
  auto hist = detail::refinement_history(c);
  const auto& blk = hist.back();
  for (StateId x = 0; x < c.n_states(); ++x)
    for (StateId y = x + 1; y < c.n_states(); ++y) {
      if (blk[x] != blk[y]) continue;
      if (rep.pairs_checked >= max_pairs) return rep;
      rep.pairs_checked++;
      EquivResult r =
          absorbed_equivalent(c, unit(c.monad, x), unit(c.monad, y));
      if (r.kind != EquivResult::Kind::Equivalent)
        rep.violations.emplace_back(x, y);
    }
  return rep;
}

}  // namespace coalg
