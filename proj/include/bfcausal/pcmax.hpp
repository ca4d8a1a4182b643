#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "bfcausal/graph.hpp"
#include "bfcausal/lrt.hpp"
#include "bfcausal/orientation.hpp"

namespace bfcausal {

/// Separating sets recorded during skeleton pruning (pValue > alpha at
/// removal time) or max-p orientation.
class SepSetMap {
 public:
  void set(int x, int y, std::vector<int> s, double p) {
    std::sort(s.begin(), s.end());
    map_[key(x, y)] = {std::move(s), p};
  }

  bool contains(int x, int y) const { return map_.count(key(x, y)) > 0; }

  const std::vector<int>& sepset(int x, int y) const { return map_.at(key(x, y)).first; }
  double pValue(int x, int y) const { return map_.at(key(x, y)).second; }

  std::size_t size() const { return map_.size(); }

 private:
  static std::pair<int, int> key(int x, int y) { return {std::min(x, y), std::max(x, y)}; }
  std::map<std::pair<int, int>, std::pair<std::vector<int>, double>> map_;
};

namespace detail {

/// Visits every size-k combination of `pool` in lexicographic index order.
template <typename Fn>
void for_each_combination(const std::vector<int>& pool, int k, Fn&& fn) {
  const int n = static_cast<int>(pool.size());
  if (k > n) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  std::vector<int> subset(k);
  for (;;) {
    for (int i = 0; i < k; ++i) subset[i] = pool[idx[i]];
    if (fn(subset)) return;
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

inline std::vector<int> rank_sorted(std::vector<int> ids, const std::vector<int>& ranks) {
  std::sort(ids.begin(), ids.end(), [&ranks](int a, int b) { return ranks[a] < ranks[b]; });
  return ids;
}

}  // namespace detail

/// Depth-stratified skeleton pruning, generic over the conditional
/// independence test (signature TestResult(x, y, z)). Adjacency sets are
/// snapshotted per depth and removals committed at depth end, so the result
/// does not depend on edge processing order. Knowledge-required edges are
/// never removed.
template <typename Test>
std::pair<Graph, SepSetMap> pcmax_skeleton_with_test(const std::vector<Variable>& vars, Test&& test,
                                                     const Knowledge& know, int maxDepth) {
  if (maxDepth < 0) throw InvalidConfigError("maxDepth must be non-negative");
  const int n = static_cast<int>(vars.size());
  const std::vector<int> ranks = canonical_ranks(vars);
  Graph g(vars, GraphKind::Skeleton);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) g.addUndirected(a, b);
  SepSetMap seps;

  for (int depth = 0; depth <= maxDepth; ++depth) {
    // Snapshot adjacency sets for this depth.
    std::vector<std::vector<int>> adj(n);
    for (int v = 0; v < n; ++v) adj[v] = g.adjacent(v);

    bool anyTestable = false;
    std::vector<Edge> order = g.edges();
    std::sort(order.begin(), order.end(), [&ranks](const Edge& p, const Edge& q) {
      const auto ka = std::minmax(ranks[p.a], ranks[p.b]);
      const auto kb = std::minmax(ranks[q.a], ranks[q.b]);
      return ka < kb;
    });

    std::vector<std::pair<int, int>> removals;
    for (const Edge& edge : order) {
      int x = edge.a, y = edge.b;
      if (ranks[y] < ranks[x]) std::swap(x, y);
      if (know.isRequired(x, y) || know.isRequired(y, x)) continue;

      std::set<std::vector<int>> seen;
      bool removed = false;
      for (int side = 0; side < 2 && !removed; ++side) {
        const int from = side == 0 ? x : y;
        const int other = side == 0 ? y : x;
        std::vector<int> pool;
        for (int u : adj[from])
          if (u != other) pool.push_back(u);
        if (static_cast<int>(pool.size()) < depth) continue;
        anyTestable = true;
        pool = detail::rank_sorted(std::move(pool), ranks);
        detail::for_each_combination(pool, depth, [&](const std::vector<int>& s) {
          std::vector<int> sorted = s;
          std::sort(sorted.begin(), sorted.end());
          if (!seen.insert(sorted).second) return false;
          const TestResult r = test(x, y, sorted);
          if (r.independent) {
            removals.push_back({x, y});
            seps.set(x, y, sorted, r.pValue);
            removed = true;
            return true;
          }
          return false;
        });
      }
    }
    for (const auto& [x, y] : removals) g.removeEdge(x, y);
    if (!anyTestable && depth > 0) break;
  }
  return {std::move(g), std::move(seps)};
}

/// Max-p collider orientation over an undirected skeleton. For each
/// unshielded triple x-y-z the test is run over all subsets (up to maxDepth)
/// of either endpoint's neighbors; the subset with the highest p-value among
/// those exceeding alpha (or overall, if none does) decides: collider iff y
/// is outside it. Conflicts are resolved by p-value, ties by triple order;
/// a collider is skipped when an arrow it needs is already reversed or
/// knowledge-forbidden.
template <typename Test>
Graph orient_colliders_maxp_with_test(Graph g, Test&& test, double alpha, int maxDepth,
                                      const Knowledge& know = Knowledge()) {
  const int n = g.variableCount();
  const std::vector<int> ranks = canonical_ranks(g.variables());
  std::vector<int> byRank(n);
  for (int v = 0; v < n; ++v) byRank[ranks[v]] = v;

  struct Candidate {
    int x, y, z;  // collider x -> y <- z
    double p;     // p-value of the max-p separating set
  };
  std::vector<Candidate> cands;

  for (int yr = 0; yr < n; ++yr) {
    const int y = byRank[yr];
    const std::vector<int> nb = detail::rank_sorted(g.adjacent(y), ranks);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        const int x = nb[i], z = nb[j];
        if (g.hasEdge(x, z)) continue;

        std::set<std::vector<int>> seen;
        double bestP = -1.0;
        std::vector<int> bestS;
        bool haveAccepting = false;  // a set with p > alpha found so far
        for (int side = 0; side < 2; ++side) {
          const int from = side == 0 ? x : z;
          const int other = side == 0 ? z : x;
          std::vector<int> pool;
          for (int u : g.adjacent(from))
            if (u != other) pool.push_back(u);
          pool = detail::rank_sorted(std::move(pool), ranks);
          const int maxSize = std::min<int>(maxDepth, static_cast<int>(pool.size()));
          for (int d = 0; d <= maxSize; ++d) {
            detail::for_each_combination(pool, d, [&](const std::vector<int>& s) {
              std::vector<int> sorted = s;
              std::sort(sorted.begin(), sorted.end());
              if (!seen.insert(sorted).second) return false;
              const TestResult r = test(x, z, sorted);
              const bool accepts = r.pValue > alpha;
              if ((accepts && !haveAccepting) || (accepts == haveAccepting && r.pValue > bestP)) {
                bestP = r.pValue;
                bestS = sorted;
                haveAccepting = haveAccepting || accepts;
              }
              return false;
            });
          }
        }
        if (!std::binary_search(bestS.begin(), bestS.end(), y))
          cands.push_back({x, y, z, bestP});
      }
    }
  }

  std::sort(cands.begin(), cands.end(), [&ranks](const Candidate& a, const Candidate& b) {
    if (a.p != b.p) return a.p > b.p;
    const std::array<int, 3> ka{ranks[a.x], ranks[a.y], ranks[a.z]};
    const std::array<int, 3> kb{ranks[b.x], ranks[b.y], ranks[b.z]};
    return ka < kb;
  });

  for (const Candidate& c : cands) {
    if (know.isForbidden(c.x, c.y) || know.isForbidden(c.z, c.y)) continue;
    if (g.hasDirected(c.y, c.x) || g.hasDirected(c.y, c.z)) continue;  // contradicted
    if (!g.hasDirected(c.x, c.y)) g.orient(c.x, c.y);
    if (!g.hasDirected(c.z, c.y)) g.orient(c.z, c.y);
  }
  return g;
}

/// Full PC-Max pass over a pluggable test: skeleton, max-p colliders,
/// knowledge-required orientations, Meek closure.
template <typename Test>
Graph pcmax_search_with_test(const std::vector<Variable>& vars, Test&& test, double alpha,
                             const Knowledge& know, int maxDepth) {
  auto [skel, seps] = pcmax_skeleton_with_test(vars, test, know, maxDepth);
  Graph g = orient_colliders_maxp_with_test(std::move(skel), test, alpha, maxDepth, know);
  for (const auto& [a, b] : know.requiredPairs())
    if (g.isUndirected(a, b) && !has_directed_path(g, b, a)) g.orient(a, b);
  g = apply_meek_rules(std::move(g), know);
  g.setKindHint(GraphKind::Cpdag);
  return g;
}

inline std::pair<Graph, SepSetMap> pcmax_skeleton(const EmbeddedData& e, const TestConfig& cfg,
                                                  const Knowledge& know, int maxDepth) {
  auto test = [&e, &cfg](int x, int y, const std::vector<int>& z) { return bf_lrt(x, y, z, e, cfg); };
  return pcmax_skeleton_with_test(e.variables, test, know, maxDepth);
}

inline Graph orient_colliders_maxp(const Graph& skel, const EmbeddedData& e, const TestConfig& cfg,
                                   int maxDepth = 3) {
  auto test = [&e, &cfg](int x, int y, const std::vector<int>& z) { return bf_lrt(x, y, z, e, cfg); };
  return orient_colliders_maxp_with_test(skel, test, cfg.alpha, maxDepth);
}

/// PC-Max with the basis-function likelihood-ratio test.
inline Graph pcmax_search(const EmbeddedData& e, const TestConfig& cfg, const Knowledge& know,
                          int maxDepth) {
  auto test = [&e, &cfg](int x, int y, const std::vector<int>& z) { return bf_lrt(x, y, z, e, cfg); };
  return pcmax_search_with_test(e.variables, test, cfg.alpha, know, maxDepth);
}

}  // namespace bfcausal
