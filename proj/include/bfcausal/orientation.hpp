#pragma once

#include <array>
#include <queue>
#include <set>
#include <utility>
#include <vector>

#include "bfcausal/graph.hpp"

namespace bfcausal {

inline bool has_directed_path(const Graph& g, int from, int to) {
  if (from == to) return true;
  std::vector<bool> seen(g.variableCount(), false);
  std::queue<int> q;
  q.push(from);
  seen[from] = true;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int c : g.children(v)) {
      if (c == to) return true;
      if (!seen[c]) {
        seen[c] = true;
        q.push(c);
      }
    }
  }
  return false;
}

namespace detail {

/// Collects the orientations requested by Meek rules R1..R4 on the current
/// graph state, as (tail, head) pairs over currently undirected edges.
inline std::set<std::pair<int, int>> meek_requests(const Graph& g) {
  std::set<std::pair<int, int>> want;
  const int n = g.variableCount();

  // R1: a -> b, b -- c, a and c nonadjacent  =>  b -> c.
  for (int b = 0; b < n; ++b)
    for (int a : g.parents(b))
      for (int c : g.adjacent(b)) {
        if (c == a || !g.isUndirected(b, c)) continue;
        if (!g.hasEdge(a, c)) want.insert({b, c});
      }

  // R2: a -> b -> c, a -- c  =>  a -> c.
  for (int b = 0; b < n; ++b)
    for (int a : g.parents(b))
      for (int c : g.children(b))
        if (c != a && g.isUndirected(a, c)) want.insert({a, c});

  // R3: a -- b, a -- c, a -- d, c -> b, d -> b, c and d nonadjacent  =>  a -> b.
  for (int a = 0; a < n; ++a)
    for (int b : g.adjacent(a)) {
      if (!g.isUndirected(a, b)) continue;
      const auto& candidates = g.parents(b);
      for (std::size_t i = 0; i < candidates.size(); ++i)
        for (std::size_t j = i + 1; j < candidates.size(); ++j) {
          int c = candidates[i], d = candidates[j];
          if (c == a || d == a) continue;
          if (g.isUndirected(a, c) && g.isUndirected(a, d) && !g.hasEdge(c, d)) want.insert({a, b});
        }
    }

  // R4: a -- b, d -> c -> b, a adjacent to both c and d, d and b nonadjacent
  //     =>  a -> b.
  for (int a = 0; a < n; ++a)
    for (int b : g.adjacent(a)) {
      if (!g.isUndirected(a, b)) continue;
      for (int c : g.parents(b)) {
        if (c == a || !g.hasEdge(a, c)) continue;
        for (int d : g.parents(c)) {
          if (d == a || d == b || !g.hasEdge(a, d)) continue;
          if (!g.hasEdge(d, b)) want.insert({a, b});
        }
      }
    }

  return want;
}

}  // namespace detail

/// Closes g under Meek rules R1..R4, never orienting an edge in a direction
/// the knowledge forbids and never completing a directed cycle. Requests are
/// gathered per pass and applied in sorted order; each rule only fires on a
/// still-undirected edge, so contradictory requests (possible when sample
/// noise yields inconsistent colliders) resolve deterministically in favor
/// of the first in canonical order.
inline Graph apply_meek_rules(Graph g, const Knowledge& k) {
  for (;;) {
    auto want = detail::meek_requests(g);
    for (auto it = want.begin(); it != want.end();) {
      if (k.isForbidden(it->first, it->second)) {
        it = want.erase(it);
      } else {
        ++it;
      }
    }
    bool changed = false;
    for (const auto& [from, to] : want) {
      if (!g.isUndirected(from, to)) continue;
      if (has_directed_path(g, to, from)) continue;  // would close a cycle
      g.orient(from, to);
      changed = true;
    }
    if (!changed) return g;
  }
}

/// Unshielded colliders of a DAG as (parent, collider, parent) triples with
/// the two parents nonadjacent.
inline std::vector<std::array<int, 3>> unshielded_colliders(const Graph& g) {
  std::vector<std::array<int, 3>> out;
  for (int y = 0; y < g.variableCount(); ++y) {
    auto ps = g.parents(y);
    for (std::size_t i = 0; i < ps.size(); ++i)
      for (std::size_t j = i + 1; j < ps.size(); ++j)
        if (!g.hasEdge(ps[i], ps[j])) out.push_back({ps[i], y, ps[j]});
  }
  return out;
}

/// CPDAG of the Markov equivalence class of a DAG: same skeleton, unshielded
/// colliders kept directed, remaining compelled edges found by Meek closure.
inline Graph dag_to_cpdag(const Graph& g) {
  topological_order(g);  // rejects cyclic input
  Graph pattern(g.variables(), GraphKind::Cpdag);
  for (const auto& e : g.edges()) pattern.addUndirected(e.a, e.b);
  for (const auto& [a, y, b] : unshielded_colliders(g)) {
    if (!pattern.hasDirected(a, y)) pattern.orient(a, y);
    if (!pattern.hasDirected(b, y)) pattern.orient(b, y);
  }
  Graph out = apply_meek_rules(std::move(pattern), Knowledge{});
  out.setKindHint(GraphKind::Cpdag);
  return out;
}

}  // namespace bfcausal
