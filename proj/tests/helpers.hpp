#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bfcausal/bfcausal.hpp"

namespace testutil {

using namespace bfcausal;

inline std::vector<Variable> make_vars(int n) {
  std::vector<Variable> vars(n);
  for (int i = 0; i < n; ++i) vars[i] = Variable{i, "X" + std::to_string(i + 1), VarKind::Continuous, 0};
  return vars;
}

/// Every DAG on n labeled nodes: each unordered pair takes one of three
/// states (absent, a->b, b->a); cyclic assignments are dropped.
inline std::vector<Graph> enumerate_dags(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) pairs.push_back({a, b});
  const int m = static_cast<int>(pairs.size());
  long total = 1;
  for (int i = 0; i < m; ++i) total *= 3;

  std::vector<Graph> out;
  const std::vector<Variable> vars = make_vars(n);
  for (long code = 0; code < total; ++code) {
    Graph g(vars, GraphKind::Dag);
    long c = code;
    for (int i = 0; i < m; ++i) {
      const int state = static_cast<int>(c % 3);
      c /= 3;
      if (state == 1) g.addDirected(pairs[i].first, pairs[i].second);
      if (state == 2) g.addDirected(pairs[i].second, pairs[i].first);
    }
    if (is_acyclic(g)) out.push_back(std::move(g));
  }
  return out;
}

/// Path-enumeration d-separation oracle: x and y are separated given z iff
/// no undirected simple path is active (non-colliders outside z, colliders
/// in z or with a descendant in z).
inline bool path_dsep(const Graph& g, int x, int y, const std::vector<int>& zVec) {
  std::set<int> z(zVec.begin(), zVec.end());
  const int n = g.variableCount();

  std::vector<std::set<int>> desc(n);  // descendants including self
  for (int v = 0; v < n; ++v) {
    std::vector<int> stack{v};
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      if (!desc[v].insert(u).second) continue;
      for (int c : g.children(u)) stack.push_back(c);
    }
  }
  auto colliderOpen = [&](int v) {
    for (int d : desc[v])
      if (z.count(d)) return true;
    return false;
  };

  std::vector<int> path{x};
  std::vector<bool> used(n, false);
  used[x] = true;
  bool activeFound = false;

  std::function<void(int)> dfs = [&](int cur) {
    if (activeFound) return;
    if (cur == y) {
      bool active = true;
      for (std::size_t i = 1; i + 1 < path.size(); ++i) {
        const int prev = path[i - 1], v = path[i], next = path[i + 1];
        const bool collider = g.hasDirected(prev, v) && g.hasDirected(next, v);
        if (collider ? !colliderOpen(v) : z.count(v) > 0) active = false;
      }
      if (active) activeFound = true;
      return;
    }
    for (int nb : g.adjacent(cur)) {
      if (used[nb]) continue;
      used[nb] = true;
      path.push_back(nb);
      dfs(nb);
      path.pop_back();
      used[nb] = false;
    }
  };
  dfs(x);
  return !activeFound;
}

inline std::string dag_signature(const Graph& g) {
  std::string sig;
  for (const Edge& e : g.edges()) sig += std::to_string(e.a) + "-" + std::to_string(e.b) + ";";
  sig += "|";
  for (const auto& [a, b, c] : unshielded_colliders(g))
    sig += std::to_string(a) + ">" + std::to_string(b) + "<" + std::to_string(c) + ";";
  return sig;
}

/// Independent CPDAG oracle: group all DAGs by (skeleton, colliders) and
/// direct an edge only where every group member agrees.
inline std::map<std::string, Graph> cpdag_oracle_by_signature(const std::vector<Graph>& dags) {
  std::map<std::string, std::vector<const Graph*>> groups;
  for (const Graph& g : dags) groups[dag_signature(g)].push_back(&g);

  std::map<std::string, Graph> oracle;
  for (const auto& [sig, members] : groups) {
    Graph rep(members.front()->variables(), GraphKind::Cpdag);
    for (const Edge& e : members.front()->edges()) {
      bool allForward = true, allBackward = true;
      for (const Graph* m : members) {
        if (!m->hasDirected(e.a, e.b)) allForward = false;
        if (!m->hasDirected(e.b, e.a)) allBackward = false;
      }
      if (allForward)
        rep.addDirected(e.a, e.b);
      else if (allBackward)
        rep.addDirected(e.b, e.a);
      else
        rep.addUndirected(e.a, e.b);
    }
    oracle.emplace(sig, std::move(rep));
  }
  return oracle;
}

/// d-separation oracle packaged as a conditional-independence test.
inline auto dsep_test(const Graph& truth) {
  return [&truth](int x, int y, const std::vector<int>& z) {
    TestResult r;
    const bool sep = d_separated(truth, x, y, z);
    r.statistic = sep ? 0.0 : 1.0;
    r.dof = 1;
    r.pValue = sep ? 1.0 : 0.0;
    r.independent = sep;
    return r;
  };
}

/// Uniform-noise table with independent columns.
inline DataTable independent_table(int cols, int rows, std::uint64_t seed) {
  DataTable t;
  t.variables = make_vars(cols);
  t.columns.assign(cols, std::vector<double>(rows));
  Rng rng(seed);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) t.columns[c][r] = rng.uniform(-1.0, 1.0);
  return t;
}

/// Random table mixing continuous columns with 2-3 level categoricals.
inline DataTable random_mixed_table(int cols, int rows, std::uint64_t seed) {
  DataTable t;
  t.variables = make_vars(cols);
  t.columns.assign(cols, std::vector<double>(rows));
  Rng rng(seed);
  for (int c = 0; c < cols; ++c) {
    if (rng.uniform() < 0.5) {
      const int levels = 2 + static_cast<int>(rng.below(2));
      t.variables[c].kind = VarKind::Categorical;
      t.variables[c].numCategories = levels;
      for (int r = 0; r < rows; ++r) t.columns[c][r] = static_cast<double>(rng.below(levels));
    } else {
      for (int r = 0; r < rows; ++r) t.columns[c][r] = rng.normal();
    }
  }
  return t;
}

inline EmbeddedData embed_for_test(const DataTable& t, int truncation) {
  return embed_dataset(scale_columns(compact_categories(t)), BasisSpec{truncation});
}

}  // namespace testutil
