#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bfcausal/errors.hpp"

namespace bfcausal {

enum class VarKind { Continuous, Categorical };

struct Variable {
  int id = 0;
  std::string name;
  VarKind kind = VarKind::Continuous;
  int numCategories = 0;  // meaningful only when kind == Categorical
};

enum class Mark { Tail, Arrow };

/// One edge of a mixed graph. Stored with a < b; the marks are the endpoint
/// marks at a and b respectively. Tail--Arrow encodes a -> b, Tail--Tail an
/// undirected edge. Arrow--Arrow (bidirected) is rejected everywhere.
struct Edge {
  int a = 0;
  int b = 0;
  Mark markA = Mark::Tail;
  Mark markB = Mark::Tail;

  bool operator==(const Edge& o) const {
    return a == o.a && b == o.b && markA == o.markA && markB == o.markB;
  }
};

enum class GraphKind { Dag, Cpdag, Skeleton };

class Graph {
 public:
  Graph() = default;

  explicit Graph(std::vector<Variable> vars, GraphKind hint = GraphKind::Dag)
      : vars_(std::move(vars)), kind_(hint), adj_(vars_.size()) {
    for (std::size_t i = 0; i < vars_.size(); ++i) vars_[i].id = static_cast<int>(i);
  }

  int variableCount() const { return static_cast<int>(vars_.size()); }

  const std::vector<Variable>& variables() const { return vars_; }

  const Variable& variable(int id) const {
    checkId(id);
    return vars_[id];
  }

  /// Index of the variable with the given name, or -1.
  int indexOf(const std::string& name) const {
    for (const auto& v : vars_)
      if (v.name == name) return v.id;
    return -1;
  }

  void addDirected(int from, int to) { insertEdge(from, to, Mark::Tail, Mark::Arrow); }

  void addUndirected(int a, int b) { insertEdge(a, b, Mark::Tail, Mark::Tail); }

  void removeEdge(int a, int b) {
    checkId(a);
    checkId(b);
    auto key = ordered(a, b);
    if (edges_.erase(key) > 0) {
      eraseAdj(a, b);
      eraseAdj(b, a);
    }
  }

  bool hasEdge(int a, int b) const {
    checkId(a);
    checkId(b);
    return edges_.count(ordered(a, b)) > 0;
  }

  bool hasDirected(int from, int to) const {
    checkId(from);
    checkId(to);
    auto it = edges_.find(ordered(from, to));
    if (it == edges_.end()) return false;
    return markAtEnd(it, to) == Mark::Arrow && markAtEnd(it, from) == Mark::Tail;
  }

  bool isUndirected(int a, int b) const {
    checkId(a);
    checkId(b);
    auto it = edges_.find(ordered(a, b));
    if (it == edges_.end()) return false;
    return it->second.first == Mark::Tail && it->second.second == Mark::Tail;
  }

  /// Re-marks an existing edge as from -> to.
  void orient(int from, int to) {
    checkId(from);
    checkId(to);
    auto it = edges_.find(ordered(from, to));
    if (it == edges_.end()) throw Error("orient: no edge between " + vars_[from].name + " and " + vars_[to].name);
    if (from < to) {
      it->second = {Mark::Tail, Mark::Arrow};
    } else {
      it->second = {Mark::Arrow, Mark::Tail};
    }
  }

  void setUndirected(int a, int b) {
    checkId(a);
    checkId(b);
    auto it = edges_.find(ordered(a, b));
    if (it == edges_.end()) throw Error("setUndirected: no such edge");
    it->second = {Mark::Tail, Mark::Tail};
  }

  std::vector<int> parents(int v) const {
    checkId(v);
    std::vector<int> out;
    for (int u : adj_[v])
      if (hasDirected(u, v)) out.push_back(u);
    return out;
  }

  std::vector<int> children(int v) const {
    checkId(v);
    std::vector<int> out;
    for (int u : adj_[v])
      if (hasDirected(v, u)) out.push_back(u);
    return out;
  }

  /// Ids adjacent to v, ascending.
  const std::vector<int>& adjacent(int v) const {
    checkId(v);
    return adj_[v];
  }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edges_.size());
    for (const auto& [key, marks] : edges_)
      out.push_back(Edge{key.first, key.second, marks.first, marks.second});
    return out;
  }

  std::size_t edgeCount() const { return edges_.size(); }

  GraphKind kindHint() const { return kind_; }
  void setKindHint(GraphKind k) { kind_ = k; }

  bool sameStructure(const Graph& o) const {
    if (vars_.size() != o.vars_.size()) return false;
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i].name != o.vars_[i].name) return false;
    return edges_ == o.edges_;
  }

 private:
  static std::pair<int, int> ordered(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

  using EdgeMap = std::map<std::pair<int, int>, std::pair<Mark, Mark>>;

  static Mark markAtEnd(EdgeMap::const_iterator it, int end) {
    return end == it->first.first ? it->second.first : it->second.second;
  }

  void checkId(int id) const {
    if (id < 0 || id >= static_cast<int>(vars_.size()))
      throw UnknownVariableError("variable id " + std::to_string(id) + " out of range");
  }

  void insertEdge(int x, int y, Mark mx, Mark my) {
    checkId(x);
    checkId(y);
    if (x == y) throw Error("self loop on " + vars_[x].name);
    auto key = ordered(x, y);
    if (edges_.count(key)) throw Error("duplicate edge between " + vars_[x].name + " and " + vars_[y].name);
    if (x < y) {
      edges_[key] = {mx, my};
    } else {
      edges_[key] = {my, mx};
    }
    insertAdj(x, y);
    insertAdj(y, x);
  }

  void insertAdj(int v, int other) {
    auto& lst = adj_[v];
    lst.insert(std::upper_bound(lst.begin(), lst.end(), other), other);
  }

  void eraseAdj(int v, int other) {
    auto& lst = adj_[v];
    lst.erase(std::remove(lst.begin(), lst.end(), other), lst.end());
  }

  std::vector<Variable> vars_;
  EdgeMap edges_;
  GraphKind kind_ = GraphKind::Dag;
  std::vector<std::vector<int>> adj_;
};

/// Tiered background knowledge compiled down to forbidden ordered pairs.
/// Tiers forbid edges from later tiers into earlier ones; explicit forbid and
/// require pairs come on top of that.
class Knowledge {
 public:
  Knowledge() = default;

  void addTier(const std::vector<int>& members) {
    for (int m : members) {
      if (tierOf_.count(m))
        throw DuplicateTierMembershipError("variable id " + std::to_string(m) + " appears in two tiers");
      tierOf_[m] = static_cast<int>(tiers_.size());
    }
    for (const auto& earlier : tiers_)
      for (int e : earlier)
        for (int m : members) forbidden_.insert({m, e});
    tiers_.push_back(members);
  }

  void forbid(int from, int to) {
    if (required_.count({from, to})) throw Error("pair both forbidden and required");
    forbidden_.insert({from, to});
  }

  void require(int from, int to) {
    if (forbidden_.count({from, to})) throw Error("pair both forbidden and required");
    required_.insert({from, to});
  }

  bool isForbidden(int from, int to) const { return forbidden_.count({from, to}) > 0; }
  bool isRequired(int from, int to) const { return required_.count({from, to}) > 0; }
  bool empty() const { return forbidden_.empty() && required_.empty(); }

  const std::vector<std::vector<int>>& tiers() const { return tiers_; }
  const std::set<std::pair<int, int>>& forbiddenPairs() const { return forbidden_; }
  const std::set<std::pair<int, int>>& requiredPairs() const { return required_; }

 private:
  std::vector<std::vector<int>> tiers_;
  std::map<int, int> tierOf_;
  std::set<std::pair<int, int>> forbidden_;
  std::set<std::pair<int, int>> required_;
};

/// Rank of each variable when ordered by name. Search iteration orders are
/// keyed on these ranks so that results do not depend on the column order of
/// the input data.
inline std::vector<int> canonical_ranks(const std::vector<Variable>& vars) {
  std::vector<int> ids(vars.size());
  std::iota(ids.begin(), ids.end(), 0);
  std::sort(ids.begin(), ids.end(), [&](int a, int b) { return vars[a].name < vars[b].name; });
  std::vector<int> rank(vars.size());
  for (std::size_t pos = 0; pos < ids.size(); ++pos) rank[ids[pos]] = static_cast<int>(pos);
  return rank;
}

/// Parent-before-child order of a DAG. Ties broken by smallest id.
inline std::vector<int> topological_order(const Graph& g) {
  const int n = g.variableCount();
  std::vector<int> indeg(n, 0);
  for (int v = 0; v < n; ++v) indeg[v] = static_cast<int>(g.parents(v).size());
  std::vector<bool> placed(n, false);
  std::vector<int> order;
  order.reserve(n);
  for (int step = 0; step < n; ++step) {
    int next = -1;
    for (int v = 0; v < n; ++v)
      if (!placed[v] && indeg[v] == 0) {
        next = v;
        break;
      }
    if (next < 0) throw CyclicGraphError("graph contains a directed cycle");
    placed[next] = true;
    order.push_back(next);
    for (int c : g.children(next)) --indeg[c];
  }
  return order;
}

inline bool is_acyclic(const Graph& g) {
  try {
    topological_order(g);
    return true;
  } catch (const CyclicGraphError&) {
    return false;
  }
}

/// v together with everything that has a directed path into a member of vs.
inline std::vector<bool> ancestor_mask(const Graph& g, const std::vector<int>& vs) {
  std::vector<bool> mask(g.variableCount(), false);
  std::queue<int> q;
  for (int v : vs)
    if (!mask[v]) {
      mask[v] = true;
      q.push(v);
    }
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int p : g.parents(v))
      if (!mask[p]) {
        mask[p] = true;
        q.push(p);
      }
  }
  return mask;
}

/// True iff x and y are d-separated given cond in the DAG g: every path
/// between them has either a non-collider in cond or a collider with no
/// descendant in cond.
inline bool d_separated(const Graph& g, int x, int y, const std::vector<int>& cond) {
  const int n = g.variableCount();
  if (x < 0 || x >= n) throw UnknownVariableError("d_separated: x out of range");
  if (y < 0 || y >= n) throw UnknownVariableError("d_separated: y out of range");
  for (int c : cond)
    if (c < 0 || c >= n) throw UnknownVariableError("d_separated: conditioning id out of range");

  std::vector<bool> inCond(n, false);
  for (int c : cond) inCond[c] = true;
  std::vector<bool> condAnc = ancestor_mask(g, cond);

  // State (v, in): in == true when the traversed edge points at v.
  std::vector<bool> visitedIn(n, false), visitedOut(n, false);
  std::queue<std::pair<int, bool>> q;
  for (int c : g.children(x)) q.push({c, true});
  for (int p : g.parents(x)) q.push({p, false});
  while (!q.empty()) {
    auto [v, in] = q.front();
    q.pop();
    if (v == y) return false;  // reached via an active path
    auto& seen = in ? visitedIn : visitedOut;
    if (seen[v]) continue;
    seen[v] = true;
    if (in) {
      if (!inCond[v])
        for (int c : g.children(v)) q.push({c, true});
      if (condAnc[v])
        for (int p : g.parents(v)) q.push({p, false});
    } else {
      if (!inCond[v]) {
        for (int c : g.children(v)) q.push({c, true});
        for (int p : g.parents(v)) q.push({p, false});
      }
    }
  }
  return true;
}

}  // namespace bfcausal
