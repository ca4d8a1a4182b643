#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bfcausal/graph.hpp"
#include "bfcausal/orientation.hpp"
#include "bfcausal/rng.hpp"
#include "bfcausal/score.hpp"

namespace bfcausal {

namespace detail {

struct PrefixChoice {
  double score = 0.0;
  std::vector<int> parents;  // sorted by id
};

inline std::string prefix_memo_key(int v, const std::vector<int>& sortedPrefix) {
  std::string k;
  k.reserve(4 + 4 * sortedPrefix.size());
  auto push = [&k](int x) {
    for (int b = 0; b < 4; ++b) k.push_back(static_cast<char>((x >> (8 * b)) & 0xff));
  };
  push(v);
  for (int p : sortedPrefix) push(p);
  return k;
}

/// Permutation sweep engine, generic over the local score so tests can plug
/// an oracle in place of BF-BIC. All candidate iteration follows canonical
/// name order, which makes the result depend only on variable names, not on
/// input column positions.
template <typename LocalScore>
class BossEngine {
 public:
  BossEngine(const std::vector<Variable>& vars, LocalScore score, const Knowledge& know)
      : vars_(vars), score_(std::move(score)), know_(know), ranks_(canonical_ranks(vars)) {
    byRank_.resize(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i) byRank_[ranks_[i]] = static_cast<int>(i);
  }

  /// Grow-shrink parent choice for v over the given prefix, memoized on the
  /// prefix as a set.
  const PrefixChoice& choose(int v, const std::vector<int>& sortedPrefix) {
    std::string key = prefix_memo_key(v, sortedPrefix);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    PrefixChoice c = growShrink(v, sortedPrefix);
    return memo_.emplace(std::move(key), std::move(c)).first->second;
  }

  double orderScore(const std::vector<int>& order) {
    std::vector<int> prefix;
    prefix.reserve(order.size());
    double total = 0.0;
    for (int v : order) {
      total += choose(v, prefix).score;
      prefix.insert(std::upper_bound(prefix.begin(), prefix.end(), v), v);
    }
    return total;
  }

  /// Repeated sweeps to a local optimum; returns the final permutation. If
  /// trace is given, the retained total score is appended after the initial
  /// scoring and after each variable's committed move.
  std::vector<int> run(std::uint64_t seed, std::vector<double>* trace = nullptr) {
    std::vector<int> order = byRank_;  // canonical name order
    Rng rng(seed);
    rng.shuffle(order);
    double total = orderScore(order);
    if (trace) trace->push_back(total);

    bool improved = true;
    while (improved) {
      improved = false;
      const std::vector<int> snapshot = order;
      for (int v : snapshot) {
        const int cur =
            static_cast<int>(std::find(order.begin(), order.end(), v) - order.begin());
        std::vector<int> without = order;
        without.erase(without.begin() + cur);
        int bestPos = cur;
        double bestScore = total;  // ties keep the incumbent position
        std::vector<int> cand;
        cand.reserve(order.size());
        for (int j = 0; j <= static_cast<int>(without.size()); ++j) {
          if (j == cur) continue;
          cand = without;
          cand.insert(cand.begin() + j, v);
          const double s = orderScore(cand);
          if (s > bestScore) {
            bestScore = s;
            bestPos = j;
          }
        }
        if (bestPos != cur) {
          order = without;
          order.insert(order.begin() + bestPos, v);
          total = bestScore;
          improved = true;
        }
        if (trace) trace->push_back(total);
      }
    }
    return order;
  }

  Graph buildDag(const std::vector<int>& order) {
    Graph g(vars_, GraphKind::Dag);
    std::vector<int> prefix;
    prefix.reserve(order.size());
    for (int v : order) {
      for (int p : choose(v, prefix).parents) g.addDirected(p, v);
      prefix.insert(std::upper_bound(prefix.begin(), prefix.end(), v), v);
    }
    return g;
  }

 private:
  PrefixChoice growShrink(int v, const std::vector<int>& prefix) {
    std::vector<int> cands;
    for (int c : prefix)  // the reverse of a required edge can never be a parent
      if (!know_.isForbidden(c, v) && !know_.isRequired(v, c)) cands.push_back(c);
    std::sort(cands.begin(), cands.end(), [this](int a, int b) { return ranks_[a] < ranks_[b]; });

    std::vector<int> parents;
    for (int c : cands)
      if (know_.isRequired(c, v)) parents.push_back(c);
    std::sort(parents.begin(), parents.end());
    double cur = score_(v, parents);

    for (;;) {  // grow
      int bestC = -1;
      double bestS = cur;
      std::vector<int> trial;
      for (int c : cands) {
        if (std::binary_search(parents.begin(), parents.end(), c)) continue;
        trial = parents;
        trial.insert(std::upper_bound(trial.begin(), trial.end(), c), c);
        const double s = score_(v, trial);
        if (s > bestS) {
          bestS = s;
          bestC = c;
        }
      }
      if (bestC < 0) break;
      parents.insert(std::upper_bound(parents.begin(), parents.end(), bestC), bestC);
      cur = bestS;
    }

    for (;;) {  // shrink
      int bestC = -1;
      double bestS = cur;
      std::vector<int> byRankParents = parents;
      std::sort(byRankParents.begin(), byRankParents.end(),
                [this](int a, int b) { return ranks_[a] < ranks_[b]; });
      for (int c : byRankParents) {
        if (know_.isRequired(c, v)) continue;
        std::vector<int> trial;
        trial.reserve(parents.size() - 1);
        for (int p : parents)
          if (p != c) trial.push_back(p);
        const double s = score_(v, trial);
        if (s > bestS) {
          bestS = s;
          bestC = c;
        }
      }
      if (bestC < 0) break;
      parents.erase(std::find(parents.begin(), parents.end(), bestC));
      cur = bestS;
    }
    return PrefixChoice{cur, std::move(parents)};
  }

  std::vector<Variable> vars_;
  LocalScore score_;
  Knowledge know_;
  std::vector<int> ranks_;   // id -> canonical rank
  std::vector<int> byRank_;  // canonical rank -> id
  std::unordered_map<std::string, PrefixChoice> memo_;
};

}  // namespace detail

/// Grow-shrink parent selection for v among the prefix variables, scored by
/// BF-BIC. Knowledge-forbidden parents are never added; required ones (when
/// in the prefix) are kept.
inline std::vector<int> best_parents_given_prefix(int v, std::vector<int> prefix,
                                                  const EmbeddedData& e, const ScoreConfig& cfg,
                                                  const Knowledge& know, ScoreCache& cache) {
  for (int p : prefix)
    if (p == v) throw Error("best_parents_given_prefix: v appears in its own prefix");
  std::sort(prefix.begin(), prefix.end());
  auto local = [&e, &cfg, &cache](int child, const std::vector<int>& parents) {
    return cached_local_bf_bic(child, parents, e, cfg, &cache);
  };
  detail::BossEngine<decltype(local)> eng(e.variables, local, know);
  return eng.choose(v, prefix).parents;
}

/// Permutation search over a caller-supplied local score; used with oracle
/// scores in tests. Sweeps from several start permutations derived from the
/// seed (insertion sweeps have strict local optima, e.g. orders whose every
/// single-variable move ties) and keeps the highest-scoring result; the
/// reported trace is the winning run's. Returns the CPDAG of the best DAG,
/// with knowledge-required edges forced in and oriented.
template <typename LocalScore>
Graph boss_search_with_score(const std::vector<Variable>& vars, LocalScore score,
                             const Knowledge& know, std::uint64_t seed,
                             std::vector<double>* scoreTrace = nullptr) {
  constexpr int kStarts = 8;
  detail::BossEngine<LocalScore> eng(vars, std::move(score), know);
  std::vector<int> bestOrder;
  std::vector<double> bestTrace;
  double best = 0.0;
  for (int r = 0; r < kStarts; ++r) {
    std::vector<double> trace;
    std::vector<int> order =
        eng.run(r == 0 ? seed : mix_seed(seed, static_cast<std::uint64_t>(r)), &trace);
    if (r == 0 || trace.back() > best) {
      best = trace.back();
      bestOrder = std::move(order);
      bestTrace = std::move(trace);
    }
  }
  if (scoreTrace) *scoreTrace = std::move(bestTrace);

  Graph dag = eng.buildDag(bestOrder);
  for (const auto& [a, b] : know.requiredPairs())
    if (!dag.hasEdge(a, b) && !has_directed_path(dag, b, a)) dag.addDirected(a, b);
  Graph g = dag_to_cpdag(dag);
  if (!know.requiredPairs().empty()) {
    for (const auto& [a, b] : know.requiredPairs())
      if (g.isUndirected(a, b) && !has_directed_path(g, b, a)) g.orient(a, b);
    g = apply_meek_rules(std::move(g), know);
    g.setKindHint(GraphKind::Cpdag);
  }
  return g;
}

/// BOSS over the BF-BIC score: shuffled canonical start order, insertion
/// sweeps to convergence, grow-shrink parents per prefix, CPDAG output.
inline Graph boss_search(const EmbeddedData& e, const ScoreConfig& cfg, const Knowledge& know,
                         std::uint64_t seed, ScoreCache* cache = nullptr,
                         std::vector<double>* scoreTrace = nullptr) {
  int maxWidth = 0;
  for (int v = 0; v < static_cast<int>(e.variables.size()); ++v)
    maxWidth = std::max(maxWidth, static_cast<int>(e.blockColumns(v).size()));
  if (e.sampleCount() <= maxWidth + 2)
    throw SingularSystemError("sample size " + std::to_string(e.sampleCount()) +
                              " too small for block width " + std::to_string(maxWidth));
  ScoreCache localCache;
  ScoreCache* use = cache ? cache : &localCache;
  auto local = [&e, &cfg, use](int child, const std::vector<int>& parents) {
    return cached_local_bf_bic(child, parents, e, cfg, use);
  };
  return boss_search_with_score(e.variables, local, know, seed, scoreTrace);
}

}  // namespace bfcausal
