#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "bfcausal/embedding.hpp"
#include "bfcausal/graph.hpp"

namespace bfcausal {

/// Floor for residual variances; keeps log sigma^2 finite when a child is a
/// near-deterministic function of its predictors.
constexpr double kEpsVar = 1e-10;

struct ScoreConfig {
  double penaltyDiscount = 1.0;
  BasisSpec basis;
  double ridge = 0.0;  // always-on regularizer; 0 means plain solve first
};

/// Cache of local scores keyed by (child, sorted parent set). Values are
/// deterministic, so concurrent last-write-wins insertion is fine.
class ScoreCache {
 public:
  bool lookup(int child, const std::vector<int>& parents, double& out) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = map_.find(key(child, parents));
    if (it == map_.end()) return false;
    out = it->second;
    return true;
  }

  void store(int child, const std::vector<int>& parents, double value) {
    std::lock_guard<std::mutex> lock(mutex_);
    map_[key(child, parents)] = value;
  }

  std::size_t size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return map_.size();
  }

 private:
  static std::string key(int child, const std::vector<int>& parents) {
    std::string k;
    k.reserve(4 + 4 * parents.size());
    auto push = [&k](int v) {
      for (int b = 0; b < 4; ++b) k.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
    };
    push(child);
    for (int p : parents) push(p);
    return k;
  }

  mutable std::mutex mutex_;
  std::unordered_map<std::string, double> map_;
};

namespace detail {

inline double solve_residual_variance(int target, const std::vector<int>& preds, const EmbeddedData& e,
                                      double ridge) {
  const double varT = e.covariance(target, target);
  if (preds.empty()) return varT;
  const int m = static_cast<int>(preds.size());
  Eigen::MatrixXd cpp(m, m);
  Eigen::VectorXd cpt(m);
  for (int i = 0; i < m; ++i) {
    cpt(i) = e.covariance(preds[i], target);
    for (int j = 0; j < m; ++j) cpp(i, j) = e.covariance(preds[i], preds[j]);
  }
  if (ridge > 0.0) cpp.diagonal().array() += ridge;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(cpp);
  if (ldlt.info() != Eigen::Success) return std::numeric_limits<double>::quiet_NaN();
  Eigen::VectorXd beta = ldlt.solve(cpt);
  return varT - cpt.dot(beta);
}

}  // namespace detail

/// ML residual variance of regressing the target column on the predictor
/// columns (intercept via mean-centering), computed from the covariance
/// matrix and clamped below at kEpsVar. Falls back to a trace-scaled ridge
/// when the plain system is numerically singular.
inline double residual_variance(int targetCol, std::vector<int> predictors, const EmbeddedData& e,
                                double ridge = 0.0) {
  // Canonical predictor order keeps the solve bit-identical across input
  // column permutations.
  std::sort(predictors.begin(), predictors.end(),
            [&e](int a, int b) { return e.columnKey[a] < e.columnKey[b]; });
  for (int p : predictors)
    if (p == targetCol) throw Error("residual_variance: target column is among the predictors");

  const double varT = e.covariance(targetCol, targetCol);
  double s2 = detail::solve_residual_variance(targetCol, predictors, e, ridge);
  const double badBelow = -1e-6 * std::max(varT, 1.0);
  if (!std::isfinite(s2) || s2 < badBelow) {
    double trace = 0.0;
    for (int p : predictors) trace += e.covariance(p, p);
    const double fallback = 1e-8 * trace / std::max<std::size_t>(predictors.size(), 1);
    s2 = detail::solve_residual_variance(targetCol, predictors, e, ridge + fallback);
    if (!std::isfinite(s2) || s2 < badBelow)
      throw SingularSystemError("regression system is singular even after regularization");
  }
  return std::max(s2, kEpsVar);
}

/// Penalized Gaussian likelihood of one embedded column given predictor
/// columns: 2L - c k ln N with L = -(N/2) log(2 pi sigma^2) + 1 and
/// k = |predictors|.
inline double component_bic(int targetCol, const std::vector<int>& predictors, const EmbeddedData& e,
                            const ScoreConfig& cfg, int n) {
  if (cfg.penaltyDiscount <= 0.0) throw InvalidConfigError("penalty discount must be positive");
  const int k = static_cast<int>(predictors.size());
  if (n < k + 2) throw SingularSystemError("sample size too small for " + std::to_string(k) + " predictors");
  const double s2 = residual_variance(targetCol, predictors, e, cfg.ridge);
  const double logLik = -0.5 * n * std::log(2.0 * M_PI * s2) + 1.0;
  return 2.0 * logLik - cfg.penaltyDiscount * k * std::log(static_cast<double>(n));
}

/// BF-BIC local score of child given parents, as the sum of component scores
/// over the child's embedded columns. Column j of the child block is scored
/// against all parent-block columns plus the child's columns 1..j-1, in block
/// order.
inline double local_bf_bic(int child, const std::vector<int>& parents, const EmbeddedData& e,
                           const ScoreConfig& cfg) {
  for (int p : parents)
    if (p == child) throw Error("local_bf_bic: child listed among its parents");
  const int n = e.sampleCount();
  std::vector<int> preds;
  for (int p : parents)
    for (int col : e.blockColumns(p)) preds.push_back(col);

  double total = 0.0;
  const auto childCols = e.blockColumns(child);
  for (int col : childCols) {
    total += component_bic(col, preds, e, cfg, n);
    preds.push_back(col);
  }
  return total;
}

inline double cached_local_bf_bic(int child, std::vector<int> parents, const EmbeddedData& e,
                                  const ScoreConfig& cfg, ScoreCache* cache) {
  std::sort(parents.begin(), parents.end());
  double value = 0.0;
  if (cache && cache->lookup(child, parents, value)) return value;
  value = local_bf_bic(child, parents, e, cfg);
  if (cache) cache->store(child, parents, value);
  return value;
}

/// Total BF-BIC of a DAG: sum of local scores of every variable given its
/// parents.
inline double score_dag(const Graph& g, const EmbeddedData& e, const ScoreConfig& cfg,
                        ScoreCache* cache = nullptr) {
  topological_order(g);  // rejects cyclic input
  double total = 0.0;
  for (int v = 0; v < g.variableCount(); ++v) total += cached_local_bf_bic(v, g.parents(v), e, cfg, cache);
  return total;
}

}  // namespace bfcausal
