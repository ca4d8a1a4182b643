#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "bfcausal/chi_square.hpp"
#include "bfcausal/embedding.hpp"
#include "bfcausal/score.hpp"

namespace bfcausal {

struct TestConfig {
  double alpha = 0.01;
  BasisSpec basis;
  double ridge = 0.0;
};

struct TestResult {
  double statistic = 0.0;
  int dof = 0;
  double pValue = 1.0;
  bool independent = true;
};

/// Likelihood-ratio test of X independent of Y given Z over the embedded
/// blocks. Each column X_j of X's block contributes n log(s0^2 / s1^2),
/// where s0^2 regresses X_j on Z's blocks alone and s1^2 on Z's blocks plus
/// Y's block; negative contributions are clamped to zero. The summed
/// statistic is referred to a chi-square with width(X) * width(Y) degrees of
/// freedom.
inline TestResult bf_lrt(int x, int y, const std::vector<int>& z, const EmbeddedData& e,
                         const TestConfig& cfg, int n) {
  if (x == y) throw Error("bf_lrt: x and y must differ");
  for (int v : z)
    if (v == x || v == y) throw Error("bf_lrt: conditioning set overlaps the tested pair");
  if (cfg.alpha <= 0.0 || cfg.alpha >= 1.0) throw InvalidConfigError("alpha must lie in (0,1)");
  if (e.blockColumns(x).empty() || e.blockColumns(y).empty())
    throw DegenerateVariableError("tested variable has an empty embedded block");

  std::vector<int> zCols;
  for (int v : z)
    for (int col : e.blockColumns(v)) zCols.push_back(col);
  std::vector<int> zyCols = zCols;
  for (int col : e.blockColumns(y)) zyCols.push_back(col);

  double stat = 0.0;
  for (int col : e.blockColumns(x)) {
    const double s0 = residual_variance(col, zCols, e, cfg.ridge);
    const double s1 = residual_variance(col, zyCols, e, cfg.ridge);
    stat += std::max(0.0, n * std::log(s0 / s1));
  }

  TestResult r;
  r.statistic = stat;
  r.dof = static_cast<int>(e.blockColumns(x).size() * e.blockColumns(y).size());
  r.pValue = chi_square_survival(r.statistic, r.dof);
  r.independent = r.pValue > cfg.alpha;
  return r;
}

inline TestResult bf_lrt(int x, int y, const std::vector<int>& z, const EmbeddedData& e,
                         const TestConfig& cfg) {
  return bf_lrt(x, y, z, e, cfg, e.sampleCount());
}

}  // namespace bfcausal
