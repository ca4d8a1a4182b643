#pragma once

#include <Eigen/Dense>
#include <vector>

#include "bfcausal/data_table.hpp"
#include "bfcausal/legendre.hpp"

namespace bfcausal {

struct BasisSpec {
  int truncationLimit = 3;
};

/// Basis-expanded dataset: per-variable column blocks (Legendre terms for
/// continuous variables, c-1 category indicators for categorical ones), the
/// full design matrix, and its ML covariance (denominator N) computed once.
struct EmbeddedData {
  struct Block {
    int offset = 0;
    int width = 0;
  };

  std::vector<Variable> variables;
  std::vector<Block> blocks;
  Eigen::MatrixXd matrix;      // N x M
  Eigen::MatrixXd covariance;  // M x M, exactly symmetric
  Eigen::VectorXd columnMeans;
  std::vector<long> columnKey;  // canonical (name-rank, within-block) sort key

  int sampleCount() const { return static_cast<int>(matrix.rows()); }
  int columnCount() const { return static_cast<int>(matrix.cols()); }

  std::vector<int> blockColumns(int var) const {
    const auto& b = blocks.at(var);
    std::vector<int> cols(b.width);
    for (int j = 0; j < b.width; ++j) cols[j] = b.offset + j;
    return cols;
  }
};

/// Expands a scaled table: continuous variable -> [P_1(x) .. P_p(x)] (no
/// constant term), categorical variable with c categories -> indicators for
/// categories 0..c-2 (highest code dropped). Covariance and means are
/// computed once over all embedded columns.
inline EmbeddedData embed_dataset(const DataTable& t, const BasisSpec& spec) {
  t.validate();
  if (spec.truncationLimit < 1) throw Error("truncation limit must be at least 1");
  const int n = t.rowCount();
  const int p = spec.truncationLimit;

  EmbeddedData e;
  e.variables = t.variables;
  e.blocks.resize(t.variables.size());

  int m = 0;
  for (std::size_t v = 0; v < t.variables.size(); ++v) {
    const int width = t.variables[v].kind == VarKind::Continuous ? p : t.variables[v].numCategories - 1;
    e.blocks[v] = {m, width};
    m += width;
  }

  e.matrix.resize(n, m);
  for (std::size_t v = 0; v < t.variables.size(); ++v) {
    const auto& col = t.columns[v];
    const auto& block = e.blocks[v];
    if (t.variables[v].kind == VarKind::Continuous) {
      for (int r = 0; r < n; ++r) {
        auto terms = legendre_terms(p, col[r]);
        for (int j = 0; j < p; ++j) e.matrix(r, block.offset + j) = terms[j];
      }
    } else {
      const int c = t.variables[v].numCategories;
      std::vector<int> counts(c, 0);
      for (int r = 0; r < n; ++r) ++counts[static_cast<int>(col[r])];
      for (int cat = 0; cat < c; ++cat)
        if (counts[cat] == 0)
          throw DegenerateCategoryError("category " + std::to_string(cat) + " of " + t.variables[v].name +
                                        " has no observations");
      for (int r = 0; r < n; ++r) {
        const int code = static_cast<int>(col[r]);
        for (int cat = 0; cat < c - 1; ++cat) e.matrix(r, block.offset + cat) = code == cat ? 1.0 : 0.0;
      }
    }
  }

  e.columnMeans = e.matrix.colwise().mean().transpose();
  Eigen::MatrixXd centered = e.matrix.rowwise() - e.columnMeans.transpose();
  e.covariance.resize(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      const double cij = centered.col(i).dot(centered.col(j)) / n;
      e.covariance(i, j) = cij;
      e.covariance(j, i) = cij;
    }

  const auto ranks = canonical_ranks(t.variables);
  e.columnKey.resize(m);
  for (std::size_t v = 0; v < t.variables.size(); ++v)
    for (int j = 0; j < e.blocks[v].width; ++j)
      e.columnKey[e.blocks[v].offset + j] = static_cast<long>(ranks[v]) * (m + 1) + j;

  return e;
}

}  // namespace bfcausal
