#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "bfcausal/errors.hpp"
#include "bfcausal/graph.hpp"

namespace bfcausal {

/// Immutable-by-convention column store of mixed observations. Continuous
/// columns hold reals; categorical columns hold integer codes 0..c-1 stored
/// as doubles.
struct DataTable {
  std::vector<Variable> variables;
  std::vector<std::vector<double>> columns;

  int rowCount() const { return columns.empty() ? 0 : static_cast<int>(columns.front().size()); }
  int columnCount() const { return static_cast<int>(columns.size()); }

  void validate() const {
    const int n = rowCount();
    if (n < 1) throw Error("DataTable must contain at least one row");
    if (variables.size() != columns.size()) throw Error("DataTable variable/column mismatch");
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (static_cast<int>(columns[j].size()) != n) throw RaggedRowsError("column lengths differ");
      if (variables[j].kind == VarKind::Categorical) {
        const int c = variables[j].numCategories;
        if (c < 2) throw DegenerateCategoryError("categorical variable with fewer than 2 categories");
        for (double v : columns[j]) {
          int code = static_cast<int>(v);
          if (v != code || code < 0 || code >= c)
            throw Error("categorical code out of range in " + variables[j].name);
        }
      }
    }
  }
};

/// Affinely maps every continuous column onto [-1, 1] (min -> -1, max -> +1).
/// Categorical columns pass through untouched.
inline DataTable scale_columns(const DataTable& t) {
  DataTable out = t;
  for (std::size_t j = 0; j < t.columns.size(); ++j) {
    if (t.variables[j].kind == VarKind::Categorical) continue;
    auto [lo, hi] = std::minmax_element(t.columns[j].begin(), t.columns[j].end());
    if (*lo >= *hi) throw ConstantColumnError("continuous column " + t.variables[j].name + " is constant");
    const double span = *hi - *lo;
    for (double& v : out.columns[j]) v = -1.0 + 2.0 * (v - *lo) / span;
  }
  return out;
}

/// Recodes each categorical column to dense codes 0..c-1 over the categories
/// actually observed, in ascending original-code order, and updates the
/// variable's category count. Matches the level handling of CSV ingestion so
/// in-memory simulated tables embed identically to round-tripped ones.
inline DataTable compact_categories(const DataTable& t) {
  DataTable out = t;
  for (std::size_t j = 0; j < t.columns.size(); ++j) {
    if (t.variables[j].kind != VarKind::Categorical) continue;
    std::map<int, int> remap;
    for (double v : t.columns[j]) remap.emplace(static_cast<int>(v), 0);
    int next = 0;
    for (auto& [code, dense] : remap) dense = next++;
    if (next < 2)
      throw ConstantColumnError("categorical column " + t.variables[j].name + " has a single observed level");
    out.variables[j].numCategories = next;
    for (double& v : out.columns[j]) v = remap.at(static_cast<int>(v));
  }
  return out;
}

}  // namespace bfcausal
