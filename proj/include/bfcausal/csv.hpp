#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "bfcausal/data_table.hpp"
#include "bfcausal/graph_io.hpp"

namespace bfcausal {

/// Loads a rectangular, header-first, comma-separated numeric table. Columns
/// whose values are all integers with at most five distinct levels become
/// categorical (recoded to dense 0-based codes in ascending value order);
/// everything else is continuous. Missing cells are rejected.
inline DataTable load_csv_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("csv is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> names = detail::split(line, ',');
  for (auto& n : names) {
    n = detail::trim(n);
    if (n.empty()) throw ParseError("csv header has an empty column name");
  }
  const std::size_t width = names.size();

  std::vector<std::vector<double>> columns(width);
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    const std::vector<std::string> cells = detail::split(line, ',');
    if (cells.size() != width)
      throw RaggedRowsError("row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                            " cells, header has " + std::to_string(width));
    for (std::size_t c = 0; c < width; ++c) {
      const std::string cell = detail::trim(cells[c]);
      if (cell.empty() || cell == "NA" || cell == "nan" || cell == "NaN")
        throw MissingValuesError("missing value at row " + std::to_string(row) + ", column '" +
                                 names[c] + "'");
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        throw ParseError("non-numeric cell '" + cell + "' at row " + std::to_string(row));
      }
      if (used != cell.size())
        throw ParseError("non-numeric cell '" + cell + "' at row " + std::to_string(row));
      columns[c].push_back(v);
    }
  }
  if (columns.empty() || columns[0].empty()) throw ParseError("csv has no data rows");

  DataTable t;
  for (std::size_t c = 0; c < width; ++c) {
    std::map<double, int> distinct;
    bool allInteger = true;
    for (double v : columns[c]) {
      if (!(std::isfinite(v) && std::floor(v) == v)) allInteger = false;
      if (distinct.size() <= 6) distinct[v] = 0;
    }
    if (distinct.size() == 1)
      throw ConstantColumnError("column '" + names[c] + "' is constant");
    Variable var{static_cast<int>(c), names[c], VarKind::Continuous, 0};
    if (allInteger && distinct.size() <= 5) {
      int code = 0;
      for (auto& [value, mapped] : distinct) mapped = code++;
      for (double& v : columns[c]) v = distinct[v];
      var.kind = VarKind::Categorical;
      var.numCategories = static_cast<int>(distinct.size());
    }
    t.variables.push_back(var);
    t.columns.push_back(std::move(columns[c]));
  }
  t.validate();
  return t;
}

inline DataTable load_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open csv file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_csv_text(buf.str());
}

/// Header plus one row per sample; categorical cells as integers, continuous
/// with 17 significant digits.
inline std::string csv_text(const DataTable& t) {
  std::ostringstream out;
  for (std::size_t c = 0; c < t.variables.size(); ++c) {
    if (c > 0) out << ",";
    out << t.variables[c].name;
  }
  out << "\n";
  char buf[64];
  const int n = t.rowCount();
  for (int r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      if (c > 0) out << ",";
      if (t.variables[c].kind == VarKind::Categorical) {
        out << static_cast<long long>(t.columns[c][r]);
      } else {
        std::snprintf(buf, sizeof(buf), "%.17g", t.columns[c][r]);
        out << buf;
      }
    }
    out << "\n";
  }
  return out.str();
}

inline void write_csv(const DataTable& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  out << csv_text(t);
}

}  // namespace bfcausal
