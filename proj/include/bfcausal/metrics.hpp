#pragma once

#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "bfcausal/graph.hpp"

namespace bfcausal {

/// Structural comparison outcome. Metrics with a zero denominator are left
/// unset and excluded from the F1 aggregates.
struct MetricsReport {
  std::optional<double> ap, ar, ahp, ahr, ahpc, ahrc, f1adj, f1all;
  int shd = 0;
  double elapsedSeconds = 0.0;
};

namespace detail {

inline std::optional<double> ratio(int num, int den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / den;
}

inline std::optional<double> harmonic_mean(const std::vector<std::optional<double>>& parts) {
  int k = 0;
  double invSum = 0.0;
  bool sawZero = false;
  for (const auto& p : parts) {
    if (!p) continue;
    ++k;
    if (*p == 0.0)
      sawZero = true;
    else
      invSum += 1.0 / *p;
  }
  if (k == 0) return std::nullopt;
  if (sawZero) return 0.0;
  return k / invSum;
}

inline void check_same_variables(const Graph& a, const Graph& b) {
  if (a.variableCount() != b.variableCount())
    throw VariableMismatchError("graphs have different variable counts");
  for (int i = 0; i < a.variableCount(); ++i)
    if (a.variable(i).name != b.variable(i).name)
      throw VariableMismatchError("variable " + std::to_string(i) + " differs: '" +
                                  a.variable(i).name + "' vs '" + b.variable(i).name + "'");
}

}  // namespace detail

/// Pairs whose edge status (absent / undirected / one of the two directions)
/// differs; each differing pair costs 1, so a reversal costs 1.
inline int shd(const Graph& estimated, const Graph& truth) {
  detail::check_same_variables(estimated, truth);
  int count = 0;
  const int n = estimated.variableCount();
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      auto status = [a, b](const Graph& g) {
        if (!g.hasEdge(a, b)) return 0;
        if (g.hasDirected(a, b)) return 1;
        if (g.hasDirected(b, a)) return 2;
        return 3;
      };
      if (status(estimated) != status(truth)) ++count;
    }
  }
  return count;
}

/// Adjacency metrics count unordered pairs; arrowhead metrics count directed
/// endpoints (an estimated arrowhead at y on edge x-y is a true positive iff
/// the truth also has an arrowhead at y there). The AHPC/AHRC variants only
/// look at pairs adjacent in both graphs.
inline MetricsReport compare_graphs(const Graph& estimated, const Graph& truth) {
  detail::check_same_variables(estimated, truth);
  const int n = estimated.variableCount();

  int adjTp = 0, adjFp = 0, adjFn = 0;
  int ahTp = 0, ahFp = 0, ahFn = 0;
  int ahTpC = 0, ahFpC = 0, ahFnC = 0;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const bool inEst = estimated.hasEdge(a, b);
      const bool inTruth = truth.hasEdge(a, b);
      if (inEst && inTruth) ++adjTp;
      if (inEst && !inTruth) ++adjFp;
      if (!inEst && inTruth) ++adjFn;

      for (const auto& [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
        const bool estHead = estimated.hasDirected(x, y);
        const bool truthHead = truth.hasDirected(x, y);
        if (estHead && truthHead) ++ahTp;
        if (estHead && !truthHead) ++ahFp;
        if (!estHead && truthHead) ++ahFn;
        if (inEst && inTruth) {
          if (estHead && truthHead) ++ahTpC;
          if (estHead && !truthHead) ++ahFpC;
          if (!estHead && truthHead) ++ahFnC;
        }
      }
    }
  }

  MetricsReport r;
  r.ap = detail::ratio(adjTp, adjTp + adjFp);
  r.ar = detail::ratio(adjTp, adjTp + adjFn);
  r.ahp = detail::ratio(ahTp, ahTp + ahFp);
  r.ahr = detail::ratio(ahTp, ahTp + ahFn);
  r.ahpc = detail::ratio(ahTpC, ahTpC + ahFpC);
  r.ahrc = detail::ratio(ahTpC, ahTpC + ahFnC);
  r.f1adj = (r.ap && r.ar) ? detail::harmonic_mean({r.ap, r.ar}) : std::nullopt;
  r.f1all = detail::harmonic_mean({r.ap, r.ar, r.ahp, r.ahr});
  r.shd = shd(estimated, truth);
  return r;
}

inline nlohmann::json metrics_to_json(const MetricsReport& r) {
  nlohmann::json j;
  auto put = [&j](const char* key, const std::optional<double>& v) {
    if (v)
      j[key] = *v;
    else
      j[key] = nullptr;
  };
  put("ap", r.ap);
  put("ar", r.ar);
  put("ahp", r.ahp);
  put("ahr", r.ahr);
  put("ahpc", r.ahpc);
  put("ahrc", r.ahrc);
  put("f1adj", r.f1adj);
  put("f1all", r.f1all);
  j["shd"] = r.shd;
  j["elapsed"] = r.elapsedSeconds;
  return j;
}

/// Fixed-width report; undefined metrics print as an em dash.
inline std::string metrics_to_table(const MetricsReport& r) {
  std::ostringstream out;
  auto cell = [](const std::optional<double>& v) {
    std::ostringstream c;
    if (v)
      c << std::fixed << std::setprecision(4) << *v;
    else
      c << "—";
    return c.str();
  };
  const std::vector<std::pair<std::string, std::string>> cols = {
      {"AP", cell(r.ap)},       {"AR", cell(r.ar)},       {"AHP", cell(r.ahp)},
      {"AHR", cell(r.ahr)},     {"AHPC", cell(r.ahpc)},   {"AHRC", cell(r.ahrc)},
      {"F1Adj", cell(r.f1adj)}, {"F1All", cell(r.f1all)}, {"SHD", std::to_string(r.shd)},
      {"Elapsed", cell(r.elapsedSeconds)}};
  for (const auto& [name, _] : cols) out << std::setw(8) << name;
  out << "\n";
  for (const auto& [_, value] : cols) out << std::setw(8) << value;
  out << "\n";
  return out.str();
}

}  // namespace bfcausal
