#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <tuple>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "bfcausal/boss.hpp"
#include "bfcausal/csv.hpp"
#include "bfcausal/graph_io.hpp"
#include "bfcausal/metrics.hpp"
#include "bfcausal/pcmax.hpp"
#include "bfcausal/simulate.hpp"

namespace bfcausal {

/// Rebuilds g over the given variable ordering, matching variables by name.
inline Graph align_variables(const Graph& g, const std::vector<Variable>& vars) {
  if (static_cast<int>(vars.size()) != g.variableCount())
    throw VariableMismatchError("graphs have different variable counts");
  Graph out(vars, g.kindHint());
  const auto& src = g.variables();
  std::vector<int> map(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) map[i] = out.indexOf(src[i].name);
  for (const Edge& e : g.edges()) {
    if (g.hasDirected(e.a, e.b))
      out.addDirected(map[e.a], map[e.b]);
    else if (g.hasDirected(e.b, e.a))
      out.addDirected(map[e.b], map[e.a]);
    else
      out.addUndirected(map[e.a], map[e.b]);
  }
  return out;
}

/// Truth graphs given as DAGs are compared through their equivalence class.
inline Graph normalize_truth(const Graph& g) {
  bool allDirected = true;
  for (const Edge& e : g.edges())
    if (g.isUndirected(e.a, e.b)) allDirected = false;
  if (allDirected && is_acyclic(g)) return dag_to_cpdag(g);
  return g;
}

struct SimSpec {
  int nodes = 10;
  int edges = 10;
  int n = 1000;
  bool mixed = false;
  double mprob = 0.0;
};

/// Parses "nodes=10,edges=10,n=1000,type=continuous|mixed,mprob=0.2".
inline SimSpec parse_sim_spec(const std::string& text) {
  SimSpec s;
  bool mprobGiven = false;
  for (const std::string& part : detail::split(text, ',')) {
    const std::string kv = detail::trim(part);
    if (kv.empty()) continue;
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw InvalidConfigError("--sim expects key=value pairs, got '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    try {
      if (key == "nodes")
        s.nodes = std::stoi(value);
      else if (key == "edges")
        s.edges = std::stoi(value);
      else if (key == "n")
        s.n = std::stoi(value);
      else if (key == "type") {
        if (value == "continuous")
          s.mixed = false;
        else if (value == "mixed")
          s.mixed = true;
        else
          throw InvalidConfigError("--sim type must be continuous or mixed");
      } else if (key == "mprob") {
        s.mprob = std::stod(value);
        mprobGiven = true;
      } else
        throw InvalidConfigError("unknown --sim key '" + key + "'");
    } catch (const InvalidConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw InvalidConfigError("bad --sim value for '" + key + "'");
    }
  }
  if (!s.mixed && mprobGiven && s.mprob > 0.0)
    throw InvalidConfigError("--sim type=continuous cannot take mprob > 0");
  if (s.mixed && !mprobGiven) s.mprob = 0.2;
  if (!s.mixed) s.mprob = 0.0;
  return s;
}

struct RunConfig {
  enum class Algorithm { Boss, PcMax };
  Algorithm algorithm = Algorithm::Boss;
  std::string dataPath;
  std::string truthPath;
  std::string knowledgePath;
  int truncationLimit = 3;
  std::optional<double> penaltyDiscount;  // required for Boss
  std::optional<double> alpha;            // required for PcMax
  int maxDepth = 3;
  std::uint64_t seed = 0;
  double timeoutSeconds = 0.0;  // 0 disables the check
  std::string outGraphPath;
  std::string outMetricsPath;
  std::optional<SimSpec> sim;
};

struct RunOutcome {
  Graph graph;
  std::optional<MetricsReport> metrics;
  double elapsedSeconds = 0.0;
};

/// Loads or simulates data, embeds, dispatches to the chosen search, writes
/// requested outputs, and reports metrics when a truth graph is available.
inline RunOutcome run_search(const RunConfig& cfg) {
  if (cfg.truncationLimit < 1) throw InvalidConfigError("--truncation must be at least 1");
  if (cfg.maxDepth < 0) throw InvalidConfigError("--max-depth must be non-negative");
  if (cfg.algorithm == RunConfig::Algorithm::Boss && !cfg.penaltyDiscount)
    throw InvalidConfigError("boss requires --penalty");
  if (cfg.algorithm == RunConfig::Algorithm::PcMax && !cfg.alpha)
    throw InvalidConfigError("pcmax requires --alpha");

  DataTable table;
  std::optional<Graph> truth;
  if (cfg.sim) {
    const SimSpec& s = *cfg.sim;
    const Graph dag = random_dag(s.nodes, s.edges, cfg.seed);
    CpnSpec spec;
    spec.multinomialProb = s.mprob;
    spec.seed = cfg.seed;
    auto [t, truthDag] = cpn_generate(dag, spec, s.n);
    table = std::move(t);
    truth = truthDag;
    if (!cfg.dataPath.empty()) write_csv(table, cfg.dataPath);
    if (!cfg.truthPath.empty()) write_graph_file(truthDag, cfg.truthPath);
  } else {
    if (cfg.dataPath.empty()) throw InvalidConfigError("either --data or --sim is required");
    table = load_csv(cfg.dataPath);
    if (!cfg.truthPath.empty()) truth = read_graph_file(cfg.truthPath);
  }

  Knowledge know;
  if (!cfg.knowledgePath.empty()) know = read_knowledge_file(cfg.knowledgePath, table.variables);

  DataTable prepared = scale_columns(compact_categories(table));

  const auto start = std::chrono::steady_clock::now();
  const EmbeddedData e = embed_dataset(prepared, BasisSpec{cfg.truncationLimit});
  Graph result;
  if (cfg.algorithm == RunConfig::Algorithm::Boss) {
    ScoreConfig sc;
    sc.penaltyDiscount = *cfg.penaltyDiscount;
    sc.basis.truncationLimit = cfg.truncationLimit;
    result = boss_search(e, sc, know, cfg.seed);
  } else {
    TestConfig tc;
    tc.alpha = *cfg.alpha;
    tc.basis.truncationLimit = cfg.truncationLimit;
    result = pcmax_search(e, tc, know, cfg.maxDepth);
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (cfg.timeoutSeconds > 0.0 && elapsed > cfg.timeoutSeconds)
    throw TimeoutExceededError("search took " + std::to_string(elapsed) + " s, limit " +
                               std::to_string(cfg.timeoutSeconds) + " s");

  RunOutcome out{std::move(result), std::nullopt, elapsed};
  if (truth) {
    const Graph aligned = normalize_truth(align_variables(*truth, out.graph.variables()));
    MetricsReport r = compare_graphs(out.graph, aligned);
    r.elapsedSeconds = elapsed;
    out.metrics = r;
  }

  if (!cfg.outGraphPath.empty()) write_graph_file(out.graph, cfg.outGraphPath);
  if (!cfg.outMetricsPath.empty()) {
    std::ofstream mf(cfg.outMetricsPath, std::ios::binary);
    if (!mf) throw ParseError("cannot open '" + cfg.outMetricsPath + "' for writing");
    if (out.metrics)
      mf << metrics_to_json(*out.metrics).dump(2) << "\n";
    else
      mf << nlohmann::json{{"elapsed", elapsed}}.dump(2) << "\n";
  }
  return out;
}

namespace detail {

struct GridCell {
  std::string scale, type, label, algorithm;
  int nodes = 0, edges = 0, sampleSize = 0;
  double mprob = 0.0;
  std::string generator;  // "cpn" or "additive"
  int truncation = 3;
  double penalty = 0.0;  // boss cells
  double alpha = 0.0;    // pcmax cells
  int maxDepth = 3;
};

inline std::string opt_cell(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", *v);
  return buf;
}

inline std::string num6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace detail

/// Runs every grid cell for every seed, streaming long-format rows to
/// <outPrefix>_runs.csv as they finish; then writes seed-averaged rows to
/// <outPrefix>_avg.csv and the per-scenario best rows (by mean F1Adj, ties
/// to the smaller penalty or alpha) to <outPrefix>_best.csv in the layout
/// Scale, Type, Label, sample_size, trunc_limit, penalty, alpha.
inline void run_benchmark(const std::string& gridPath, const std::string& outPrefix) {
  std::ifstream in(gridPath, std::ios::binary);
  if (!in) throw ParseError("cannot open grid file '" + gridPath + "'");
  nlohmann::json grid;
  try {
    in >> grid;
  } catch (const std::exception& ex) {
    throw ParseError(std::string("grid file is not valid json: ") + ex.what());
  }
  const nlohmann::json scenarios = grid.is_array() ? grid : grid.value("scenarios", nlohmann::json::array());
  if (!scenarios.is_array() || scenarios.empty())
    throw InvalidConfigError("grid file lists no scenarios");

  std::ofstream runsOut(outPrefix + "_runs.csv", std::ios::binary);
  if (!runsOut) throw ParseError("cannot open '" + outPrefix + "_runs.csv' for writing");
  runsOut << "scale,type,label,algorithm,nodes,edges,sample_size,trunc_limit,penalty,alpha,seed,"
             "ap,ar,ahp,ahr,ahpc,ahrc,f1adj,f1all,shd,elapsed\n";

  struct CellResult {
    detail::GridCell cell;
    std::vector<MetricsReport> reports;
  };
  std::vector<CellResult> results;

  for (const auto& sc : scenarios) {
    const std::string algorithm = sc.value("algorithm", "boss");
    if (algorithm != "boss" && algorithm != "pcmax")
      throw InvalidConfigError("scenario algorithm must be boss or pcmax");
    const int nodes = sc.value("nodes", 10);
    const int edges = sc.value("edges", 10);
    const std::string type = sc.value("type", "continuous");
    const double mprob = type == "mixed" ? sc.value("mprob", 0.2) : 0.0;
    const std::string generator = sc.value("generator", "cpn");
    if (generator != "cpn" && generator != "additive")
      throw InvalidConfigError("scenario generator must be cpn or additive");
    std::string label = sc.value("label", "");
    if (label.empty()) {
      const int degree = nodes > 0 ? (2 * edges) / nodes : 0;
      label = (algorithm == "boss" ? "BOSS-BF-BIC " : "PC-MAX-BF-LRT ") + std::to_string(nodes) +
              ":" + std::to_string(degree);
    }
    const std::string scale = sc.value("scale", "small");
    const int maxDepth = sc.value("maxDepth", 3);
    const std::vector<int> sampleSizes = sc.value("sampleSizes", std::vector<int>{1000});
    const std::vector<int> truncations = sc.value("truncations", std::vector<int>{3});
    const std::vector<double> penalties = sc.value("penalties", std::vector<double>{1.0});
    const std::vector<double> alphas = sc.value("alphas", std::vector<double>{0.01});
    const std::vector<std::uint64_t> seeds = sc.value("seeds", std::vector<std::uint64_t>{1});

    for (int n : sampleSizes) {
      for (int trunc : truncations) {
        const std::vector<double>& sweep = algorithm == "boss" ? penalties : alphas;
        for (double param : sweep) {
          detail::GridCell cell;
          cell.scale = scale;
          cell.type = type;
          cell.label = label;
          cell.algorithm = algorithm;
          cell.nodes = nodes;
          cell.edges = edges;
          cell.sampleSize = n;
          cell.mprob = mprob;
          cell.generator = generator;
          cell.truncation = trunc;
          cell.maxDepth = maxDepth;
          if (algorithm == "boss")
            cell.penalty = param;
          else
            cell.alpha = param;

          CellResult cr;
          cr.cell = cell;
          for (std::uint64_t seed : seeds) {
            const Graph dag = random_dag(nodes, edges, seed);
            DataTable table;
            Graph truthDag;
            // Scale-5 CPN inputs make softmax heads modal enough that a
            // categorical column sometimes shows a single level (~10% of
            // mixed draws); redraw the data, not the graph, so seed sweeps
            // survive. A stuck draw falls through to the embedding error.
            for (int attempt = 0; attempt < 50; ++attempt) {
              const std::uint64_t dataSeed =
                  attempt == 0 ? seed : mix_seed(seed, 900000u + static_cast<std::uint64_t>(attempt));
              if (generator == "cpn") {
                CpnSpec spec;
                spec.multinomialProb = mprob;
                spec.seed = dataSeed;
                auto [t, td] = cpn_generate(dag, spec, n);
                table = std::move(t);
                truthDag = std::move(td);
              } else {
                auto [t, td] = additive_sem_generate(dag, n, NoiseSpec::gaussian(0.5), "", dataSeed);
                table = std::move(t);
                truthDag = std::move(td);
              }
              bool degenerate = false;
              for (std::size_t c = 0; c < table.columns.size() && !degenerate; ++c) {
                if (table.variables[c].kind != VarKind::Categorical) continue;
                bool varies = false;
                for (std::size_t r = 1; r < table.columns[c].size() && !varies; ++r)
                  varies = table.columns[c][r] != table.columns[c][0];
                degenerate = !varies;
              }
              if (!degenerate) break;
            }
            const DataTable prepared = scale_columns(compact_categories(table));
            const auto start = std::chrono::steady_clock::now();
            const EmbeddedData e = embed_dataset(prepared, BasisSpec{trunc});
            Graph est;
            if (algorithm == "boss") {
              ScoreConfig scfg;
              scfg.penaltyDiscount = cell.penalty;
              scfg.basis.truncationLimit = trunc;
              est = boss_search(e, scfg, Knowledge(), seed);
            } else {
              TestConfig tcfg;
              tcfg.alpha = cell.alpha;
              tcfg.basis.truncationLimit = trunc;
              est = pcmax_search(e, tcfg, Knowledge(), maxDepth);
            }
            const double elapsed =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            MetricsReport r = compare_graphs(est, dag_to_cpdag(truthDag));
            r.elapsedSeconds = elapsed;
            cr.reports.push_back(r);

            runsOut << cell.scale << "," << cell.type << "," << cell.label << "," << cell.algorithm
                    << "," << cell.nodes << "," << cell.edges << "," << cell.sampleSize << ","
                    << cell.truncation << ","
                    << (algorithm == "boss" ? detail::num6(cell.penalty) : "*") << ","
                    << (algorithm == "pcmax" ? detail::num6(cell.alpha) : "*") << "," << seed << ","
                    << detail::opt_cell(r.ap) << "," << detail::opt_cell(r.ar) << ","
                    << detail::opt_cell(r.ahp) << "," << detail::opt_cell(r.ahr) << ","
                    << detail::opt_cell(r.ahpc) << "," << detail::opt_cell(r.ahrc) << ","
                    << detail::opt_cell(r.f1adj) << "," << detail::opt_cell(r.f1all) << "," << r.shd
                    << "," << detail::num6(r.elapsedSeconds) << "\n";
            runsOut.flush();
          }
          results.push_back(std::move(cr));
        }
      }
    }
  }

  auto meanOf = [](const std::vector<MetricsReport>& rs, auto pick) -> std::optional<double> {
    double sum = 0.0;
    int k = 0;
    for (const auto& r : rs) {
      const std::optional<double> v = pick(r);
      if (v) {
        sum += *v;
        ++k;
      }
    }
    if (k == 0) return std::nullopt;
    return sum / k;
  };

  std::ofstream avgOut(outPrefix + "_avg.csv", std::ios::binary);
  if (!avgOut) throw ParseError("cannot open '" + outPrefix + "_avg.csv' for writing");
  avgOut << "scale,type,label,algorithm,nodes,edges,sample_size,trunc_limit,penalty,alpha,seeds,"
            "ap,ar,ahp,ahr,ahpc,ahrc,f1adj,f1all,shd,elapsed\n";
  struct AvgRow {
    detail::GridCell cell;
    std::optional<double> f1adj;
  };
  std::vector<AvgRow> avgRows;
  for (const auto& cr : results) {
    const auto& rs = cr.reports;
    auto mAp = meanOf(rs, [](const MetricsReport& r) { return r.ap; });
    auto mAr = meanOf(rs, [](const MetricsReport& r) { return r.ar; });
    auto mAhp = meanOf(rs, [](const MetricsReport& r) { return r.ahp; });
    auto mAhr = meanOf(rs, [](const MetricsReport& r) { return r.ahr; });
    auto mAhpc = meanOf(rs, [](const MetricsReport& r) { return r.ahpc; });
    auto mAhrc = meanOf(rs, [](const MetricsReport& r) { return r.ahrc; });
    auto mF1adj = meanOf(rs, [](const MetricsReport& r) { return r.f1adj; });
    auto mF1all = meanOf(rs, [](const MetricsReport& r) { return r.f1all; });
    double shdSum = 0.0, elapsedSum = 0.0;
    for (const auto& r : rs) {
      shdSum += r.shd;
      elapsedSum += r.elapsedSeconds;
    }
    const double mShd = rs.empty() ? 0.0 : shdSum / rs.size();
    const double mElapsed = rs.empty() ? 0.0 : elapsedSum / rs.size();
    const auto& c = cr.cell;
    avgOut << c.scale << "," << c.type << "," << c.label << "," << c.algorithm << "," << c.nodes
           << "," << c.edges << "," << c.sampleSize << "," << c.truncation << ","
           << (c.algorithm == "boss" ? detail::num6(c.penalty) : "*") << ","
           << (c.algorithm == "pcmax" ? detail::num6(c.alpha) : "*") << "," << rs.size() << ","
           << detail::opt_cell(mAp) << "," << detail::opt_cell(mAr) << "," << detail::opt_cell(mAhp)
           << "," << detail::opt_cell(mAhr) << "," << detail::opt_cell(mAhpc) << ","
           << detail::opt_cell(mAhrc) << "," << detail::opt_cell(mF1adj) << ","
           << detail::opt_cell(mF1all) << "," << detail::num6(mShd) << ","
           << detail::num6(mElapsed) << "\n";
    avgRows.push_back({c, mF1adj});
  }

  // Best cell per (scenario label, sample size), selected by mean F1Adj;
  // scan order makes ties fall to the smaller penalty/alpha, then smaller
  // truncation limit.
  std::sort(avgRows.begin(), avgRows.end(), [](const AvgRow& a, const AvgRow& b) {
    const auto ka = std::tie(a.cell.scale, a.cell.type, a.cell.label, a.cell.sampleSize);
    const auto kb = std::tie(b.cell.scale, b.cell.type, b.cell.label, b.cell.sampleSize);
    if (ka != kb) return ka < kb;
    const double pa = a.cell.algorithm == "boss" ? a.cell.penalty : a.cell.alpha;
    const double pb = b.cell.algorithm == "boss" ? b.cell.penalty : b.cell.alpha;
    if (pa != pb) return pa < pb;
    return a.cell.truncation < b.cell.truncation;
  });
  std::ofstream bestOut(outPrefix + "_best.csv", std::ios::binary);
  if (!bestOut) throw ParseError("cannot open '" + outPrefix + "_best.csv' for writing");
  bestOut << "Scale,Type,Label,sample_size,trunc_limit,penalty,alpha\n";
  std::size_t i = 0;
  while (i < avgRows.size()) {
    std::size_t j = i;
    std::size_t best = i;
    double bestF1 = avgRows[i].f1adj.value_or(-1.0);
    const auto key = [](const AvgRow& r) {
      return std::tie(r.cell.scale, r.cell.type, r.cell.label, r.cell.sampleSize);
    };
    while (j < avgRows.size() && key(avgRows[j]) == key(avgRows[i])) {
      const double f1 = avgRows[j].f1adj.value_or(-1.0);
      if (f1 > bestF1) {
        bestF1 = f1;
        best = j;
      }
      ++j;
    }
    const auto& c = avgRows[best].cell;
    bestOut << c.scale << "," << (c.type == "mixed" ? "Mixed" : "Continuous") << "," << c.label
            << "," << c.sampleSize << "," << c.truncation << ","
            << (c.algorithm == "boss" ? detail::num6(c.penalty) : "*") << ","
            << (c.algorithm == "pcmax" ? detail::num6(c.alpha) : "*") << "\n";
    i = j;
  }
}

}  // namespace bfcausal
