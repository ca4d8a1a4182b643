#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "bfcausal/bfcausal.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Basis-function causal structure search (BF-BIC / BF-LRT)"};

  std::string algorithm;
  std::string dataPath, truthPath, knowledgePath, outGraph, outMetrics, gridPath, simText;
  int truncation = 3;
  double penalty = 1.0;
  double alpha = 0.01;
  int maxDepth = 3;
  std::uint64_t seed = 0;
  double timeout = 0.0;

  app.add_option("--algorithm", algorithm, "Search algorithm: boss or pcmax");
  app.add_option("--data", dataPath, "Input CSV path (or export path with --sim)");
  app.add_option("--truth", truthPath, "True-graph text file (or export path with --sim)");
  app.add_option("--knowledge", knowledgePath, "Tier/forbid/require knowledge file");
  app.add_option("--truncation", truncation, "Basis truncation limit p")->capture_default_str();
  auto* penaltyOpt = app.add_option("--penalty", penalty, "BIC penalty discount c (boss)");
  auto* alphaOpt = app.add_option("--alpha", alpha, "Test significance level (pcmax)");
  app.add_option("--max-depth", maxDepth, "Max conditioning set size (pcmax)")->capture_default_str();
  app.add_option("--seed", seed, "Random seed")->capture_default_str();
  app.add_option("--timeout", timeout, "Fail if the search exceeds this many seconds");
  app.add_option("--out-graph", outGraph, "Where to write the estimated graph");
  app.add_option("--out-metrics", outMetrics,
                 "Metrics JSON path; with --grid, the prefix for the report CSVs");
  app.add_option("--grid", gridPath, "Benchmark grid JSON; runs the full grid instead of one search");
  app.add_option("--sim", simText,
                 "Simulate data: nodes=..,edges=..,n=..,type=continuous|mixed,mprob=..");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!gridPath.empty()) {
      const std::string prefix = outMetrics.empty() ? "benchmark" : outMetrics;
      bfcausal::run_benchmark(gridPath, prefix);
      std::cout << "wrote " << prefix << "_runs.csv, " << prefix << "_avg.csv, " << prefix
                << "_best.csv\n";
      return 0;
    }

    if (algorithm.empty()) {
      if (!simText.empty()) {
        // Generation-only mode: export the simulated data and truth.
        bfcausal::SimSpec s = bfcausal::parse_sim_spec(simText);
        const bfcausal::Graph dag = bfcausal::random_dag(s.nodes, s.edges, seed);
        bfcausal::CpnSpec spec;
        spec.multinomialProb = s.mprob;
        spec.seed = seed;
        auto [table, truthDag] = bfcausal::cpn_generate(dag, spec, s.n);
        if (dataPath.empty()) throw bfcausal::InvalidConfigError("--sim without --algorithm needs --data to export to");
        bfcausal::write_csv(table, dataPath);
        if (!truthPath.empty()) bfcausal::write_graph_file(truthDag, truthPath);
        std::cout << "wrote " << dataPath << " (" << table.rowCount() << " rows, "
                  << table.columnCount() << " columns)\n";
        return 0;
      }
      throw bfcausal::InvalidConfigError("--algorithm is required (boss or pcmax)");
    }

    bfcausal::RunConfig cfg;
    if (algorithm == "boss") {
      cfg.algorithm = bfcausal::RunConfig::Algorithm::Boss;
      if (penaltyOpt->count() == 0)
        throw bfcausal::InvalidConfigError("--algorithm boss requires --penalty");
    } else if (algorithm == "pcmax") {
      cfg.algorithm = bfcausal::RunConfig::Algorithm::PcMax;
      if (alphaOpt->count() == 0)
        throw bfcausal::InvalidConfigError("--algorithm pcmax requires --alpha");
    } else {
      throw bfcausal::InvalidConfigError("unknown algorithm '" + algorithm + "' (boss or pcmax)");
    }
    cfg.dataPath = dataPath;
    cfg.truthPath = truthPath;
    cfg.knowledgePath = knowledgePath;
    cfg.truncationLimit = truncation;
    if (penaltyOpt->count() > 0) cfg.penaltyDiscount = penalty;
    if (alphaOpt->count() > 0) cfg.alpha = alpha;
    cfg.maxDepth = maxDepth;
    cfg.seed = seed;
    cfg.timeoutSeconds = timeout;
    cfg.outGraphPath = outGraph;
    cfg.outMetricsPath = outMetrics;
    if (!simText.empty()) cfg.sim = bfcausal::parse_sim_spec(simText);

    const bfcausal::RunOutcome out = bfcausal::run_search(cfg);
    std::cout << bfcausal::emit_graph(out.graph);
    if (out.metrics) std::cout << "\n" << bfcausal::metrics_to_table(*out.metrics);
    std::fprintf(stderr, "elapsed: %.3f s\n", out.elapsedSeconds);
    return 0;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
}
