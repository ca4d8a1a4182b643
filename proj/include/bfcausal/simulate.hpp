#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bfcausal/data_table.hpp"
#include "bfcausal/graph.hpp"
#include "bfcausal/rng.hpp"

namespace bfcausal {

/// Noise distribution for structural equations. Default Beta(2,5).
struct NoiseSpec {
  enum class Family { Beta, Gaussian };
  Family family = Family::Beta;
  double a = 2.0;
  double b = 5.0;
  double sigma = 1.0;

  static NoiseSpec betaNoise(double a, double b) {
    NoiseSpec s;
    s.family = Family::Beta;
    s.a = a;
    s.b = b;
    return s;
  }

  static NoiseSpec gaussian(double sigma) {
    NoiseSpec s;
    s.family = Family::Gaussian;
    s.sigma = sigma;
    return s;
  }

  double sample(Rng& rng) const {
    if (family == Family::Beta) return rng.beta(a, b);
    if (sigma <= 0.0) throw InvalidShapeError("gaussian noise sigma must be positive");
    return rng.normal(0.0, sigma);
  }
};

inline double sample_beta(double a, double b, Rng& rng) { return rng.beta(a, b); }

/// Uniformly random DAG: shuffle a node order, then pick numEdges of the
/// order-respecting pairs uniformly without replacement.
inline Graph random_dag(int numNodes, int numEdges, std::uint64_t seed) {
  if (numNodes < 1) throw InvalidConfigError("need at least one node");
  const long maxEdges = static_cast<long>(numNodes) * (numNodes - 1) / 2;
  if (numEdges < 0 || numEdges > maxEdges)
    throw TooManyEdgesError(std::to_string(numEdges) + " edges requested; 0.." +
                            std::to_string(maxEdges) + " possible on " + std::to_string(numNodes) +
                            " nodes");
  std::vector<Variable> vars(numNodes);
  for (int i = 0; i < numNodes; ++i)
    vars[i] = Variable{i, "X" + std::to_string(i + 1), VarKind::Continuous, 0};

  Rng rng(seed);
  std::vector<int> order(numNodes);
  for (int i = 0; i < numNodes; ++i) order[i] = i;
  rng.shuffle(order);

  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(maxEdges);
  for (int i = 0; i < numNodes; ++i)
    for (int j = i + 1; j < numNodes; ++j) pairs.push_back({order[i], order[j]});
  rng.shuffle(pairs);

  Graph g(vars, GraphKind::Dag);
  for (int e = 0; e < numEdges; ++e) g.addDirected(pairs[e].first, pairs[e].second);
  return g;
}

inline Eigen::VectorXd stable_softmax(const Eigen::VectorXd& logits) {
  const Eigen::VectorXd shifted = logits.array() - logits.maxCoeff();
  const Eigen::VectorXd ex = shifted.array().exp();
  return ex / ex.sum();
}

inline int sample_categorical(const Eigen::VectorXd& probs, Rng& rng) {
  const double u = rng.uniform();
  double cum = 0.0;
  for (int i = 0; i < probs.size(); ++i) {
    cum += probs(i);
    if (u < cum) return i;
  }
  return static_cast<int>(probs.size()) - 1;
}

struct CpnSpec {
  int hiddenLayers = 5;
  int hiddenWidth = 50;
  double inputScale = 5.0;
  double leakySlope = 0.01;
  double multinomialProb = 0.0;
  NoiseSpec noise;
  std::uint64_t seed = 0;
};

struct MlpLayer {
  Eigen::MatrixXd weight;
  Eigen::VectorXd bias;
};

/// Random MLP with leaky-rectifier hidden activations and a linear output
/// layer. Weights use fan-in-scaled (Kaiming) normal initialization with the
/// leaky-rectifier gain; biases start at zero.
struct MlpNetwork {
  std::vector<MlpLayer> layers;
  double leakySlope = 0.01;

  static MlpNetwork random(int inputWidth, int outputWidth, const CpnSpec& spec, Rng& rng) {
    if (spec.hiddenLayers < 1 || spec.hiddenWidth < 1)
      throw InvalidConfigError("network needs at least one hidden layer and one neuron");
    MlpNetwork net;
    net.leakySlope = spec.leakySlope;
    std::vector<int> widths;
    widths.push_back(inputWidth);
    for (int l = 0; l < spec.hiddenLayers; ++l) widths.push_back(spec.hiddenWidth);
    widths.push_back(outputWidth);
    const double gain = std::sqrt(2.0 / (1.0 + spec.leakySlope * spec.leakySlope));
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
      MlpLayer layer;
      layer.weight.resize(widths[l + 1], widths[l]);
      const double sd = gain / std::sqrt(static_cast<double>(widths[l]));
      for (int r = 0; r < layer.weight.rows(); ++r)
        for (int c = 0; c < layer.weight.cols(); ++c) layer.weight(r, c) = rng.normal(0.0, sd);
      layer.bias = Eigen::VectorXd::Zero(widths[l + 1]);
      net.layers.push_back(std::move(layer));
    }
    return net;
  }

  Eigen::VectorXd forward(Eigen::VectorXd x) const {
    for (std::size_t l = 0; l < layers.size(); ++l) {
      x = layers[l].weight * x + layers[l].bias;
      if (l + 1 < layers.size())
        x = x.unaryExpr([this](double v) { return v > 0.0 ? v : leakySlope * v; });
    }
    return x;
  }
};

/// Recursive SEM with MLP structural functions. Each node gets a random
/// network whose inputs are its parents plus one noise term, all multiplied
/// by inputScale; values propagate in topological order. Nodes are made
/// multinomial with probability multinomialProb (2..5 categories), sampled
/// from the stabilized softmax of the network's logits; categorical values
/// feed children as raw integer codes. Rows draw from independent substreams
/// of (seed, rowIndex), so generation is reproducible and parallelizable.
inline std::pair<DataTable, Graph> cpn_generate(const Graph& g, const CpnSpec& spec, int n) {
  if (n < 1) throw InvalidConfigError("need at least one sample row");
  if (spec.multinomialProb < 0.0 || spec.multinomialProb > 1.0)
    throw InvalidConfigError("multinomialProb must lie in [0,1]");
  const std::vector<int> topo = topological_order(g);  // rejects cyclic input
  const int numNodes = g.variableCount();

  Rng structRng(spec.seed);
  std::vector<Variable> vars = g.variables();
  std::vector<int> numCats(numNodes, 0);
  for (int v = 0; v < numNodes; ++v) {
    const bool multinomial = structRng.uniform() < spec.multinomialProb;
    if (multinomial) {
      numCats[v] = 2 + static_cast<int>(structRng.below(4));
      vars[v].kind = VarKind::Categorical;
      vars[v].numCategories = numCats[v];
    } else {
      vars[v].kind = VarKind::Continuous;
      vars[v].numCategories = 0;
    }
  }
  std::vector<MlpNetwork> nets;
  nets.reserve(numNodes);
  for (int v = 0; v < numNodes; ++v) {
    const int inWidth = static_cast<int>(g.parents(v).size()) + 1;
    const int outWidth = numCats[v] > 0 ? numCats[v] : 1;
    nets.push_back(MlpNetwork::random(inWidth, outWidth, spec, structRng));
  }

  DataTable t;
  t.variables = vars;
  t.columns.assign(numNodes, std::vector<double>(n, 0.0));
  std::vector<double> value(numNodes, 0.0);
  for (int row = 0; row < n; ++row) {
    Rng rowRng(mix_seed(spec.seed, static_cast<std::uint64_t>(row)));
    for (int v : topo) {
      const std::vector<int> pa = g.parents(v);
      Eigen::VectorXd input(pa.size() + 1);
      for (std::size_t i = 0; i < pa.size(); ++i) input(static_cast<int>(i)) = value[pa[i]];
      input(static_cast<int>(pa.size())) = spec.noise.sample(rowRng);
      input *= spec.inputScale;
      const Eigen::VectorXd out = nets[v].forward(input);
      if (numCats[v] > 0)
        value[v] = static_cast<double>(sample_categorical(stable_softmax(out), rowRng));
      else
        value[v] = out(0);
      t.columns[v][row] = value[v];
    }
  }

  Graph truth(vars, GraphKind::Dag);
  for (const Edge& e : g.edges()) {
    if (g.hasDirected(e.a, e.b))
      truth.addDirected(e.a, e.b);
    else
      truth.addDirected(e.b, e.a);
  }
  return {std::move(t), std::move(truth)};
}

namespace detail {

/// One random edge function from the additive catalog. Inputs pass through a
/// squashing scale so downstream values stay bounded; the amplitude keeps a
/// floor so dependencies stay detectable at moderate sample sizes.
struct EdgeFunction {
  int shape = 0;       // 0 cubic, 1 quadratic, 2 sine, 3 tanh-like
  double amplitude = 1.0;
  double stretch = 1.0;

  static EdgeFunction random(Rng& rng) {
    EdgeFunction f;
    f.shape = static_cast<int>(rng.below(4));
    const double mag = 0.6 + 0.4 * rng.uniform();  // |amplitude| in [0.6, 1]
    f.amplitude = rng.uniform() < 0.5 ? -mag : mag;
    f.stretch = 0.8 + 0.6 * rng.uniform();  // in [0.8, 1.4]
    return f;
  }

  double operator()(double u) const {
    const double t = std::tanh(stretch * u);
    switch (shape) {
      case 0:
        return amplitude * t * t * t;
      case 1:
        return amplitude * t * t;
      case 2:
        return amplitude * std::sin(1.5 * stretch * u);
      default:
        return amplitude * t;
    }
  }
};

inline double pnl_apply(int id, double y) {
  switch (id) {
    case 0:
      return y;
    case 1:
      return std::cbrt(y);
    default:
      return std::sinh(0.8 * y);
  }
}

}  // namespace detail

/// Resolves a post-nonlinear transform name; empty means no transform.
inline int pnl_transform_id(const std::string& name) {
  if (name.empty() || name == "none") return -1;
  if (name == "identity") return 0;
  if (name == "cbrt") return 1;
  if (name == "sinh") return 2;
  throw InvalidConfigError("unknown pnl transform '" + name + "' (identity, cbrt, sinh)");
}

/// Additive SEM: each node is the sum of one random catalog function per
/// parent edge plus independent noise, optionally passed through an
/// invertible post-nonlinear transform.
inline std::pair<DataTable, Graph> additive_sem_generate(const Graph& g, int n,
                                                         const NoiseSpec& noise,
                                                         const std::string& pnl,
                                                         std::uint64_t seed) {
  if (n < 1) throw InvalidConfigError("need at least one sample row");
  const int pnlId = pnl_transform_id(pnl);
  const std::vector<int> topo = topological_order(g);
  const int numNodes = g.variableCount();

  Rng structRng(seed);
  std::map<std::pair<int, int>, detail::EdgeFunction> funcs;
  for (int v = 0; v < numNodes; ++v)
    for (int p : g.parents(v)) funcs[{p, v}] = detail::EdgeFunction::random(structRng);

  DataTable t;
  t.variables = g.variables();
  for (auto& var : t.variables) {
    var.kind = VarKind::Continuous;
    var.numCategories = 0;
  }
  t.columns.assign(numNodes, std::vector<double>(n, 0.0));
  std::vector<double> value(numNodes, 0.0);
  for (int row = 0; row < n; ++row) {
    Rng rowRng(mix_seed(seed, static_cast<std::uint64_t>(row)));
    for (int v : topo) {
      double y = noise.sample(rowRng);
      for (int p : g.parents(v)) y += funcs.at({p, v})(value[p]);
      if (pnlId >= 0) y = detail::pnl_apply(pnlId, y);
      value[v] = y;
      t.columns[v][row] = y;
    }
  }

  Graph truth(t.variables, GraphKind::Dag);
  for (const Edge& e : g.edges()) {
    if (g.hasDirected(e.a, e.b))
      truth.addDirected(e.a, e.b);
    else
      truth.addDirected(e.b, e.a);
  }
  return {std::move(t), std::move(truth)};
}

}  // namespace bfcausal
