#include "specdet/detect.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numeric>
#include <string>

#include "specdet/error.hpp"

namespace specdet {
namespace {

// Spread below this fraction of the vector's magnitude means the embedding
// carries no split.
constexpr double kEmbeddingSpreadTol = 1e-9;
constexpr std::size_t kMaxAlignClasses = 10;

void require_truth_length(const Graph& g, std::span<const int> truth) {
  if (!truth.empty() && truth.size() != g.node_count()) {
    throw Error(ErrorCode::kLengthMismatch, "truth labels do not match the node count");
  }
}

DetectReport finish(const Graph& g, const Eigen::VectorXd& embedding, double eigenvalue,
                    Method method, std::span<const int> truth) {
  std::vector<double> values(embedding.data(), embedding.data() + embedding.size());
  TwoMeans split = two_means_1d(values, kEmbeddingSpreadTol);
  DetectReport report;
  report.partition = make_partition(g, std::move(split.labels), method);
  report.eigenvalue = eigenvalue;
  report.embedding = embedding;
  if (!truth.empty()) {
    report.detectability = detectability(report.partition.labels, truth);
    report.baseline = baseline_fraction(truth);
  }
  return report;
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kSpectral: return "spectral";
    case Method::kModularity: return "modularity";
    case Method::kOracle: return "oracle";
    case Method::kBaseline: return "baseline";
  }
  return "unknown";
}

Partition make_partition(const Graph& g, Labels labels, Method method) {
  if (labels.size() != g.node_count()) {
    throw Error(ErrorCode::kLengthMismatch, "labels do not match the node count");
  }
  Partition part;
  for (int label : labels) {
    if (label < 0) throw Error(ErrorCode::kInvalidParams, "community ids must be nonnegative");
    const auto id = static_cast<std::size_t>(label);
    if (id >= part.sizes.size()) part.sizes.resize(id + 1, 0);
    ++part.sizes[id];
  }
  if (std::find(part.sizes.begin(), part.sizes.end(), 0u) != part.sizes.end()) {
    throw Error(ErrorCode::kDegenerateLabeling, "community ids must be contiguous from 0");
  }
  for (const auto& [u, v] : g.edges()) {
    if (labels[u] != labels[v]) part.cut_edges.emplace_back(u, v);
  }
  part.labels = std::move(labels);
  part.method = method;
  return part;
}

TwoMeans two_means_1d(std::span<const double> values, double rel_tol) {
  const std::size_t n = values.size();
  if (n < 2) throw Error(ErrorCode::kInvalidParams, "two-means needs at least two values");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  const double lo = values[order.front()];
  const double hi = values[order.back()];
  const double magnitude = std::max(std::abs(lo), std::abs(hi));
  if (!(hi - lo > rel_tol * magnitude) || hi == lo) {
    throw Error(ErrorCode::kDegenerateInput, "all values are equal");
  }

  // Centre first so the prefix-sum costs do not cancel catastrophically.
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> sorted(n);
  for (std::size_t i = 0; i < n; ++i) sorted[i] = values[order[i]] - mean;

  double total = 0.0, total_sq = 0.0;
  for (double v : sorted) {
    total += v;
    total_sq += v * v;
  }

  double best = std::numeric_limits<double>::infinity();
  std::size_t best_left = 0;
  double left = 0.0, left_sq = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    left += sorted[k - 1];
    left_sq += sorted[k - 1] * sorted[k - 1];
    // Equal values must share a cluster.
    if (!(sorted[k] > sorted[k - 1])) continue;
    const double nl = static_cast<double>(k);
    const double nr = static_cast<double>(n - k);
    const double right = total - left;
    const double right_sq = total_sq - left_sq;
    const double cost = (left_sq - left * left / nl) + (right_sq - right * right / nr);
    if (cost < best) {
      best = cost;
      best_left = k;
    }
  }

  TwoMeans out;
  out.labels.assign(n, 1);
  for (std::size_t i = 0; i < best_left; ++i) out.labels[order[i]] = 0;
  out.threshold = 0.5 * (values[order[best_left - 1]] + values[order[best_left]]);
  out.cost = std::max(best, 0.0);
  return out;
}

DetectReport spectral_bisect(const Graph& g, std::span<const int> truth,
                             const SolverOptions& options) {
  require_truth_length(g, truth);
  if (g.node_count() < 2) throw Error(ErrorCode::kInvalidParams, "bisection needs n >= 2");
  if (!is_connected(g)) {
    throw Error(ErrorCode::kDisconnectedGraph, "spectral bisection needs a connected graph");
  }
  const LaplacianView lap(g);
  const FiedlerResult f = fiedler(lap, options);
  return finish(g, f.pair.vector, f.pair.value, Method::kSpectral, truth);
}

DetectReport modularity_bisect(const Graph& g, std::span<const int> truth,
                               const SolverOptions& options) {
  require_truth_length(g, truth);
  if (g.node_count() < 2) throw Error(ErrorCode::kInvalidParams, "bisection needs n >= 2");
  const ModularityView b(g);
  const EigenPair top = leading_eigenvector(b, options);
  return finish(g, top.vector, top.value, Method::kModularity, truth);
}

double detectability(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size()) {
    throw Error(ErrorCode::kLengthMismatch, "predicted and truth labels differ in length");
  }
  if (predicted.empty()) throw Error(ErrorCode::kInvalidParams, "empty labelling");

  std::size_t kp = 0, kt = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] < 0) throw Error(ErrorCode::kInvalidParams, "predicted ids must be >= 0");
    kp = std::max(kp, static_cast<std::size_t>(predicted[i]) + 1);
    if (truth[i] >= 0) kt = std::max(kt, static_cast<std::size_t>(truth[i]) + 1);
  }
  const std::size_t k = std::max(kp, kt);
  if (k > kMaxAlignClasses) {
    throw Error(ErrorCode::kInvalidParams, "too many classes to align");
  }

  // confusion[a][b]: nodes predicted a with truth b
  std::vector<std::size_t> confusion(k * k, 0);
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (truth[i] < 0) continue;
    ++confusion[static_cast<std::size_t>(predicted[i]) * k + static_cast<std::size_t>(truth[i])];
  }
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = 0;
  do {
    std::size_t hits = 0;
    for (std::size_t a = 0; a < k; ++a) hits += confusion[a * k + perm[a]];
    best = std::max(best, hits);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(predicted.size());
}

double baseline_fraction(std::span<const int> truth) {
  if (truth.empty()) throw Error(ErrorCode::kInvalidParams, "empty labelling");
  std::vector<std::size_t> counts;
  for (int t : truth) {
    if (t < 0) continue;
    if (static_cast<std::size_t>(t) >= counts.size()) counts.resize(static_cast<std::size_t>(t) + 1, 0);
    ++counts[static_cast<std::size_t>(t)];
  }
  const std::size_t top = counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
  return static_cast<double>(top) / static_cast<double>(truth.size());
}

std::vector<BisectionRound> recursive_bisect(const Graph& g, std::size_t rounds,
                                             const SolverOptions& options) {
  if (rounds < 1) throw Error(ErrorCode::kInvalidParams, "rounds must be >= 1");
  const std::size_t n = g.node_count();
  if (n < 2) throw Error(ErrorCode::kInvalidParams, "bisection needs n >= 2");

  Labels labels(n, 0);
  std::vector<std::size_t> sizes{n};
  std::vector<BisectionRound> out;

  for (std::size_t r = 0; r < rounds; ++r) {
    const auto target_id = static_cast<int>(
        std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    if (sizes[static_cast<std::size_t>(target_id)] < 2) break;

    BisectionRound round;
    for (Node i = 0; i < n; ++i) {
      if (labels[i] == target_id) round.target.push_back(i);
    }
    const SubgraphIndex sub = induced_subgraph(g, round.target);
    const int next_id = static_cast<int>(sizes.size());

    if (!is_connected(sub.local)) {
      const std::vector<int> comp = connected_components(sub.local);
      const int count = *std::max_element(comp.begin(), comp.end()) + 1;
      round.local = make_partition(sub.local, comp, Method::kSpectral);
      round.split_by_components = true;
      sizes.resize(sizes.size() + static_cast<std::size_t>(count - 1), 0);
      sizes[static_cast<std::size_t>(target_id)] = 0;
      for (std::size_t j = 0; j < comp.size(); ++j) {
        const int id = comp[j] == 0 ? target_id : next_id + comp[j] - 1;
        labels[sub.nodes[j]] = id;
        ++sizes[static_cast<std::size_t>(id)];
      }
    } else {
      DetectReport local = spectral_bisect(sub.local, {}, options);
      round.fiedler_value = local.eigenvalue;
      sizes.push_back(0);
      for (std::size_t j = 0; j < sub.nodes.size(); ++j) {
        if (local.partition.labels[j] == 1) {
          labels[sub.nodes[j]] = next_id;
          --sizes[static_cast<std::size_t>(target_id)];
          ++sizes.back();
        }
      }
      round.local = std::move(local.partition);
    }
    round.partition = make_partition(g, labels, Method::kSpectral);
    const bool stop = round.split_by_components;
    out.push_back(std::move(round));
    if (stop) break;
  }
  return out;
}

}  // namespace specdet
