#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "specdet/eigen.hpp"
#include "specdet/graph.hpp"

namespace specdet {

enum class Method { kSpectral, kModularity, kOracle, kBaseline };

std::string_view to_string(Method m);

// Node -> community assignment. For a bisection labels are 0/1 and sizes
// holds (n1_hat, n2_hat); recursive partitions carry one size per community.
struct Partition {
  Labels labels;
  std::vector<std::size_t> sizes;
  std::vector<Edge> cut_edges;  // edges whose endpoints carry different labels
  Method method = Method::kOracle;

  std::size_t communities() const noexcept { return sizes.size(); }
};

// Labels must be 0..k-1 with every id used.
Partition make_partition(const Graph& g, Labels labels, Method method);

struct TwoMeans {
  double threshold = 0.0;  // midpoint of the gap between the clusters
  Labels labels;           // 0 for the cluster holding the smallest value
  double cost = 0.0;       // within-cluster sum of squares
};

// Exact 1-D 2-means by sorting and scanning every split point. Among equal
// costs the split with the smaller left cluster wins. Values whose spread is
// at most rel_tol times their magnitude count as all equal and raise
// Error{DegenerateInput}.
TwoMeans two_means_1d(std::span<const double> values, double rel_tol = 0.0);

struct DetectReport {
  Partition partition;
  std::optional<double> detectability;  // present when truth was supplied
  std::optional<double> baseline;       // largest truth class over n
  double eigenvalue = 0.0;  // lambda_2(L) for spectral, top eigenvalue of B for modularity
  Eigen::VectorXd embedding;  // the vector that was clustered
};

// Spectral bisection: Fiedler vector, then exact 2-means on its entries.
// Throws Error{DisconnectedGraph} for a disconnected graph.
DetectReport spectral_bisect(const Graph& g, std::span<const int> truth = {},
                             const SolverOptions& options = {});

// Bisection by the leading eigenvector of the modularity matrix.
DetectReport modularity_bisect(const Graph& g, std::span<const int> truth = {},
                               const SolverOptions& options = {});

// Fraction of nodes whose predicted community maps onto their true one, under
// the best one-to-one relabelling of predicted ids. Negative truth labels
// (unlabelled or neutral nodes) always count as wrong. With two classes this
// is the max over the label swap.
double detectability(std::span<const int> predicted, std::span<const int> truth);

// max_k |{i : truth_i = k}| / n over nonnegative truth labels.
double baseline_fraction(std::span<const int> truth);

struct BisectionRound {
  Partition partition;            // overall labelling after this round
  std::vector<Node> target;       // parent indices of the community that was split
  Partition local;                // bisection of the target's induced subgraph
  double fiedler_value = 0.0;     // lambda_2 of the target subgraph
  bool split_by_components = false;  // target was disconnected; split by components
};

// Repeatedly bisects the largest current community (lowest id on ties).
// The side labelled 1 by the local bisection becomes a new community. A
// disconnected target is split into its components instead and the process
// stops there.
std::vector<BisectionRound> recursive_bisect(const Graph& g, std::size_t rounds,
                                             const SolverOptions& options = {});

}  // namespace specdet
