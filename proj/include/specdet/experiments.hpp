#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "specdet/eigen.hpp"
#include "specdet/generators.hpp"
#include "specdet/graph.hpp"
#include "specdet/random.hpp"

namespace specdet {

// Erdos-Renyi blocks for a sweep; the cross probability comes from the grid.
struct SbmBlocks {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  double p1 = 0.0;
  double p2 = 0.0;
};

struct WsBlocks {
  WsSpec first;
  WsSpec second;
};

using BlockModel = std::variant<SbmBlocks, WsBlocks>;

// Trial t draws its blocks from seed.stream(t) and reuses them at every grid
// point; the cross edges at grid index g come from seed.stream(t).stream(2 + g).
struct SweepConfig {
  BlockModel blocks;
  std::vector<double> grid;  // strictly increasing, within [0, 1]
  std::size_t trials = 100;
  Seed seed{0};
  bool modularity = true;
  SolverOptions solver;
};

void validate(const SweepConfig& cfg);

struct SweepPoint {
  double p = 0.0;
  double mean_lambda2_over_n = 0.0;
  double stderr_lambda2_over_n = 0.0;
  double detect_spectral = 0.0;
  double detect_modularity = 0.0;  // NaN when modularity is off
  double block_sum_abs = 0.0;      // mean |1^T y_1|; 1^T y_2 = -1^T y_1
  double case1 = 0.0;              // y = p
  double case2 = 0.0;              // y = p/2 + c*
  std::size_t trials = 0;
};

struct BreakpointFit {
  double c_hat = 0.0;
  double breakpoint = 0.0;  // 2 c_hat
  double theory = 0.0;      // 2 c* for comparison
  double sse = 0.0;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  double c_star = 0.0;  // mean over trials of min(lambda_2(L_1), lambda_2(L_2)) / n
  std::size_t failed_trials = 0;
  std::optional<BreakpointFit> breakpoint;
  std::string breakpoint_error;  // set when the fit was rejected
  // Interpolated p where spectral detectability falls halfway from 1 to the
  // baseline; a model-free view of the transition.
  std::optional<double> detectability_midpoint;
};

SweepResult run_sweep(const SweepConfig& cfg);

// Least-squares fit of min(p, p/2 + c) over c >= 0, solved exactly on each
// interval between the kinks. Throws Error{InsufficientSpan} when fewer than
// four points are given or the fitted kink does not have data on both sides.
BreakpointFit estimate_breakpoint(std::span<const double> p, std::span<const double> y,
                                  double c_star);

struct SingularRow {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::size_t trials = 0;
  double mean_sigma1 = 0.0;        // sigma_1(C / sqrt(n1 n2))
  double mean_sigma2 = 0.0;        // sigma_2(C / sqrt(n1 n2))
  double mean_delta_sigma1 = 0.0;  // sigma_1((C - p 1 1^T) / sqrt(n1 n2))
};

struct SingularReport {
  double p = 0.0;
  std::vector<SingularRow> rows;
  // Present only for ladders of two or more sizes.
  std::optional<bool> delta_decreasing;
  std::optional<bool> sigma2_decreasing;
  std::optional<bool> sigma1_approaching;  // |sigma_1 - p| nonincreasing
};

// Monte-Carlo means over Bernoulli(p) matrices; size i, trial t uses
// seed.stream(i).stream(t).
SingularReport check_singular_limits(std::span<const std::pair<std::size_t, std::size_t>> ladder,
                                     double p, std::size_t trials, Seed seed,
                                     const SolverOptions& options = {});

struct ErRow {
  std::size_t n = 0;
  std::size_t trials = 0;
  double mean_lambda2_over_n = 0.0;
  double stderr_lambda2_over_n = 0.0;
  double deviation = 0.0;  // |mean - q|
};

struct ErReport {
  double q = 0.0;
  std::vector<ErRow> rows;
  std::optional<bool> deviation_decreasing;
};

ErReport check_er_lambda2(std::span<const std::size_t> ladder, double q, std::size_t trials,
                          Seed seed, const SolverOptions& options = {});

struct FiedlerStructure {
  double sum1 = 0.0;  // 1^T y_1 over truth class 0
  double sum2 = 0.0;  // 1^T y_2 over truth class 1
  double var1 = 0.0;  // population variance of y within class 0
  double var2 = 0.0;
  double fiedler_value = 0.0;
};

FiedlerStructure fiedler_structure_stats(const Graph& g, std::span<const int> truth,
                                         const SolverOptions& options = {});

}  // namespace specdet
