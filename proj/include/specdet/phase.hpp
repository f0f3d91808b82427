#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "specdet/detect.hpp"
#include "specdet/eigen.hpp"
#include "specdet/graph.hpp"

namespace specdet {

struct PhaseBounds {
  double p_lb = 0.0;
  double p_ub = 0.0;
  double c_star = 0.0;
  std::optional<double> p_star;  // exact critical value, equal sizes only
  // inputs
  double lambda2_1 = 0.0;
  double lambda2_2 = 0.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;

  // l1 + l2 - |l1 - l2|, i.e. 2 min(l1, l2); shared by both bounds.
  double numerator() const noexcept;
};

// Detectability bounds from the algebraic connectivities of the two blocks.
PhaseBounds bounds(double lambda2_1, double lambda2_2, std::size_t n1, std::size_t n2);

// The same numerator written out literally, for comparison against the
// 2 * min shortcut.
double bounds_numerator_literal(double lambda2_1, double lambda2_2);

enum class BlockKind { kComplete, kStar, kSbm };

std::string_view to_string(BlockKind kind);

struct ClosedFormParams {
  BlockKind kind = BlockKind::kSbm;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  double p1 = 0.0;  // sbm only
  double p2 = 0.0;  // sbm only
};

// Large-n bounds for special block families. sbm is evaluated as
// bounds(n1 p1, n2 p2, n1, n2); complete and star use their limits in
// terms of c = n1 / n2.
PhaseBounds closed_form(const ClosedFormParams& params);

// The sbm limits written in c = n1 / n2 directly.
struct RatioBounds {
  double p_lb = 0.0;
  double p_ub = 0.0;
};
RatioBounds sbm_ratio_bounds(double c, double p1, double p2);
RatioBounds complete_ratio_bounds(double c);

struct MultiBounds {
  PhaseBounds bounds;           // p_ub and p_lb are the minima over admissible splits
  std::vector<int> ub_side;     // communities on one side of the p_ub minimizer
  std::vector<int> lb_side;     // same for p_lb
  std::size_t admissible = 0;   // number of splits with both sides connected
};

// Bounds for M >= 2 communities: minimum over every bipartition of the
// community set whose two aggregated induced subgraphs are both connected.
// Communities are labels 0..M-1. Throws Error{NoAdmissibleSplit}.
MultiBounds multi_bounds(const Graph& g, std::span<const int> communities,
                         const SolverOptions& options = {});

enum class Region { kReliable, kIntermediate, kUnreliable };

std::string_view to_string(Region r);

// p_hat <= lb is Reliable and p_hat >= ub is Unreliable.
Region classify(double p_hat, double p_lb, double p_ub);

struct ReliabilityVerdict {
  double p_hat = 0.0;
  std::size_t cut = 0;
  PhaseBounds bounds;
  Region region = Region::kUnreliable;
  bool disconnected_subnetwork = false;
};

// Empirical estimators from a bisection: lambda_2 of each induced side, the
// observed sizes, and p_hat = cut / (n1_hat n2_hat). A disconnected side
// gives zero bounds and an Unreliable verdict with the flag set.
ReliabilityVerdict estimate_reliability(const Graph& g, const Partition& partition,
                                        const SolverOptions& options = {});

}  // namespace specdet
