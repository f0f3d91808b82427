#include "specdet/phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "specdet/error.hpp"

namespace specdet {
namespace {

void require_sizes(std::size_t n1, std::size_t n2) {
  if (n1 == 0 || n2 == 0) throw Error(ErrorCode::kInvalidParams, "block sizes must be >= 1");
}

double abs_diff(std::size_t a, std::size_t b) {
  return static_cast<double>(a > b ? a - b : b - a);
}

}  // namespace

double PhaseBounds::numerator() const noexcept { return 2.0 * std::min(lambda2_1, lambda2_2); }

double bounds_numerator_literal(double lambda2_1, double lambda2_2) {
  return lambda2_1 + lambda2_2 - std::abs(lambda2_1 - lambda2_2);
}

PhaseBounds bounds(double lambda2_1, double lambda2_2, std::size_t n1, std::size_t n2) {
  require_sizes(n1, n2);
  if (!(lambda2_1 >= 0.0) || !(lambda2_2 >= 0.0)) {
    throw Error(ErrorCode::kInvalidParams, "algebraic connectivities must be >= 0");
  }
  PhaseBounds b;
  b.lambda2_1 = lambda2_1;
  b.lambda2_2 = lambda2_2;
  b.n1 = n1;
  b.n2 = n2;
  const double n = static_cast<double>(n1 + n2);
  const double d = abs_diff(n1, n2);
  const double num = b.numerator();
  b.p_ub = num / (n - d);
  b.p_lb = num / (n + d);
  b.c_star = num / (2.0 * n);
  if (n1 == n2) b.p_star = num / n;
  return b;
}

std::string_view to_string(BlockKind kind) {
  switch (kind) {
    case BlockKind::kComplete: return "complete";
    case BlockKind::kStar: return "star";
    case BlockKind::kSbm: return "sbm";
  }
  return "unknown";
}

RatioBounds sbm_ratio_bounds(double c, double p1, double p2) {
  const double num = c * p1 + p2 - std::abs(c * p1 - p2);
  return {num / (1.0 + c + std::abs(1.0 - c)), num / (1.0 + c - std::abs(1.0 - c))};
}

RatioBounds complete_ratio_bounds(double c) {
  return {(1.0 + c - std::abs(1.0 - c)) / (1.0 + c + std::abs(1.0 - c)), 1.0};
}

PhaseBounds closed_form(const ClosedFormParams& params) {
  require_sizes(params.n1, params.n2);
  const double n1 = static_cast<double>(params.n1);
  const double n2 = static_cast<double>(params.n2);
  const bool equal = params.n1 == params.n2;

  switch (params.kind) {
    case BlockKind::kSbm: {
      for (double q : {params.p1, params.p2}) {
        if (!(q >= 0.0 && q <= 1.0)) {
          throw Error(ErrorCode::kInvalidParams, "block probabilities must lie in [0, 1]");
        }
      }
      return bounds(n1 * params.p1, n2 * params.p2, params.n1, params.n2);
    }
    case BlockKind::kComplete: {
      const RatioBounds r = complete_ratio_bounds(n1 / n2);
      PhaseBounds b;
      b.lambda2_1 = n1;
      b.lambda2_2 = n2;
      b.n1 = params.n1;
      b.n2 = params.n2;
      b.p_ub = r.p_ub;
      b.p_lb = r.p_lb;
      b.c_star = std::min(n1, n2) / (n1 + n2);
      if (equal) b.p_star = 1.0;
      return b;
    }
    case BlockKind::kStar: {
      // lambda_2 = 1 for each star, so the bounds vanish like 1/n.
      PhaseBounds b;
      b.lambda2_1 = 1.0;
      b.lambda2_2 = 1.0;
      b.n1 = params.n1;
      b.n2 = params.n2;
      if (equal) b.p_star = 0.0;
      return b;
    }
  }
  throw Error(ErrorCode::kInvalidParams, "unknown block kind");
}

MultiBounds multi_bounds(const Graph& g, std::span<const int> communities,
                         const SolverOptions& options) {
  const std::size_t n = g.node_count();
  if (communities.size() != n) {
    throw Error(ErrorCode::kLengthMismatch, "community labels do not match the node count");
  }
  int max_label = -1;
  for (int c : communities) {
    if (c < 0) throw Error(ErrorCode::kInvalidParams, "community ids must be >= 0");
    max_label = std::max(max_label, c);
  }
  const auto m = static_cast<std::size_t>(max_label + 1);
  if (m < 2) throw Error(ErrorCode::kInvalidParams, "need at least two communities");
  if (m > 24) throw Error(ErrorCode::kInvalidParams, "too many communities to enumerate");

  MultiBounds out;
  out.bounds.p_ub = std::numeric_limits<double>::infinity();
  out.bounds.p_lb = std::numeric_limits<double>::infinity();

  // Community 0 always sits on the first side, so each bipartition is seen once.
  const std::uint64_t half = std::uint64_t{1} << (m - 1);
  for (std::uint64_t rest = 0; rest < half; ++rest) {
    const std::uint64_t mask = 1 | (rest << 1);
    if (mask == (std::uint64_t{1} << m) - 1) continue;

    std::vector<Node> side1, side2;
    for (Node i = 0; i < n; ++i) {
      ((mask >> communities[i]) & 1 ? side1 : side2).push_back(i);
    }
    if (side1.empty() || side2.empty()) continue;
    const SubgraphIndex a = induced_subgraph(g, side1);
    const SubgraphIndex b = induced_subgraph(g, side2);
    if (!is_connected(a.local) || !is_connected(b.local)) continue;
    ++out.admissible;

    const PhaseBounds candidate =
        bounds(algebraic_connectivity(a.local, options), algebraic_connectivity(b.local, options),
               side1.size(), side2.size());
    std::vector<int> members;
    for (std::size_t k = 0; k < m; ++k) {
      if ((mask >> k) & 1) members.push_back(static_cast<int>(k));
    }
    if (candidate.p_ub < out.bounds.p_ub) {
      const double lb = out.bounds.p_lb;
      out.bounds = candidate;
      out.bounds.p_lb = lb;
      out.ub_side = members;
    }
    if (candidate.p_lb < out.bounds.p_lb) {
      out.bounds.p_lb = candidate.p_lb;
      out.lb_side = members;
    }
  }
  if (out.admissible == 0) {
    throw Error(ErrorCode::kNoAdmissibleSplit, "no bipartition leaves both sides connected");
  }
  // The critical value only exists for the reported split when it is also
  // the lower-bound minimizer.
  if (out.ub_side != out.lb_side) out.bounds.p_star.reset();
  return out;
}

std::string_view to_string(Region r) {
  switch (r) {
    case Region::kReliable: return "reliable";
    case Region::kIntermediate: return "intermediate";
    case Region::kUnreliable: return "unreliable";
  }
  return "unknown";
}

Region classify(double p_hat, double p_lb, double p_ub) {
  if (p_hat <= p_lb) return Region::kReliable;
  if (p_hat >= p_ub) return Region::kUnreliable;
  return Region::kIntermediate;
}

ReliabilityVerdict estimate_reliability(const Graph& g, const Partition& partition,
                                        const SolverOptions& options) {
  if (partition.labels.size() != g.node_count()) {
    throw Error(ErrorCode::kLengthMismatch, "partition does not match the graph");
  }
  const BlockSplit split = split_blocks(g, partition.labels);
  const std::size_t n1 = split.first.nodes.size();
  const std::size_t n2 = split.second.nodes.size();

  ReliabilityVerdict v;
  v.cut = split.cross.size();
  v.p_hat = static_cast<double>(v.cut) / (static_cast<double>(n1) * static_cast<double>(n2));
  const bool ok1 = is_connected(split.first.local);
  const bool ok2 = is_connected(split.second.local);
  v.disconnected_subnetwork = !(ok1 && ok2);
  const double l1 = ok1 ? algebraic_connectivity(split.first.local, options) : 0.0;
  const double l2 = ok2 ? algebraic_connectivity(split.second.local, options) : 0.0;
  v.bounds = bounds(l1, l2, n1, n2);
  v.region = v.disconnected_subnetwork ? Region::kUnreliable
                                       : classify(v.p_hat, v.bounds.p_lb, v.bounds.p_ub);
  return v;
}

}  // namespace specdet
