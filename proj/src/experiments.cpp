#include "specdet/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "specdet/detect.hpp"
#include "specdet/error.hpp"

namespace specdet {
namespace {

constexpr double kEmbeddingSpreadTol = 1e-9;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Blocks {
  Graph first;
  Graph second;
};

Blocks draw_blocks(const BlockModel& model, Seed trial_seed) {
  if (const auto* sbm = std::get_if<SbmBlocks>(&model)) {
    return {gen_er_connected(sbm->n1, sbm->p1, trial_seed.stream(0)),
            gen_er_connected(sbm->n2, sbm->p2, trial_seed.stream(1))};
  }
  const auto& ws = std::get<WsBlocks>(model);
  return {gen_ws_connected(ws.first, trial_seed.stream(0)),
          gen_ws_connected(ws.second, trial_seed.stream(1))};
}

// Bisection quality of an embedding, or the all-one-side baseline when the
// embedding carries no split.
double score_embedding(const Eigen::VectorXd& y, std::span<const int> truth) {
  std::vector<double> values(y.data(), y.data() + y.size());
  try {
    const TwoMeans split = two_means_1d(values, kEmbeddingSpreadTol);
    return detectability(split.labels, truth);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerateInput) throw;
    return baseline_fraction(truth);
  }
}

struct TrialOutput {
  bool ok = false;
  double c_star = 0.0;
  std::vector<double> lambda2_over_n, det_spec, det_mod, block_sum;
};

TrialOutput run_trial(const SweepConfig& cfg, std::size_t t) {
  TrialOutput out;
  const Seed trial_seed = cfg.seed.stream(t);
  Blocks blocks;
  try {
    blocks = draw_blocks(cfg.blocks, trial_seed);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kConnectivityFailure) throw;
    return out;
  }
  const std::size_t n1 = blocks.first.node_count();
  const double n = static_cast<double>(n1 + blocks.second.node_count());
  out.c_star = std::min(algebraic_connectivity(blocks.first, cfg.solver),
                        algebraic_connectivity(blocks.second, cfg.solver)) /
               n;

  const std::size_t grid = cfg.grid.size();
  out.lambda2_over_n.resize(grid);
  out.det_spec.resize(grid);
  out.det_mod.resize(grid, kNaN);
  out.block_sum.resize(grid);
  for (std::size_t g = 0; g < grid; ++g) {
    Rng rng(trial_seed.stream(2 + g));
    const LabeledGraph lg = join_blocks(blocks.first, blocks.second, cfg.grid[g], rng);
    const LaplacianView lap(lg.graph);
    const FiedlerResult f = fiedler(lap, cfg.solver);
    out.lambda2_over_n[g] = f.pair.value / n;
    out.block_sum[g] = std::abs(f.pair.vector.head(static_cast<Eigen::Index>(n1)).sum());
    out.det_spec[g] = score_embedding(f.pair.vector, lg.truth);
    if (cfg.modularity) {
      const ModularityView b(lg.graph);
      out.det_mod[g] = score_embedding(leading_eigenvector(b, cfg.solver).vector, lg.truth);
    }
  }
  out.ok = true;
  return out;
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stderr_of(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

double fit_sse(std::span<const double> p, std::span<const double> y, double c) {
  double sse = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double r = y[i] - std::min(p[i], 0.5 * p[i] + c);
    sse += r * r;
  }
  return sse;
}

std::optional<double> detectability_midpoint(const std::vector<SweepPoint>& points,
                                             double baseline) {
  const double level = 0.5 * (1.0 + baseline);
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const double a = points[i].detect_spectral;
    const double b = points[i + 1].detect_spectral;
    if (a >= level && b < level) {
      const double t = (a - level) / (a - b);
      return points[i].p + t * (points[i + 1].p - points[i].p);
    }
  }
  return std::nullopt;
}

}  // namespace

void validate(const SweepConfig& cfg) {
  if (cfg.grid.empty()) throw Error(ErrorCode::kInvalidParams, "sweep grid is empty");
  if (cfg.trials < 1) throw Error(ErrorCode::kInvalidParams, "trials must be >= 1");
  for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
    if (!(cfg.grid[i] >= 0.0 && cfg.grid[i] <= 1.0)) {
      throw Error(ErrorCode::kInvalidParams, "grid values must lie in [0, 1]");
    }
    if (i > 0 && !(cfg.grid[i] > cfg.grid[i - 1])) {
      throw Error(ErrorCode::kInvalidParams, "grid must be strictly increasing");
    }
  }
  if (const auto* sbm = std::get_if<SbmBlocks>(&cfg.blocks)) {
    if (sbm->n1 == 0 || sbm->n2 == 0) throw Error(ErrorCode::kInvalidParams, "block sizes must be >= 1");
    for (double q : {sbm->p1, sbm->p2}) {
      if (!(q > 0.0 && q <= 1.0)) throw Error(ErrorCode::kInvalidParams, "block probabilities must lie in (0, 1]");
    }
  } else {
    for (const WsSpec& ws : {std::get<WsBlocks>(cfg.blocks).first, std::get<WsBlocks>(cfg.blocks).second}) {
      if (ws.k == 0 || ws.k % 2 != 0 || ws.k >= ws.n || !(ws.beta >= 0.0 && ws.beta <= 1.0)) {
        throw Error(ErrorCode::kInvalidParams, "Watts-Strogatz blocks need even 0 < k < n and beta in [0, 1]");
      }
    }
  }
}

SweepResult run_sweep(const SweepConfig& cfg) {
  validate(cfg);
  const std::size_t trials = cfg.trials;
  const std::size_t grid = cfg.grid.size();
  std::vector<TrialOutput> outputs(trials);
  std::vector<std::string> errors(trials);

#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t t = 0; t < trials; ++t) {
    try {
      outputs[t] = run_trial(cfg, t);
    } catch (const std::exception& e) {
      errors[t] = e.what();
    }
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw Error(ErrorCode::kConvergenceFailure, "sweep trial failed: " + e);
  }

  SweepResult result;
  std::vector<double> c_stars;
  for (const auto& o : outputs) {
    if (o.ok) {
      c_stars.push_back(o.c_star);
    } else {
      ++result.failed_trials;
    }
  }
  if (c_stars.empty()) throw Error(ErrorCode::kConnectivityFailure, "every sweep trial failed to generate");
  result.c_star = mean_of(c_stars);

  for (std::size_t g = 0; g < grid; ++g) {
    std::vector<double> lam, spec, mod, sums;
    for (const auto& o : outputs) {
      if (!o.ok) continue;
      lam.push_back(o.lambda2_over_n[g]);
      spec.push_back(o.det_spec[g]);
      mod.push_back(o.det_mod[g]);
      sums.push_back(o.block_sum[g]);
    }
    SweepPoint pt;
    pt.p = cfg.grid[g];
    pt.trials = lam.size();
    pt.mean_lambda2_over_n = mean_of(lam);
    pt.stderr_lambda2_over_n = stderr_of(lam, pt.mean_lambda2_over_n);
    pt.detect_spectral = mean_of(spec);
    pt.detect_modularity = cfg.modularity ? mean_of(mod) : kNaN;
    pt.block_sum_abs = mean_of(sums);
    pt.case1 = pt.p;
    pt.case2 = 0.5 * pt.p + result.c_star;
    result.points.push_back(pt);
  }

  std::vector<double> ps, ys;
  for (const auto& pt : result.points) {
    ps.push_back(pt.p);
    ys.push_back(pt.mean_lambda2_over_n);
  }
  try {
    result.breakpoint = estimate_breakpoint(ps, ys, result.c_star);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kInsufficientSpan) throw;
    result.breakpoint_error = e.what();
  }

  std::size_t n1 = 0, n2 = 0;
  if (const auto* sbm = std::get_if<SbmBlocks>(&cfg.blocks)) {
    n1 = sbm->n1;
    n2 = sbm->n2;
  } else {
    n1 = std::get<WsBlocks>(cfg.blocks).first.n;
    n2 = std::get<WsBlocks>(cfg.blocks).second.n;
  }
  const double baseline = static_cast<double>(std::max(n1, n2)) / static_cast<double>(n1 + n2);
  result.detectability_midpoint = detectability_midpoint(result.points, baseline);
  return result;
}

BreakpointFit estimate_breakpoint(std::span<const double> p, std::span<const double> y,
                                  double c_star) {
  if (p.size() != y.size()) throw Error(ErrorCode::kLengthMismatch, "p and y differ in length");
  if (p.size() < 4) throw Error(ErrorCode::kInsufficientSpan, "need at least four points");

  // Kinks of the objective sit at c = p_i / 2. Between consecutive kinks the
  // set of points on the p/2 + c branch is fixed and the objective is a
  // parabola in c, minimised by the mean residual clamped to the interval.
  std::vector<double> kinks;
  for (double pi : p) kinks.push_back(0.5 * pi);
  std::sort(kinks.begin(), kinks.end());
  kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());

  double best_c = 0.0;
  double best_sse = std::numeric_limits<double>::infinity();
  auto consider = [&](double c) {
    const double sse = fit_sse(p, y, c);
    if (sse < best_sse || (sse == best_sse && c < best_c)) {
      best_sse = sse;
      best_c = c;
    }
  };
  for (std::size_t j = 0; j <= kinks.size(); ++j) {
    const double lo = j == 0 ? 0.0 : kinks[j - 1];
    const double hi = j == kinks.size() ? std::numeric_limits<double>::infinity() : kinks[j];
    if (hi < lo) continue;
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (0.5 * p[i] >= hi) {
        sum += y[i] - 0.5 * p[i];
        ++count;
      }
    }
    const double c = count == 0 ? lo : std::clamp(sum / static_cast<double>(count), lo, hi);
    consider(c);
  }

  BreakpointFit fit;
  fit.c_hat = best_c;
  fit.breakpoint = 2.0 * best_c;
  fit.theory = 2.0 * c_star;
  fit.sse = best_sse;

  const auto [pmin, pmax] = std::minmax_element(p.begin(), p.end());
  std::size_t below = 0, above = 0;
  for (double pi : p) (pi <= fit.breakpoint ? below : above) += 1;
  if (below == 0 || above == 0 || !(fit.breakpoint > *pmin && fit.breakpoint < *pmax)) {
    throw Error(ErrorCode::kInsufficientSpan,
                "fitted breakpoint " + std::to_string(fit.breakpoint) +
                    " does not have data on both sides");
  }
  return fit;
}

SingularReport check_singular_limits(std::span<const std::pair<std::size_t, std::size_t>> ladder,
                                     double p, std::size_t trials, Seed seed,
                                     const SolverOptions& options) {
  if (!(p > 0.0 && p <= 1.0)) throw Error(ErrorCode::kInvalidParams, "p must lie in (0, 1]");
  if (ladder.empty() || trials < 1) throw Error(ErrorCode::kInvalidParams, "empty ladder or no trials");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (ladder[i].first == 0 || ladder[i].second == 0) {
      throw Error(ErrorCode::kInvalidParams, "ladder sizes must be >= 1");
    }
    if (i > 0 && !(std::min(ladder[i].first, ladder[i].second) >
                   std::min(ladder[i - 1].first, ladder[i - 1].second))) {
      throw Error(ErrorCode::kInvalidParams, "ladder must increase strictly");
    }
  }

  SingularReport report;
  report.p = p;
  for (std::size_t s = 0; s < ladder.size(); ++s) {
    const auto [n1, n2] = ladder[s];
    std::vector<double> s1(trials), s2(trials), d1(trials);
    std::vector<std::string> errors(trials);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t t = 0; t < trials; ++t) {
      try {
        Rng rng(seed.stream(s).stream(t));
        const double scale = 1.0 / std::sqrt(static_cast<double>(n1) * static_cast<double>(n2));
        Eigen::MatrixXd c(static_cast<Eigen::Index>(n1), static_cast<Eigen::Index>(n2));
        for (Eigen::Index i = 0; i < c.rows(); ++i) {
          for (Eigen::Index j = 0; j < c.cols(); ++j) c(i, j) = rng.bernoulli(p) ? scale : 0.0;
        }
        const SvdSummary sc = top_singular(c, std::min<std::size_t>(2, std::min(n1, n2)), options);
        c.array() -= p * scale;
        const SvdSummary sd = top_singular(c, 1, options);
        s1[t] = sc.sigma1;
        s2[t] = sc.sigma2;
        d1[t] = sd.sigma1;
      } catch (const std::exception& e) {
        errors[t] = e.what();
      }
    }
    for (const auto& e : errors) {
      if (!e.empty()) throw Error(ErrorCode::kConvergenceFailure, "singular-value trial failed: " + e);
    }
    report.rows.push_back({n1, n2, trials, mean_of(s1), mean_of(s2), mean_of(d1)});
  }

  if (report.rows.size() >= 2) {
    bool delta = true, sigma2 = true, sigma1 = true;
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
      const auto& a = report.rows[i - 1];
      const auto& b = report.rows[i];
      delta = delta && b.mean_delta_sigma1 < a.mean_delta_sigma1;
      sigma2 = sigma2 && b.mean_sigma2 < a.mean_sigma2;
      sigma1 = sigma1 && std::abs(b.mean_sigma1 - p) <= std::abs(a.mean_sigma1 - p);
    }
    report.delta_decreasing = delta;
    report.sigma2_decreasing = sigma2;
    report.sigma1_approaching = sigma1;
  }
  return report;
}

ErReport check_er_lambda2(std::span<const std::size_t> ladder, double q, std::size_t trials,
                          Seed seed, const SolverOptions& options) {
  if (!(q > 0.0 && q <= 1.0)) throw Error(ErrorCode::kInvalidParams, "q must lie in (0, 1]");
  if (ladder.empty() || trials < 1) throw Error(ErrorCode::kInvalidParams, "empty ladder or no trials");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (ladder[i] < 2) throw Error(ErrorCode::kInvalidParams, "ladder sizes must be >= 2");
    if (i > 0 && !(ladder[i] > ladder[i - 1])) {
      throw Error(ErrorCode::kInvalidParams, "ladder must increase strictly");
    }
  }

  ErReport report;
  report.q = q;
  for (std::size_t s = 0; s < ladder.size(); ++s) {
    const std::size_t n = ladder[s];
    std::vector<double> values(trials);
    std::vector<std::string> errors(trials);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t t = 0; t < trials; ++t) {
      try {
        const Graph g = gen_er_connected(n, q, seed.stream(s).stream(t));
        values[t] = algebraic_connectivity(g, options) / static_cast<double>(n);
      } catch (const std::exception& e) {
        errors[t] = e.what();
      }
    }
    for (const auto& e : errors) {
      if (!e.empty()) throw Error(ErrorCode::kConvergenceFailure, "ER trial failed: " + e);
    }
    ErRow row;
    row.n = n;
    row.trials = trials;
    row.mean_lambda2_over_n = mean_of(values);
    row.stderr_lambda2_over_n = stderr_of(values, row.mean_lambda2_over_n);
    row.deviation = std::abs(row.mean_lambda2_over_n - q);
    report.rows.push_back(row);
  }
  if (report.rows.size() >= 2) {
    bool dec = true;
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
      dec = dec && report.rows[i].deviation < report.rows[i - 1].deviation;
    }
    report.deviation_decreasing = dec;
  }
  return report;
}

FiedlerStructure fiedler_structure_stats(const Graph& g, std::span<const int> truth,
                                         const SolverOptions& options) {
  if (truth.size() != g.node_count()) {
    throw Error(ErrorCode::kLengthMismatch, "truth labels do not match the node count");
  }
  const LaplacianView lap(g);
  const FiedlerResult f = fiedler(lap, options);
  FiedlerStructure out;
  out.fiedler_value = f.pair.value;
  double sq1 = 0.0, sq2 = 0.0;
  std::size_t c1 = 0, c2 = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double v = f.pair.vector[static_cast<Eigen::Index>(i)];
    if (truth[i] == 0) {
      out.sum1 += v;
      sq1 += v * v;
      ++c1;
    } else if (truth[i] == 1) {
      out.sum2 += v;
      sq2 += v * v;
      ++c2;
    } else {
      throw Error(ErrorCode::kInvalidParams, "truth must be a 0/1 labelling");
    }
  }
  if (c1 == 0 || c2 == 0) throw Error(ErrorCode::kDegenerateLabeling, "truth has an empty class");
  const double m1 = out.sum1 / static_cast<double>(c1);
  const double m2 = out.sum2 / static_cast<double>(c2);
  out.var1 = std::max(sq1 / static_cast<double>(c1) - m1 * m1, 0.0);
  out.var2 = std::max(sq2 / static_cast<double>(c2) - m2 * m2, 0.0);
  return out;
}

}  // namespace specdet
