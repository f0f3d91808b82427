#include "specdet/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "specdet/error.hpp"
#include "specdet/random.hpp"

namespace specdet {
namespace {

constexpr int kMaxQlSweeps = 60;
constexpr std::size_t kCheckEvery = 8;

void sort_ascending(Eigen::VectorXd& values, Eigen::MatrixXd* vectors) {
  const Eigen::Index n = values.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return values[a] < values[b]; });
  Eigen::VectorXd sorted(n);
  for (Eigen::Index i = 0; i < n; ++i) sorted[i] = values[order[static_cast<std::size_t>(i)]];
  values = std::move(sorted);
  if (vectors != nullptr && vectors->size() > 0) {
    Eigen::MatrixXd reordered(vectors->rows(), n);
    for (Eigen::Index i = 0; i < n; ++i) {
      reordered.col(i) = vectors->col(order[static_cast<std::size_t>(i)]);
    }
    *vectors = std::move(reordered);
  }
}

Eigen::VectorXd unit_ones(std::size_t n) {
  return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n),
                                   1.0 / std::sqrt(static_cast<double>(n)));
}

double residual_of(const SymmetricOperator& op, const Eigen::VectorXd& v, double value) {
  Eigen::VectorXd mv;
  op(v, mv);
  return (mv - value * v).norm();
}

// Orthogonalizes v against the first `count` columns of basis and the
// deflation vectors, twice.
void orthogonalize(Eigen::VectorXd& v, const Eigen::MatrixXd& basis, Eigen::Index count,
                   std::span<const Eigen::VectorXd> deflate) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& d : deflate) v -= d.dot(v) * d;
    if (count > 0) {
      const Eigen::VectorXd coeffs = basis.leftCols(count).transpose() * v;
      v.noalias() -= basis.leftCols(count) * coeffs;
    }
  }
}

}  // namespace

void tridiagonal_ql(Eigen::VectorXd& diag, Eigen::VectorXd& sub, Eigen::MatrixXd* z) {
  const Eigen::Index n = diag.size();
  if (n <= 1) return;
  // e[i] couples rows i and i+1; e[n-1] is workspace.
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  e.head(n - 1) = sub.head(n - 1);
  constexpr double eps = std::numeric_limits<double>::epsilon();

  for (Eigen::Index l = 0; l < n; ++l) {
    int sweeps = 0;
    Eigen::Index m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(diag[m]) + std::abs(diag[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (sweeps++ == kMaxQlSweeps) throw ConvergenceError(sweeps, std::abs(e[l]));
        double g = (diag[l + 1] - diag[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = diag[m] - diag[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        Eigen::Index i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            diag[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = diag[i + 1] - p;
          r = (diag[i] - g) * s + 2.0 * c * b;
          p = s * r;
          diag[i + 1] = g + p;
          g = c * r - b;
          if (z != nullptr) {
            const Eigen::VectorXd next = z->col(i + 1);
            z->col(i + 1) = s * z->col(i) + c * next;
            z->col(i) = c * z->col(i) - s * next;
          }
        }
        if (r == 0.0 && i >= l) continue;
        diag[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  sub.head(n - 1) = e.head(n - 1);
}

SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& input, bool want_vectors) {
  const Eigen::Index n = input.rows();
  SymmetricEigen out;
  if (n == 0) return out;
  if (input.cols() != n) throw Error(ErrorCode::kInvalidParams, "matrix must be square");

  Eigen::MatrixXd a = input;
  Eigen::VectorXd betas = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub = Eigen::VectorXd::Zero(n);

  // Householder reduction of the lower triangle. Reflector k maps
  // a(k+1:, k) onto a multiple of e1; its tail is stored below the
  // sub-diagonal of column k.
  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const Eigen::Index m = n - k - 1;
    auto x = a.col(k).tail(m);
    const double x0 = x(0);
    const double sigma = x.tail(m - 1).squaredNorm();
    if (sigma == 0.0) {
      sub[k] = x0;
      continue;
    }
    const double mu = std::sqrt(x0 * x0 + sigma);
    const double v0 = x0 <= 0.0 ? x0 - mu : -sigma / (x0 + mu);
    const double beta = 2.0 * v0 * v0 / (sigma + v0 * v0);
    Eigen::VectorXd v(m);
    v(0) = 1.0;
    v.tail(m - 1) = x.tail(m - 1) / v0;
    sub[k] = mu;

    auto trailing = a.bottomRightCorner(m, m);
    const Eigen::VectorXd p = beta * (trailing.selfadjointView<Eigen::Lower>() * v);
    const Eigen::VectorXd w = p - (0.5 * beta * p.dot(v)) * v;
    trailing.selfadjointView<Eigen::Lower>().rankUpdate(v, w, -1.0);

    x.tail(m - 1) = v.tail(m - 1);
    betas[k] = beta;
  }
  Eigen::VectorXd diag = a.diagonal();
  if (n >= 2) sub[n - 2] = a(n - 1, n - 2);

  if (!want_vectors) {
    tridiagonal_ql(diag, sub, nullptr);
    sort_ascending(diag, nullptr);
    out.values = std::move(diag);
    return out;
  }

  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index k = n - 3; k >= 0; --k) {
    if (betas[k] == 0.0) continue;
    const Eigen::Index m = n - k - 1;
    Eigen::VectorXd v(m);
    v(0) = 1.0;
    v.tail(m - 1) = a.col(k).tail(m - 1);
    auto block = q.bottomRightCorner(m, m);
    const Eigen::RowVectorXd t = v.transpose() * block;
    block.noalias() -= (betas[k] * v) * t;
  }

  tridiagonal_ql(diag, sub, &q);
  sort_ascending(diag, &q);
  out.values = std::move(diag);
  out.vectors = std::move(q);
  return out;
}

std::vector<EigenPair> lanczos(const SymmetricOperator& op, std::size_t n, std::size_t k,
                               Spectrum which, std::span<const Eigen::VectorXd> deflate,
                               const SolverOptions& options) {
  if (k == 0) return {};
  if (deflate.size() >= n || k > n - deflate.size()) {
    throw Error(ErrorCode::kInvalidParams, "requested more eigenpairs than the free dimension");
  }
  const auto free_dim = static_cast<Eigen::Index>(n - deflate.size());
  const long max_matvec = std::max<long>(static_cast<long>(options.matvec_factor) * static_cast<long>(n),
                                         static_cast<long>(free_dim) + 1);

  Rng rng(Seed{0x6c616e637a6f73ULL}.stream(n));
  Eigen::MatrixXd basis(static_cast<Eigen::Index>(n), std::min<Eigen::Index>(free_dim, 64));
  Eigen::Index m = 0;
  std::vector<double> alpha, beta;

  auto push = [&](const Eigen::VectorXd& v) {
    if (m == basis.cols()) basis.conservativeResize(Eigen::NoChange, std::min(free_dim, 2 * m));
    basis.col(m++) = v;
  };
  // Random unit vector orthogonal to everything seen so far; false if the
  // free space is exhausted.
  auto fresh_start = [&]() {
    for (int attempt = 0; attempt < 5; ++attempt) {
      Eigen::VectorXd v(static_cast<Eigen::Index>(n));
      for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.uniform() - 0.5;
      orthogonalize(v, basis, m, deflate);
      const double norm = v.norm();
      if (norm > 1e-8) {
        push(v / norm);
        return true;
      }
    }
    return false;
  };

  if (!fresh_start()) throw Error(ErrorCode::kInvalidParams, "empty search space");

  long matvecs = 0;
  double best_residual = std::numeric_limits<double>::infinity();
  double scale = 0.0;
  std::size_t blocks = 1;
  Eigen::VectorXd w;

  while (true) {
    const Eigen::Index j = m - 1;
    op(basis.col(j), w);
    ++matvecs;
    const double a = basis.col(j).dot(w);
    alpha.push_back(a);
    w -= a * basis.col(j);
    if (j > 0) w -= beta[static_cast<std::size_t>(j - 1)] * basis.col(j - 1);
    orthogonalize(w, basis, m, deflate);
    const double b = w.norm();
    scale = std::max({scale, std::abs(a), b});

    const bool exhausted = m == free_dim;
    const bool breakdown = b <= 1e-12 * std::max(scale, 1.0);
    const auto dim = static_cast<std::size_t>(m);
    const bool may_accept = exhausted || (breakdown ? (blocks >= k || k == 1) : true);
    const bool check = dim >= k && (exhausted || breakdown || dim % kCheckEvery == 0);

    if (check && may_accept) {
      Eigen::VectorXd theta = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
      Eigen::VectorXd off = Eigen::VectorXd::Zero(m);
      for (Eigen::Index i = 0; i + 1 < m; ++i) off[i] = beta[static_cast<std::size_t>(i)];
      Eigen::MatrixXd s = Eigen::MatrixXd::Identity(m, m);
      tridiagonal_ql(theta, off, &s);
      sort_ascending(theta, &s);

      std::vector<Eigen::Index> wanted(k);
      for (std::size_t i = 0; i < k; ++i) {
        wanted[i] = which == Spectrum::kSmallest ? static_cast<Eigen::Index>(i)
                                                  : m - 1 - static_cast<Eigen::Index>(i);
      }
      const double coupling = (exhausted || breakdown) ? 0.0 : b;
      bool estimates_ok = true;
      for (Eigen::Index idx : wanted) {
        if (std::abs(coupling * s(m - 1, idx)) > 0.5 * options.tol) estimates_ok = false;
      }
      if (estimates_ok) {
        std::vector<EigenPair> pairs;
        double worst = 0.0;
        for (Eigen::Index idx : wanted) {
          EigenPair pair;
          pair.value = theta[idx];
          pair.vector = basis.leftCols(m) * s.col(idx);
          pair.vector.normalize();
          canonical_sign(pair.vector);
          pair.residual = residual_of(op, pair.vector, pair.value);
          ++matvecs;
          worst = std::max(worst, pair.residual);
          pairs.push_back(std::move(pair));
        }
        best_residual = std::min(best_residual, worst);
        if (worst <= options.tol) return pairs;
        if (exhausted) throw ConvergenceError(static_cast<int>(matvecs), best_residual);
      }
    }
    if (exhausted) throw ConvergenceError(static_cast<int>(matvecs), best_residual);
    if (matvecs >= max_matvec) throw ConvergenceError(static_cast<int>(matvecs), best_residual);

    if (breakdown) {
      beta.push_back(0.0);
      ++blocks;
      if (!fresh_start()) throw ConvergenceError(static_cast<int>(matvecs), best_residual);
    } else {
      beta.push_back(b);
      push(w / b);
    }
  }
}

void canonical_sign(Eigen::VectorXd& v) {
  if (v.size() == 0) return;
  const double cutoff = 1e-6 * v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > cutoff) {
      if (v[i] < 0.0) v = -v;
      return;
    }
  }
}

namespace {

SymmetricOperator as_operator(const LaplacianView& lap) {
  return [&lap](const Eigen::VectorXd& x, Eigen::VectorXd& y) { lap.apply(x, y); };
}

// L + shift * 1 1^T / n pushes the constant vector above the spectrum, so
// the smallest eigenpair is the minimizer over the complement of 1.
Eigen::MatrixXd deflated_dense_laplacian(const LaplacianView& lap) {
  const double n = static_cast<double>(lap.size());
  const double shift = 4.0 * static_cast<double>(lap.max_degree()) + 1.0;
  Eigen::MatrixXd l = lap.dense();
  l.array() += shift / n;
  return l;
}

}  // namespace

FiedlerResult fiedler(const LaplacianView& lap, const SolverOptions& options) {
  const std::size_t n = lap.size();
  if (n < 2) throw Error(ErrorCode::kInvalidParams, "Fiedler vector needs n >= 2");
  FiedlerResult result;
  result.connected = is_connected(lap.graph());
  const auto op = as_operator(lap);

  if (n <= options.dense_threshold) {
    const auto eig = symmetric_eigen(deflated_dense_laplacian(lap), true);
    EigenPair pair;
    pair.value = eig.values[0];
    pair.vector = eig.vectors.col(0);
    pair.vector.array() -= pair.vector.mean();
    pair.vector.normalize();
    canonical_sign(pair.vector);
    pair.residual = residual_of(op, pair.vector, pair.value);
    if (pair.residual > options.tol) {
      throw ConvergenceError(static_cast<int>(n), pair.residual);
    }
    result.pair = std::move(pair);
  } else {
    const Eigen::VectorXd ones = unit_ones(n);
    auto pairs = lanczos(op, n, 1, Spectrum::kSmallest, std::span(&ones, 1), options);
    result.pair = std::move(pairs.front());
  }
  if (!result.connected) result.pair.value = 0.0;
  return result;
}

double algebraic_connectivity(const Graph& g, const SolverOptions& options) {
  const std::size_t n = g.node_count();
  if (n < 2) return 0.0;
  if (!is_connected(g)) return 0.0;
  const LaplacianView lap(g);
  if (n <= options.dense_threshold) {
    return symmetric_eigen(deflated_dense_laplacian(lap), false).values[0];
  }
  return fiedler(lap, options).pair.value;
}

std::vector<EigenPair> smallest_k_eigen(const LaplacianView& lap, std::size_t k,
                                        const SolverOptions& options) {
  const std::size_t n = lap.size();
  if (k < 1 || k > n) throw Error(ErrorCode::kInvalidParams, "need 1 <= k <= n");
  const auto op = as_operator(lap);

  if (n <= options.dense_threshold) {
    const auto eig = symmetric_eigen(lap.dense(), true);
    std::vector<EigenPair> pairs;
    for (std::size_t i = 0; i < k; ++i) {
      EigenPair pair;
      pair.value = eig.values[static_cast<Eigen::Index>(i)];
      pair.vector = eig.vectors.col(static_cast<Eigen::Index>(i));
      canonical_sign(pair.vector);
      pair.residual = residual_of(op, pair.vector, pair.value);
      pairs.push_back(std::move(pair));
    }
    return pairs;
  }

  const Eigen::VectorXd ones = unit_ones(n);
  std::vector<EigenPair> pairs;
  pairs.push_back(EigenPair{0.0, ones, residual_of(op, ones, 0.0)});
  auto rest = lanczos(op, n, k - 1, Spectrum::kSmallest, std::span(&ones, 1), options);
  for (auto& pair : rest) pairs.push_back(std::move(pair));
  return pairs;
}

EigenPair leading_eigenvector(const Eigen::MatrixXd& b, const SolverOptions& options) {
  const auto n = static_cast<std::size_t>(b.rows());
  if (n == 0 || b.cols() != b.rows()) throw Error(ErrorCode::kInvalidParams, "need a square matrix");
  const SymmetricOperator op = [&b](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    y.noalias() = b * x;
  };
  if (n <= options.dense_threshold) {
    const auto eig = symmetric_eigen(b, true);
    EigenPair pair;
    pair.value = eig.values[static_cast<Eigen::Index>(n) - 1];
    pair.vector = eig.vectors.col(static_cast<Eigen::Index>(n) - 1);
    canonical_sign(pair.vector);
    pair.residual = residual_of(op, pair.vector, pair.value);
    if (pair.residual > options.tol) throw ConvergenceError(static_cast<int>(n), pair.residual);
    return pair;
  }
  return lanczos(op, n, 1, Spectrum::kLargest, {}, options).front();
}

EigenPair leading_eigenvector(const ModularityView& b, const SolverOptions& options) {
  const std::size_t n = b.size();
  if (n <= options.dense_threshold) {
    return leading_eigenvector(modularity_matrix(b.graph()), options);
  }
  const SymmetricOperator op = [&b](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    b.apply(x, y);
  };
  return lanczos(op, n, 1, Spectrum::kLargest, {}, options).front();
}

SvdSummary top_singular(const Eigen::MatrixXd& m, std::size_t k, const SolverOptions& options) {
  const auto rows = static_cast<std::size_t>(m.rows());
  const auto cols = static_cast<std::size_t>(m.cols());
  const std::size_t side = std::min(rows, cols);
  if (k < 1 || k > side) throw Error(ErrorCode::kInvalidParams, "need 1 <= k <= min(rows, cols)");

  std::vector<double> gram_values;
  if (side <= options.dense_threshold) {
    const Eigen::MatrixXd gram =
        cols <= rows ? Eigen::MatrixXd(m.transpose() * m) : Eigen::MatrixXd(m * m.transpose());
    const auto eig = symmetric_eigen(gram, false);
    for (std::size_t i = 0; i < k; ++i) {
      gram_values.push_back(eig.values[static_cast<Eigen::Index>(side - 1 - i)]);
    }
  } else {
    SymmetricOperator op;
    if (cols <= rows) {
      op = [&m](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
        const Eigen::VectorXd t = m * x;
        y.noalias() = m.transpose() * t;
      };
    } else {
      op = [&m](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
        const Eigen::VectorXd t = m.transpose() * x;
        y.noalias() = m * t;
      };
    }
    for (const auto& pair : lanczos(op, side, k, Spectrum::kLargest, {}, options)) {
      gram_values.push_back(pair.value);
    }
  }

  // Gram eigenvalues this close to zero are rounding noise of a rank-deficient
  // matrix; their square roots would otherwise surface as ~1e-8.
  const double top = *std::max_element(gram_values.begin(), gram_values.end());
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(side) *
                       std::max(top, 0.0);
  SvdSummary summary;
  for (double v : gram_values) summary.values.push_back(v <= floor ? 0.0 : std::sqrt(v));
  std::sort(summary.values.begin(), summary.values.end(), std::greater<>());
  summary.sigma1 = summary.values[0];
  summary.sigma2 = summary.values.size() > 1 ? summary.values[1] : 0.0;
  return summary;
}

}  // namespace specdet
