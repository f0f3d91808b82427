#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "specdet/graph.hpp"

namespace specdet {

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;  // unit norm
  double residual = 0.0;   // ||M v - value v||_2
};

struct SvdSummary {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  std::vector<double> values;  // top-k, nonincreasing
};

struct SolverOptions {
  double tol = 1e-8;                  // residual tolerance
  std::size_t dense_threshold = 512;  // dense QL at or below this order
  int matvec_factor = 50;             // Lanczos cap: matvec_factor * n products
};

// Result of the constrained minimization of x^T L x over unit x orthogonal
// to the all-ones vector. For a disconnected graph the value is 0 and
// connected is false.
struct FiedlerResult {
  EigenPair pair;
  bool connected = true;
};

// --- Dense symmetric kernel -------------------------------------------------

struct SymmetricEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // column i pairs with values[i]; empty if not requested
};

// Householder tridiagonalization followed by implicit-shift QL.
SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& a, bool want_vectors = true);

// Implicit QL on a symmetric tridiagonal matrix (diag, sub-diagonal of length
// n-1). Rotations are accumulated into z when it is non-null.
void tridiagonal_ql(Eigen::VectorXd& diag, Eigen::VectorXd& sub, Eigen::MatrixXd* z);

// --- Matrix-free Lanczos -----------------------------------------------------

using SymmetricOperator = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

enum class Spectrum { kSmallest, kLargest };

// k extreme eigenpairs of a symmetric operator restricted to the orthogonal
// complement of `deflate` (orthonormal columns). Full reorthogonalization.
std::vector<EigenPair> lanczos(const SymmetricOperator& op, std::size_t n, std::size_t k,
                               Spectrum which, std::span<const Eigen::VectorXd> deflate,
                               const SolverOptions& options);

// --- Graph spectra -----------------------------------------------------------

// Deterministic sign: the first entry larger than 1e-6 of the max-norm is
// made positive.
void canonical_sign(Eigen::VectorXd& v);

FiedlerResult fiedler(const LaplacianView& lap, const SolverOptions& options = {});

// lambda_2(L) without the eigenvector; 0 for a single node.
double algebraic_connectivity(const Graph& g, const SolverOptions& options = {});

// The k smallest Laplacian eigenpairs, nondecreasing.
std::vector<EigenPair> smallest_k_eigen(const LaplacianView& lap, std::size_t k,
                                        const SolverOptions& options = {});

// Algebraically largest eigenpair of a symmetric matrix.
EigenPair leading_eigenvector(const Eigen::MatrixXd& b, const SolverOptions& options = {});
EigenPair leading_eigenvector(const ModularityView& b, const SolverOptions& options = {});

// Top-k singular values from the Gram matrix on the smaller side.
SvdSummary top_singular(const Eigen::MatrixXd& m, std::size_t k,
                        const SolverOptions& options = {});

}  // namespace specdet
