#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "helpers.hpp"
#include "specdet/eigen.hpp"
#include "specdet/generators.hpp"

using namespace specdet;
using namespace specdet::testing;

namespace {

SolverOptions lanczos_only() {
  SolverOptions o;
  o.dense_threshold = 0;
  return o;
}

Eigen::MatrixXd random_symmetric(Eigen::Index n, Rng& rng) {
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) a(i, j) = a(j, i) = rng.uniform() * 2 - 1;
  return a;
}

// Second-smallest eigenvalue from Eigen's solver, as an independent oracle.
double oracle_lambda2(const Graph& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(laplacian(g).dense(), Eigen::EigenvaluesOnly);
  return es.eigenvalues()[1];
}

}  // namespace

TEST(SymmetricEigen, MatchesOracleOnRandomMatrices) {
  Rng rng(Seed{1});
  for (Eigen::Index n : {1, 2, 3, 5, 8, 17, 40, 64}) {
    const Eigen::MatrixXd a = random_symmetric(n, rng);
    const SymmetricEigen ours = symmetric_eigen(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    EXPECT_LE((ours.values - es.eigenvalues()).cwiseAbs().maxCoeff(), 1e-10) << n;
    const Eigen::MatrixXd& v = ours.vectors;
    EXPECT_LE((v.transpose() * v - Eigen::MatrixXd::Identity(n, n)).norm(), 1e-10);
    EXPECT_LE((a * v - v * ours.values.asDiagonal()).norm(), 1e-10 * std::max<double>(1.0, a.norm()));
    for (Eigen::Index i = 1; i < n; ++i) EXPECT_LE(ours.values[i - 1], ours.values[i]);
  }
}

TEST(SymmetricEigen, ValuesOnlyAgree) {
  Rng rng(Seed{2});
  const Eigen::MatrixXd a = random_symmetric(30, rng);
  EXPECT_LE((symmetric_eigen(a, false).values - symmetric_eigen(a, true).values).norm(), 1e-12);
  EXPECT_EQ(symmetric_eigen(a, false).vectors.size(), 0);
}

TEST(TridiagonalQl, PathLaplacianInterior) {
  // tridiag(-1, 2, -1) of order n: eigenvalues 2 - 2 cos(k pi / (n + 1)).
  const Eigen::Index n = 25;
  Eigen::VectorXd d = Eigen::VectorXd::Constant(n, 2.0);
  Eigen::VectorXd e = Eigen::VectorXd::Constant(n, -1.0);
  tridiagonal_ql(d, e, nullptr);
  std::sort(d.data(), d.data() + n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    EXPECT_NEAR(d[k - 1], 2 - 2 * std::cos(k * std::numbers::pi / (n + 1)), 1e-12);
  }
}

TEST(Fiedler, CompleteGraphs) {
  for (std::size_t n : {4u, 16u, 64u, 256u}) {
    const Graph g = complete(n);
    const double v = fiedler(laplacian(g)).pair.value;
    EXPECT_NEAR(v, static_cast<double>(n), 1e-8 * static_cast<double>(n));
    EXPECT_NEAR(fiedler(laplacian(g), lanczos_only()).pair.value, static_cast<double>(n),
                1e-8 * static_cast<double>(n));
  }
}

TEST(Fiedler, Stars) {
  for (std::size_t n : {4u, 16u, 64u, 256u}) {
    const Graph g = star(n);
    EXPECT_NEAR(fiedler(laplacian(g)).pair.value, 1.0, 1e-8);
    EXPECT_NEAR(fiedler(laplacian(g), lanczos_only()).pair.value, 1.0, 1e-8);
  }
}

TEST(Fiedler, Path3) {
  const FiedlerResult f = fiedler(laplacian(path(3)));
  EXPECT_NEAR(f.pair.value, 1.0, 1e-12);
  const double s = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(f.pair.vector[0], s, 1e-12);
  EXPECT_NEAR(f.pair.vector[1], 0.0, 1e-12);
  EXPECT_NEAR(f.pair.vector[2], -s, 1e-12);
  EXPECT_LE(f.pair.residual, 1e-8);
}

TEST(Fiedler, OracleEquivalenceSmallGraphs) {
  Rng rng(Seed{7});
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng.below(7);
    const Graph g = random_graph(n, 0.2 + 0.6 * rng.uniform(), rng);
    const FiedlerResult f = fiedler(laplacian(g));
    const double expected = is_connected(g) ? oracle_lambda2(g) : 0.0;
    EXPECT_NEAR(f.pair.value, expected, 1e-8) << "trial " << t;
    EXPECT_EQ(f.connected, is_connected(g));
  }
}

TEST(Fiedler, InvariantsOnRandomGraphs) {
  Rng rng(Seed{8});
  for (int t = 0; t < 20; ++t) {
    const Graph g = gen_er_connected(60, 0.15, Seed{static_cast<std::uint64_t>(t)});
    const LaplacianView lap(g);
    const FiedlerResult f = fiedler(lap);
    EXPECT_NEAR(f.pair.vector.norm(), 1.0, 1e-10);
    EXPECT_LE(std::abs(f.pair.vector.sum()), 1e-8);
    EXPECT_LE(f.pair.residual, 1e-8);
    EXPECT_NEAR(f.pair.value, oracle_lambda2(g), 1e-8);

    // Minimality over 1-perp.
    for (int k = 0; k < 100; ++k) {
      Eigen::VectorXd x(60);
      for (auto& v : x) v = rng.uniform() - 0.5;
      x.array() -= x.mean();
      x.normalize();
      EXPECT_GE(lap.quadratic_form(x), f.pair.value - 1e-8);
    }
  }
}

TEST(Fiedler, SignIsDeterministic) {
  const Graph g = gen_er_connected(700, 0.05, Seed{3});
  const FiedlerResult a = fiedler(laplacian(g));
  const FiedlerResult b = fiedler(laplacian(g));
  EXPECT_EQ(a.pair.value, b.pair.value);
  EXPECT_TRUE(a.pair.vector == b.pair.vector);
  const Graph small = gen_er_connected(50, 0.2, Seed{3});
  EXPECT_TRUE(fiedler(laplacian(small)).pair.vector == fiedler(laplacian(small)).pair.vector);
}

TEST(Fiedler, LanczosMatchesDense) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const LabeledGraph lg = gen_sbm({150, 100, 0.2, 0.3, 0.02}, Seed{s});
    const LaplacianView lap(lg.graph);
    const FiedlerResult dense = fiedler(lap);
    const FiedlerResult iter = fiedler(lap, lanczos_only());
    EXPECT_NEAR(dense.pair.value, iter.pair.value, 1e-8);
    EXPECT_LE(iter.pair.residual, 1e-8);
    EXPECT_LE(std::abs(iter.pair.vector.sum()), 1e-8);
    // Same eigenvector up to the shared sign convention.
    EXPECT_LE((dense.pair.vector - iter.pair.vector).norm(), 1e-6);
  }
}

TEST(Fiedler, LargeGraphUsesIterativePath) {
  const LabeledGraph lg = gen_sbm({300, 300, 0.1, 0.1, 0.01}, Seed{11});
  const LaplacianView lap(lg.graph);
  const FiedlerResult f = fiedler(lap);
  const double dense = symmetric_eigen(lap.dense(), false).values[1];
  EXPECT_NEAR(f.pair.value, dense, 1e-8);
  EXPECT_NEAR(algebraic_connectivity(lg.graph), dense, 1e-8);
}

TEST(Fiedler, DisconnectedFlag) {
  const Graph g = build_graph(6, {{0, 1}, {1, 2}, {3, 4}, {4, 5}});
  const FiedlerResult f = fiedler(laplacian(g));
  EXPECT_FALSE(f.connected);
  EXPECT_EQ(f.pair.value, 0.0);
  // The null-space direction orthogonal to 1 is constant on each component.
  EXPECT_NEAR(f.pair.vector[0], f.pair.vector[2], 1e-10);
  EXPECT_NEAR(f.pair.vector[3], f.pair.vector[5], 1e-10);
  EXPECT_EQ(algebraic_connectivity(g), 0.0);
}

TEST(Fiedler, RejectsTinyGraphs) {
  const Graph g = build_graph(1, std::vector<Edge>{});
  EXPECT_EQ(code_of([&] { fiedler(laplacian(g)); }), ErrorCode::kInvalidParams);
  EXPECT_EQ(algebraic_connectivity(g), 0.0);
}

TEST(Fiedler, ConvergenceFailureReportsProgress) {
  const Graph g = gen_er_connected(200, 0.05, Seed{1});
  SolverOptions o = lanczos_only();
  o.matvec_factor = 0;  // cap collapses to n + 1 products with an impossible tolerance
  o.tol = 1e-300;
  try {
    fiedler(laplacian(g), o);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConvergenceFailure);
    EXPECT_GT(e.iterations(), 0);
    EXPECT_GE(e.best_residual(), 0.0);
  }
}

TEST(SmallestK, CompleteGraphK4) {
  for (const SolverOptions& o : {SolverOptions{}, lanczos_only()}) {
    const auto pairs = smallest_k_eigen(laplacian(complete(4)), 4, o);
    ASSERT_EQ(pairs.size(), 4u);
    EXPECT_NEAR(pairs[0].value, 0.0, 1e-10);
    for (int i = 1; i < 4; ++i) EXPECT_NEAR(pairs[static_cast<std::size_t>(i)].value, 4.0, 1e-8);
  }
}

TEST(SmallestK, DisjointEdges) {
  const Graph g = build_graph(4, {{0, 1}, {2, 3}});
  for (const SolverOptions& o : {SolverOptions{}, lanczos_only()}) {
    const auto pairs = smallest_k_eigen(laplacian(g), 2, o);
    EXPECT_NEAR(pairs[0].value, 0.0, 1e-10);
    EXPECT_NEAR(pairs[1].value, 0.0, 1e-10);
  }
}

TEST(SmallestK, OrderingAndOrthogonality) {
  const Graph g = gen_er_connected(80, 0.1, Seed{4});
  for (const SolverOptions& o : {SolverOptions{}, lanczos_only()}) {
    const auto pairs = smallest_k_eigen(laplacian(g), 6, o);
    const double c = 1.0 / std::sqrt(80.0);
    EXPECT_NEAR(pairs[0].value, 0.0, 1e-10);
    EXPECT_NEAR(std::abs(pairs[0].vector[0]), c, 1e-10);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (i > 0) EXPECT_LE(pairs[i - 1].value, pairs[i].value + 1e-12);
      for (std::size_t j = 0; j < i; ++j) {
        EXPECT_LE(std::abs(pairs[i].vector.dot(pairs[j].vector)), 1e-8);
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(laplacian(g).dense(), Eigen::EigenvaluesOnly);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      EXPECT_NEAR(pairs[i].value, es.eigenvalues()[static_cast<Eigen::Index>(i)], 1e-8);
    }
  }
  EXPECT_EQ(code_of([&] { smallest_k_eigen(laplacian(g), 0); }), ErrorCode::kInvalidParams);
  EXPECT_EQ(code_of([&] { smallest_k_eigen(laplacian(g), 81); }), ErrorCode::kInvalidParams);
}

TEST(LeadingEigenvector, Diagonal) {
  Eigen::MatrixXd m(2, 2);
  m << 3, 0, 0, 1;
  const EigenPair p = leading_eigenvector(m);
  EXPECT_NEAR(p.value, 3.0, 1e-12);
  EXPECT_NEAR(std::abs(p.vector[0]), 1.0, 1e-12);
  EXPECT_NEAR(p.vector[1], 0.0, 1e-12);
}

TEST(LeadingEigenvector, TwoTrianglesSeparateBySign) {
  const Graph g = cliques(2, 3);
  for (const SolverOptions& o : {SolverOptions{}, lanczos_only()}) {
    const EigenPair p = leading_eigenvector(ModularityView(g), o);
    for (int i = 0; i < 3; ++i) {
      EXPECT_GT(p.vector[i] * p.vector[0], 0.0);
      EXPECT_LT(p.vector[i + 3] * p.vector[0], 0.0);
    }
    EXPECT_LE(p.residual, 1e-8);
  }
}

TEST(LeadingEigenvector, K2Modularity) {
  // B = [[-1/2, 1/2], [1/2, -1/2]] has eigenvalues {-1, 0}.
  const EigenPair p = leading_eigenvector(modularity_matrix(complete(2)));
  EXPECT_NEAR(p.value, 0.0, 1e-12);
  EXPECT_NEAR(p.vector[0], p.vector[1], 1e-12);
}

TEST(LeadingEigenvector, IterativeMatchesDense) {
  const LabeledGraph lg = gen_sbm({120, 80, 0.2, 0.25, 0.02}, Seed{6});
  const EigenPair dense = leading_eigenvector(modularity_matrix(lg.graph));
  const EigenPair iter = leading_eigenvector(ModularityView(lg.graph), lanczos_only());
  EXPECT_NEAR(dense.value, iter.value, 1e-8);
  EXPECT_LE((dense.vector - iter.vector).norm(), 1e-6);
}

TEST(TopSingular, RankOne) {
  for (const SolverOptions& o : {SolverOptions{}, lanczos_only()}) {
    const Eigen::MatrixXd m = Eigen::MatrixXd::Constant(30, 20, 0.3);
    const SvdSummary s = top_singular(m, 2, o);
    EXPECT_NEAR(s.sigma1, 0.3 * std::sqrt(600.0), 1e-10);
    EXPECT_EQ(s.sigma2, 0.0);
  }
}

TEST(TopSingular, ZeroMatrix) {
  const SvdSummary s = top_singular(Eigen::MatrixXd::Zero(5, 4), 3);
  for (double v : s.values) EXPECT_EQ(v, 0.0);
}

TEST(TopSingular, OrthogonalColumns) {
  Eigen::MatrixXd m(3, 2);
  m << 2, 0, 0, 1, 0, 0;
  const SvdSummary s = top_singular(m, 2);
  EXPECT_NEAR(s.sigma1, 2.0, 1e-12);
  EXPECT_NEAR(s.sigma2, 1.0, 1e-12);
  EXPECT_EQ(code_of([&] { top_singular(m, 3); }), ErrorCode::kInvalidParams);
}

TEST(TopSingular, AgreesWithLaplacianSpectrumOnPsdInput) {
  const Graph g = gen_er_connected(40, 0.2, Seed{12});
  const Eigen::MatrixXd l = laplacian(g).dense();
  const auto low = smallest_k_eigen(laplacian(g), 40);
  for (const SolverOptions& o : {SolverOptions{}, lanczos_only()}) {
    const SvdSummary s = top_singular(l, 5, o);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(s.values[i], low[39 - i].value, 1e-8);
  }
}

TEST(TopSingular, WideMatrixUsesSmallerSide) {
  Rng rng(Seed{13});
  Eigen::MatrixXd m(15, 70);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const SvdSummary s = top_singular(m, 3);
  const SvdSummary it = top_singular(m, 3, lanczos_only());
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(s.values[i], svd.singularValues()[static_cast<Eigen::Index>(i)], 1e-9);
    EXPECT_NEAR(it.values[i], svd.singularValues()[static_cast<Eigen::Index>(i)], 1e-7);
  }
}

TEST(CanonicalSign, FirstSignificantEntryPositive) {
  Eigen::VectorXd v(4);
  v << 1e-12, -0.5, 0.3, 0.1;
  canonical_sign(v);
  EXPECT_GT(v[1], 0.0);
}
