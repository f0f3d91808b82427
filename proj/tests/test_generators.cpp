#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "helpers.hpp"
#include "specdet/generators.hpp"

using namespace specdet;
using namespace specdet::testing;

namespace {

double degree_variance(const Graph& g) {
  const auto d = g.degree_vector();
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
  double ss = 0.0;
  for (double x : d) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(d.size());
}

}  // namespace

TEST(Seed, StreamsAreDistinctAndStable) {
  const Seed s{42};
  EXPECT_EQ(s.stream(3), Seed{42}.stream(3));
  EXPECT_NE(s.stream(3).value, s.stream(4).value);
  EXPECT_NE(s.stream(0).value, Seed{43}.stream(0).value);
}

TEST(Rng, UniformRangeAndBelow) {
  Rng rng(Seed{1});
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(rng.below(7), 7u);
  }
}

TEST(ErdosRenyi, Extremes) {
  EXPECT_EQ(gen_er(12, 1.0, Seed{1}), complete(12));
  EXPECT_EQ(gen_er(12, 0.0, Seed{1}).edge_count(), 0u);
  EXPECT_EQ(code_of([] { gen_er(0, 0.5, Seed{1}); }), ErrorCode::kInvalidParams);
  EXPECT_EQ(code_of([] { gen_er(5, 1.5, Seed{1}); }), ErrorCode::kInvalidParams);
}

TEST(ErdosRenyi, DegreesConcentrate) {
  // Binomial(999, 0.2) degrees: at least 99% inside mean +- 3 sd.
  const double mean = 0.2 * 999;
  const double band = 3.0 * std::sqrt(999 * 0.2 * 0.8);
  std::size_t inside = 0, total = 0;
  for (std::uint64_t t = 0; t < 5; ++t) {
    const Graph g = gen_er(1000, 0.2, Seed{100}.stream(t));
    for (Node i = 0; i < 1000; ++i) {
      inside += std::abs(static_cast<double>(g.degree(i)) - mean) <= band ? 1 : 0;
      ++total;
    }
  }
  EXPECT_GE(static_cast<double>(inside) / static_cast<double>(total), 0.99);
}

TEST(ErdosRenyi, ConnectedDraws) {
  EXPECT_TRUE(is_connected(gen_er_connected(100, 0.3, Seed{5})));
  EXPECT_EQ(gen_er_connected(1, 0.5, Seed{5}).node_count(), 1u);
  EXPECT_EQ(code_of([] { gen_er_connected(10, 0.0, Seed{5}); }), ErrorCode::kConnectivityFailure);
  // Attempt a is seed.stream(a): the first connected attempt is returned.
  const Seed seed{77};
  const Graph g = gen_er_connected(30, 0.1, seed);
  for (std::uint64_t a = 0; a < kDefaultMaxAttempts; ++a) {
    const Graph candidate = gen_er(30, 0.1, seed.stream(a));
    if (is_connected(candidate)) {
      EXPECT_EQ(g, candidate);
      break;
    }
  }
}

TEST(ErdosRenyi, Deterministic) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    EXPECT_EQ(gen_er(80, 0.1, Seed{s}), gen_er(80, 0.1, Seed{s}));
  }
  EXPECT_NE(gen_er(80, 0.1, Seed{1}), gen_er(80, 0.1, Seed{2}));
}

TEST(TwoBlock, ExtremeCrossProbabilities) {
  const TwoBlockSpec none{complete(5), path(7), 0.0};
  const LabeledGraph a = gen_two_block(none, Seed{1});
  EXPECT_EQ(a.graph.edge_count(), 10u + 6u);
  const TwoBlockSpec all{complete(5), path(7), 1.0};
  const LabeledGraph b = gen_two_block(all, Seed{1});
  EXPECT_EQ(split_blocks(b.graph, b.truth).cross.size(), 35u);
}

TEST(TwoBlock, PreservesBlocksVerbatim) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Graph b1 = gen_er_connected(15, 0.4, Seed{s}.stream(0));
    const Graph b2 = gen_ws_connected({20, 4, 0.3}, Seed{s}.stream(1));
    const LabeledGraph lg = gen_two_block({b1, b2, 0.2}, Seed{s});
    ASSERT_EQ(lg.truth.size(), 35u);
    EXPECT_EQ(lg.truth[14], 0);
    EXPECT_EQ(lg.truth[15], 1);
    const BlockSplit split = split_blocks(lg.graph, lg.truth);
    EXPECT_EQ(split.first.local, b1);
    EXPECT_EQ(split.second.local, b2);
  }
}

TEST(TwoBlock, RejectsDisconnectedBlocks) {
  const Graph broken = build_graph(4, {{0, 1}, {2, 3}});
  EXPECT_EQ(code_of([&] { gen_two_block({broken, complete(3), 0.1}, Seed{1}); }),
            ErrorCode::kInvalidParams);
  EXPECT_EQ(code_of([&] { gen_two_block({complete(3), complete(3), -0.1}, Seed{1}); }),
            ErrorCode::kInvalidParams);
}

TEST(TwoBlock, CrossCountBinomialBand) {
  // n1 = n2 = 200, p = 0.1: 4000 +- 3 sqrt(40000 * 0.09) for >= 99% of seeds.
  const Graph b1 = complete(200);
  const Graph b2 = complete(200);
  const double band = 3.0 * std::sqrt(40000 * 0.1 * 0.9);
  int inside = 0;
  const int seeds = 200;
  for (int s = 0; s < seeds; ++s) {
    const LabeledGraph lg = gen_two_block({b1, b2, 0.1}, Seed{static_cast<std::uint64_t>(s)});
    const double cross = static_cast<double>(lg.graph.edge_count() - 2 * 19900);
    inside += std::abs(cross - 4000.0) <= band ? 1 : 0;
  }
  EXPECT_GE(inside, static_cast<int>(0.99 * seeds));
}

TEST(TwoBlock, CrossCountMeanTest) {
  // 1000 trials of Binomial(600, 0.3): sample mean within 3 standard errors.
  const Graph b1 = complete(20);
  const Graph b2 = complete(30);
  const double base = 190 + 435;
  double sum = 0.0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    const LabeledGraph lg = gen_two_block({b1, b2, 0.3}, Seed{9}.stream(static_cast<std::uint64_t>(t)));
    sum += static_cast<double>(lg.graph.edge_count()) - base;
  }
  const double mean = sum / trials;
  EXPECT_NEAR(mean, 180.0, 3.0 * std::sqrt(600 * 0.3 * 0.7 / trials));
}

TEST(Sbm, DisjointCliques) {
  const LabeledGraph lg = gen_sbm({6, 9, 1.0, 1.0, 0.0}, Seed{3});
  const Graph k6 = complete(6);
  const Graph k9 = complete(9);
  std::vector<Edge> expected = k6.edges();
  for (const auto& [u, v] : k9.edges()) expected.emplace_back(u + 6, v + 6);
  EXPECT_EQ(lg.graph, build_graph(15, expected));
  EXPECT_FALSE(is_connected(lg.graph));
}

TEST(Sbm, PlantedClique) {
  const LabeledGraph lg = gen_sbm({10, 40, 1.0, 0.3, 0.3}, Seed{4});
  const BlockSplit split = split_blocks(lg.graph, lg.truth);
  EXPECT_EQ(split.first.local, complete(10));
  EXPECT_TRUE(is_connected(split.second.local));
}

TEST(Sbm, UsesDocumentedStreams) {
  const Seed seed{2024};
  const SbmSpec spec{25, 35, 0.3, 0.25, 0.05};
  const LabeledGraph lg = gen_sbm(spec, seed);
  const Graph b1 = gen_er_connected(25, 0.3, seed.stream(1));
  const Graph b2 = gen_er_connected(35, 0.25, seed.stream(2));
  Rng rng(seed.stream(3));
  const LabeledGraph manual = join_blocks(b1, b2, 0.05, rng);
  EXPECT_EQ(lg.graph, manual.graph);
  EXPECT_EQ(lg.truth, manual.truth);
}

TEST(Sbm, FigureEnsembleSizes) {
  const LabeledGraph lg = gen_sbm({2000, 2000, 0.25, 0.25, 0.1}, Seed{1});
  EXPECT_EQ(lg.graph.node_count(), 4000u);
}

TEST(WattsStrogatz, RingLattice) {
  const Graph g = gen_ws({20, 4, 0.0}, Seed{1});
  EXPECT_EQ(g.edge_count(), 40u);
  for (Node i = 0; i < 20; ++i) {
    EXPECT_EQ(g.degree(i), 4u);
    EXPECT_TRUE(g.has_edge(i, (i + 1) % 20));
    EXPECT_TRUE(g.has_edge(i, (i + 2) % 20));
  }
}

TEST(WattsStrogatz, EdgeCountPreserved) {
  for (double beta : {0.2, 0.8, 1.0}) {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const Graph g = gen_ws({500, 100, beta}, Seed{s});
      EXPECT_EQ(g.edge_count(), 500u * 100 / 2);
    }
  }
}

TEST(WattsStrogatz, RejectsBadParams) {
  EXPECT_EQ(code_of([] { gen_ws({10, 3, 0.1}, Seed{1}); }), ErrorCode::kInvalidParams);
  EXPECT_EQ(code_of([] { gen_ws({10, 10, 0.1}, Seed{1}); }), ErrorCode::kInvalidParams);
  EXPECT_EQ(code_of([] { gen_ws({10, 0, 0.1}, Seed{1}); }), ErrorCode::kInvalidParams);
  EXPECT_EQ(code_of([] { gen_ws({10, 4, 1.1}, Seed{1}); }), ErrorCode::kInvalidParams);
}

TEST(WattsStrogatz, FullRewiringMovesTowardErDegreeSpread) {
  // The lattice has zero degree variance. Full rewiring keeps each node's
  // k/2 clockwise stubs, so the spread approaches an ER graph with the same
  // m from below: roughly half of the binomial variance.
  const std::size_t n = 200, k = 20;
  const double q = static_cast<double>(k) / static_cast<double>(n - 1);
  const double er_oracle = static_cast<double>(n - 1) * q * (1 - q);
  double ws = 0.0, er = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    ws += degree_variance(gen_ws({n, k, 1.0}, Seed{s}));
    er += degree_variance(gen_er(n, q, Seed{s}));
  }
  ws /= 100;
  er /= 100;
  EXPECT_NEAR(er, er_oracle, 0.1 * er_oracle);
  EXPECT_GT(ws, 0.35 * er_oracle);
  EXPECT_LT(ws, 1.0 * er_oracle);
}

TEST(WattsStrogatz, Deterministic) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    EXPECT_EQ(gen_ws({60, 6, 0.4}, Seed{s}), gen_ws({60, 6, 0.4}, Seed{s}));
  }
}

TEST(WattsStrogatz, ConnectedVariant) {
  const Graph g = gen_ws_connected({500, 100, 0.2}, Seed{1});
  EXPECT_TRUE(is_connected(g));
}
