#pragma once

#include <cstddef>

#include "specdet/graph.hpp"
#include "specdet/random.hpp"

namespace specdet {

inline constexpr int kDefaultMaxAttempts = 100;

// Two arbitrary connected blocks joined by Bernoulli(p) cross edges.
struct TwoBlockSpec {
  Graph block1;
  Graph block2;
  double p = 0.0;
};

// Two-block model with Erdos-Renyi blocks.
struct SbmSpec {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  double p1 = 0.0;
  double p2 = 0.0;
  double p = 0.0;
};

// Watts-Strogatz small world: ring lattice of even degree k, each lattice
// edge rewired with probability beta.
struct WsSpec {
  std::size_t n = 0;
  std::size_t k = 0;
  double beta = 0.0;
};

// A generated graph with its planted block labels (0 for block 1, 1 for
// block 2; block 1 occupies nodes [0, n1)).
struct LabeledGraph {
  Graph graph;
  Labels truth;
};

Graph gen_er(std::size_t n, double q, Seed seed);

// Redraws the whole graph (attempt a uses seed.stream(a)) until it is
// connected. Throws Error{ConnectivityFailure} after max_attempts draws.
Graph gen_er_connected(std::size_t n, double q, Seed seed,
                       int max_attempts = kDefaultMaxAttempts);

LabeledGraph gen_two_block(const TwoBlockSpec& spec, Seed seed);

// Blocks come from seed.stream(1) and seed.stream(2), cross edges from
// seed.stream(3).
LabeledGraph gen_sbm(const SbmSpec& spec, Seed seed, int max_attempts = kDefaultMaxAttempts);

Graph gen_ws(const WsSpec& spec, Seed seed);

Graph gen_ws_connected(const WsSpec& spec, Seed seed, int max_attempts = kDefaultMaxAttempts);

// Joins two blocks with an explicit cross-edge draw; shared by
// gen_two_block and the sweep harness, which reuses blocks across p.
LabeledGraph join_blocks(const Graph& block1, const Graph& block2, double p, Rng& rng);

}  // namespace specdet
