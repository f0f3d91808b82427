#include "specdet/generators.hpp"

#include <string>
#include <vector>

#include "specdet/error.hpp"

namespace specdet {
namespace {

void require_probability(double q, const char* name) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw Error(ErrorCode::kInvalidParams,
                std::string(name) + " must lie in [0, 1], got " + std::to_string(q));
  }
}

}  // namespace

Graph gen_er(std::size_t n, double q, Seed seed) {
  if (n == 0) throw Error(ErrorCode::kInvalidParams, "ER graph needs n >= 1");
  require_probability(q, "q");
  Rng rng(seed);
  std::vector<Edge> edges;
  for (Node i = 0; i < n; ++i) {
    for (Node j = i + 1; j < n; ++j) {
      if (rng.bernoulli(q)) edges.emplace_back(i, j);
    }
  }
  return build_graph(n, edges);
}

Graph gen_er_connected(std::size_t n, double q, Seed seed, int max_attempts) {
  if (n == 0) throw Error(ErrorCode::kInvalidParams, "ER graph needs n >= 1");
  require_probability(q, "q");
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Graph g = gen_er(n, q, seed.stream(static_cast<std::uint64_t>(attempt)));
    if (is_connected(g)) return g;
  }
  throw Error(ErrorCode::kConnectivityFailure,
              "no connected ER(" + std::to_string(n) + ", " + std::to_string(q) + ") draw in " +
                  std::to_string(max_attempts) + " attempts");
}

LabeledGraph join_blocks(const Graph& block1, const Graph& block2, double p, Rng& rng) {
  const std::size_t n1 = block1.node_count();
  const std::size_t n2 = block2.node_count();
  std::vector<Edge> edges;
  edges.reserve(block1.edge_count() + block2.edge_count() +
                static_cast<std::size_t>(p * static_cast<double>(n1 * n2) * 1.1));
  edges.insert(edges.end(), block1.edges().begin(), block1.edges().end());
  for (const auto& [u, v] : block2.edges()) edges.emplace_back(u + n1, v + n1);
  for (Node i = 0; i < n1; ++i) {
    for (Node j = 0; j < n2; ++j) {
      if (rng.bernoulli(p)) edges.emplace_back(i, n1 + j);
    }
  }
  LabeledGraph out{build_graph(n1 + n2, edges), Labels(n1 + n2, 0)};
  for (std::size_t j = 0; j < n2; ++j) out.truth[n1 + j] = 1;
  return out;
}

LabeledGraph gen_two_block(const TwoBlockSpec& spec, Seed seed) {
  require_probability(spec.p, "p");
  if (spec.block1.node_count() == 0 || spec.block2.node_count() == 0) {
    throw Error(ErrorCode::kInvalidParams, "both blocks need at least one node");
  }
  if (!is_connected(spec.block1) || !is_connected(spec.block2)) {
    throw Error(ErrorCode::kInvalidParams, "both blocks must be connected");
  }
  Rng rng(seed);
  return join_blocks(spec.block1, spec.block2, spec.p, rng);
}

LabeledGraph gen_sbm(const SbmSpec& spec, Seed seed, int max_attempts) {
  require_probability(spec.p1, "p1");
  require_probability(spec.p2, "p2");
  require_probability(spec.p, "p");
  if (spec.n1 == 0 || spec.n2 == 0) {
    throw Error(ErrorCode::kInvalidParams, "block sizes must be >= 1");
  }
  const Graph block1 = gen_er_connected(spec.n1, spec.p1, seed.stream(1), max_attempts);
  const Graph block2 = gen_er_connected(spec.n2, spec.p2, seed.stream(2), max_attempts);
  Rng rng(seed.stream(3));
  return join_blocks(block1, block2, spec.p, rng);
}

Graph gen_ws(const WsSpec& spec, Seed seed) {
  const std::size_t n = spec.n;
  const std::size_t k = spec.k;
  if (k == 0 || k % 2 != 0 || k >= n) {
    throw Error(ErrorCode::kInvalidParams, "Watts-Strogatz needs even k with 0 < k < n");
  }
  require_probability(spec.beta, "beta");

  std::vector<std::uint8_t> adj(n * n, 0);
  std::vector<std::size_t> degree(n, k);
  auto link = [&](Node a, Node b, std::uint8_t on) {
    adj[a * n + b] = on;
    adj[b * n + a] = on;
  };
  for (Node i = 0; i < n; ++i) {
    for (std::size_t j = 1; j <= k / 2; ++j) link(i, (i + j) % n, 1);
  }

  // Rewire the far endpoint of each clockwise lattice edge once, in
  // order of lattice distance and then node index.
  Rng rng(seed);
  for (std::size_t j = 1; j <= k / 2; ++j) {
    for (Node i = 0; i < n; ++i) {
      const Node far = (i + j) % n;
      if (!rng.bernoulli(spec.beta)) continue;
      if (!adj[i * n + far] || degree[i] >= n - 1) continue;
      Node w;
      do {
        w = static_cast<Node>(rng.below(n));
      } while (w == i || adj[i * n + w]);
      link(i, far, 0);
      link(i, w, 1);
      --degree[far];
      ++degree[w];
    }
  }

  std::vector<Edge> edges;
  edges.reserve(n * k / 2);
  for (Node i = 0; i < n; ++i) {
    for (Node j = i + 1; j < n; ++j) {
      if (adj[i * n + j]) edges.emplace_back(i, j);
    }
  }
  return build_graph(n, edges);
}

Graph gen_ws_connected(const WsSpec& spec, Seed seed, int max_attempts) {
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Graph g = gen_ws(spec, seed.stream(static_cast<std::uint64_t>(attempt)));
    if (is_connected(g)) return g;
  }
  throw Error(ErrorCode::kConnectivityFailure,
              "no connected Watts-Strogatz draw in " + std::to_string(max_attempts) + " attempts");
}

}  // namespace specdet
