#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace specdet {

using Node = std::size_t;
using Edge = std::pair<Node, Node>;  // normalized so that first < second
using Labels = std::vector<int>;

// Undirected simple graph. Immutable once built: the dense adjacency view
// and the CSR neighbour lists are both populated at construction.
class Graph {
 public:
  Graph() = default;

  std::size_t node_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  // Sorted, deduplicated, first < second.
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  bool has_edge(Node i, Node j) const { return adjacency_[i * n_ + j] != 0; }

  std::span<const Node> neighbors(Node i) const {
    return {neighbors_.data() + offsets_[i], neighbors_.data() + offsets_[i + 1]};
  }

  std::size_t degree(Node i) const { return offsets_[i + 1] - offsets_[i]; }
  std::vector<double> degree_vector() const;

  Eigen::MatrixXd adjacency_matrix() const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  friend Graph build_graph(std::size_t n, std::span<const Edge> edges);

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::uint8_t> adjacency_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Node> neighbors_;
};

// Throws Error{IndexOutOfRange} or Error{SelfLoop}. Duplicate and reversed
// pairs collapse to one edge.
Graph build_graph(std::size_t n, std::span<const Edge> edges);

inline Graph build_graph(std::size_t n, const std::vector<Edge>& edges) {
  return build_graph(n, std::span<const Edge>(edges));
}

// Matrix-free L = D - A over a graph. The view borrows the graph, which
// must outlive it.
class LaplacianView {
 public:
  explicit LaplacianView(const Graph& g) : graph_(&g) {}

  std::size_t size() const noexcept { return graph_->node_count(); }
  const Graph& graph() const noexcept { return *graph_; }

  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
  Eigen::VectorXd operator*(const Eigen::VectorXd& x) const;

  // x^T L x evaluated as the sum of squared differences across edges.
  double quadratic_form(const Eigen::VectorXd& x) const;

  Eigen::MatrixXd dense() const;

  // Largest degree; 2 * max_degree bounds the spectrum from above.
  std::size_t max_degree() const;

 private:
  const Graph* graph_;
};

LaplacianView laplacian(const Graph& g);

// Matrix-free B = A - d d^T / (2m). Requires m >= 1.
class ModularityView {
 public:
  explicit ModularityView(const Graph& g);

  std::size_t size() const noexcept { return graph_->node_count(); }
  const Graph& graph() const noexcept { return *graph_; }
  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;

 private:
  const Graph* graph_;
  Eigen::VectorXd degree_;
  double two_m_;
};

// Dense modularity matrix. Throws Error{EmptyGraph} when m = 0.
Eigen::MatrixXd modularity_matrix(const Graph& g);

bool is_connected(const Graph& g);

// Component id per node, numbered in order of lowest member index.
std::vector<int> connected_components(const Graph& g);

// Node subset of a parent graph together with the relabelled induced graph.
struct SubgraphIndex {
  std::vector<Node> nodes;          // sorted parent indices
  std::vector<Edge> induced_edges;  // parent indices, both endpoints in nodes
  Graph local;                      // relabelled 0..nodes.size()-1
};

SubgraphIndex induced_subgraph(const Graph& g, std::span<const Node> nodes);

struct BlockSplit {
  SubgraphIndex first;   // label 0
  SubgraphIndex second;  // label 1
  std::vector<Edge> cross;
};

// Labels must be 0/1. Throws Error{DegenerateLabeling} if a class is empty.
BlockSplit split_blocks(const Graph& g, std::span<const int> labels);

// Inverse of split_blocks: rebuilds the parent graph from the two pieces.
Graph reassemble(std::size_t n, const BlockSplit& split);

}  // namespace specdet
