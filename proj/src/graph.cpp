#include "specdet/graph.hpp"

#include <algorithm>
#include <queue>
#include <string>

#include "specdet/error.hpp"

namespace specdet {

Graph build_graph(std::size_t n, std::span<const Edge> edges) {
  Graph g;
  g.n_ = n;
  g.adjacency_.assign(n * n, 0);

  g.edges_.reserve(edges.size());
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "edge (" + std::to_string(u) + ", " + std::to_string(v) + ") with n = " +
                      std::to_string(n));
    }
    if (u == v) {
      throw Error(ErrorCode::kSelfLoop, "node " + std::to_string(u));
    }
    g.edges_.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(g.edges_.begin(), g.edges_.end());
  g.edges_.erase(std::unique(g.edges_.begin(), g.edges_.end()), g.edges_.end());

  std::vector<std::size_t> degree(n, 0);
  for (const auto& [u, v] : g.edges_) {
    g.adjacency_[u * n + v] = 1;
    g.adjacency_[v * n + u] = 1;
    ++degree[u];
    ++degree[v];
  }

  g.offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] = g.offsets_[i] + degree[i];
  g.neighbors_.resize(g.offsets_[n]);
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& [u, v] : g.edges_) {
    g.neighbors_[cursor[u]++] = v;
    g.neighbors_[cursor[v]++] = u;
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(g.neighbors_.begin() + g.offsets_[i], g.neighbors_.begin() + g.offsets_[i + 1]);
  }
  return g;
}

std::vector<double> Graph::degree_vector() const {
  std::vector<double> d(n_);
  for (std::size_t i = 0; i < n_; ++i) d[i] = static_cast<double>(degree(i));
  return d;
}

Eigen::MatrixXd Graph::adjacency_matrix() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
  for (const auto& [u, v] : edges_) {
    a(u, v) = 1.0;
    a(v, u) = 1.0;
  }
  return a;
}

void LaplacianView::apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  const Graph& g = *graph_;
  const std::size_t n = g.node_count();
  y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (Node j : g.neighbors(i)) acc += x[j];
    y[i] = static_cast<double>(g.degree(i)) * x[i] - acc;
  }
}

Eigen::VectorXd LaplacianView::operator*(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y;
  apply(x, y);
  return y;
}

double LaplacianView::quadratic_form(const Eigen::VectorXd& x) const {
  double sum = 0.0;
  for (const auto& [u, v] : graph_->edges()) {
    const double diff = x[u] - x[v];
    sum += diff * diff;
  }
  return sum;
}

Eigen::MatrixXd LaplacianView::dense() const {
  const Graph& g = *graph_;
  Eigen::MatrixXd l = -g.adjacency_matrix();
  for (std::size_t i = 0; i < g.node_count(); ++i) l(i, i) = static_cast<double>(g.degree(i));
  return l;
}

std::size_t LaplacianView::max_degree() const {
  std::size_t best = 0;
  for (std::size_t i = 0; i < graph_->node_count(); ++i) best = std::max(best, graph_->degree(i));
  return best;
}

LaplacianView laplacian(const Graph& g) { return LaplacianView(g); }

ModularityView::ModularityView(const Graph& g) : graph_(&g) {
  if (g.edge_count() == 0) throw Error(ErrorCode::kEmptyGraph, "modularity needs m >= 1");
  const auto d = g.degree_vector();
  degree_ = Eigen::Map<const Eigen::VectorXd>(d.data(), static_cast<Eigen::Index>(d.size()));
  two_m_ = 2.0 * static_cast<double>(g.edge_count());
}

void ModularityView::apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  const Graph& g = *graph_;
  const std::size_t n = g.node_count();
  y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (Node j : g.neighbors(i)) acc += x[j];
    y[i] = acc;
  }
  const double scale = degree_.dot(x) / two_m_;
  y -= scale * degree_;
}

Eigen::MatrixXd modularity_matrix(const Graph& g) {
  if (g.edge_count() == 0) throw Error(ErrorCode::kEmptyGraph, "modularity needs m >= 1");
  const auto d = g.degree_vector();
  const Eigen::Map<const Eigen::VectorXd> dv(d.data(), static_cast<Eigen::Index>(d.size()));
  const double two_m = 2.0 * static_cast<double>(g.edge_count());
  Eigen::MatrixXd b = g.adjacency_matrix();
  b.noalias() -= dv * dv.transpose() / two_m;
  return b;
}

std::vector<int> connected_components(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<int> comp(n, -1);
  int next = 0;
  std::queue<Node> frontier;
  for (Node s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = next;
    frontier.push(s);
    while (!frontier.empty()) {
      const Node u = frontier.front();
      frontier.pop();
      for (Node v : g.neighbors(u)) {
        if (comp[v] < 0) {
          comp[v] = next;
          frontier.push(v);
        }
      }
    }
    ++next;
  }
  return comp;
}

bool is_connected(const Graph& g) {
  if (g.node_count() <= 1) return true;
  const auto comp = connected_components(g);
  return std::all_of(comp.begin(), comp.end(), [](int c) { return c == 0; });
}

SubgraphIndex induced_subgraph(const Graph& g, std::span<const Node> nodes) {
  SubgraphIndex sub;
  sub.nodes.assign(nodes.begin(), nodes.end());
  std::sort(sub.nodes.begin(), sub.nodes.end());
  sub.nodes.erase(std::unique(sub.nodes.begin(), sub.nodes.end()), sub.nodes.end());

  constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);
  std::vector<std::size_t> local_id(g.node_count(), kAbsent);
  for (std::size_t k = 0; k < sub.nodes.size(); ++k) {
    if (sub.nodes[k] >= g.node_count()) {
      throw Error(ErrorCode::kIndexOutOfRange, "subgraph node " + std::to_string(sub.nodes[k]));
    }
    local_id[sub.nodes[k]] = k;
  }

  std::vector<Edge> local_edges;
  for (const auto& [u, v] : g.edges()) {
    if (local_id[u] != kAbsent && local_id[v] != kAbsent) {
      sub.induced_edges.emplace_back(u, v);
      local_edges.emplace_back(local_id[u], local_id[v]);
    }
  }
  sub.local = build_graph(sub.nodes.size(), local_edges);
  return sub;
}

BlockSplit split_blocks(const Graph& g, std::span<const int> labels) {
  if (labels.size() != g.node_count()) {
    throw Error(ErrorCode::kLengthMismatch, "labels must cover every node");
  }
  std::vector<Node> first, second;
  for (Node i = 0; i < labels.size(); ++i) {
    if (labels[i] == 0) {
      first.push_back(i);
    } else if (labels[i] == 1) {
      second.push_back(i);
    } else {
      throw Error(ErrorCode::kInvalidParams, "bisection labels must be 0 or 1");
    }
  }
  if (first.empty() || second.empty()) {
    throw Error(ErrorCode::kDegenerateLabeling, "one label class is empty");
  }

  BlockSplit split{induced_subgraph(g, first), induced_subgraph(g, second), {}};
  for (const auto& [u, v] : g.edges()) {
    if (labels[u] != labels[v]) split.cross.emplace_back(u, v);
  }
  return split;
}

Graph reassemble(std::size_t n, const BlockSplit& split) {
  std::vector<Edge> edges;
  edges.reserve(split.first.induced_edges.size() + split.second.induced_edges.size() +
                split.cross.size());
  edges.insert(edges.end(), split.first.induced_edges.begin(), split.first.induced_edges.end());
  edges.insert(edges.end(), split.second.induced_edges.begin(), split.second.induced_edges.end());
  edges.insert(edges.end(), split.cross.begin(), split.cross.end());
  return build_graph(n, edges);
}

}  // namespace specdet
