#pragma once

#include <cstddef>
#include <vector>

#include <gtest/gtest.h>

#include "specdet/error.hpp"
#include "specdet/graph.hpp"
#include "specdet/random.hpp"

namespace specdet::testing {

// Code of the Error thrown by fn; records a failure if nothing is thrown.
template <class Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception thrown";
  return ErrorCode::kIoError;
}

inline Graph complete(std::size_t n) {
  std::vector<Edge> e;
  for (Node i = 0; i < n; ++i)
    for (Node j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return build_graph(n, e);
}

inline Graph star(std::size_t n) {
  std::vector<Edge> e;
  for (Node i = 1; i < n; ++i) e.emplace_back(0, i);
  return build_graph(n, e);
}

inline Graph path(std::size_t n) {
  std::vector<Edge> e;
  for (Node i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return build_graph(n, e);
}

// `count` cliques of size k, clique c on nodes [c k, (c+1) k), with extra
// edges appended.
inline Graph cliques(std::size_t count, std::size_t k, const std::vector<Edge>& extra = {}) {
  std::vector<Edge> e = extra;
  for (std::size_t c = 0; c < count; ++c)
    for (Node i = 0; i < k; ++i)
      for (Node j = i + 1; j < k; ++j) e.emplace_back(c * k + i, c * k + j);
  return build_graph(count * k, e);
}

inline Graph random_graph(std::size_t n, double q, Rng& rng) {
  std::vector<Edge> e;
  for (Node i = 0; i < n; ++i)
    for (Node j = i + 1; j < n; ++j)
      if (rng.bernoulli(q)) e.emplace_back(i, j);
  return build_graph(n, e);
}

}  // namespace specdet::testing
