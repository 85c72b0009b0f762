#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "cliquemr/graph.hpp"
#include "cliquemr/kernel.hpp"

namespace testsupport {

using cliquemr::Edge;
using cliquemr::Graph;
using cliquemr::NodeId;

inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % n;
}

// Erdos-Renyi edge list by geometric jumps over the C(n,2) pair space.
inline std::vector<Edge> gnp_edges(std::uint64_t n, double p,
                                   std::uint64_t seed) {
  std::vector<Edge> edges;
  if (n < 2 || p <= 0.0) return edges;
  std::mt19937_64 rng(seed);
  auto unit = [&] { return (rng() >> 11) * 0x1.0p-53; };
  const double logq = std::log1p(-std::min(p, 1.0 - 1e-12));
  std::uint64_t total = n * (n - 1) / 2;
  std::uint64_t idx = 0;
  if (p < 1.0) idx = static_cast<std::uint64_t>(std::floor(std::log1p(-unit()) / logq));
  while (idx < total) {
    // pair index -> (u,v), row-major over u<v
    std::uint64_t u = 0, remaining = idx;
    while (remaining >= n - 1 - u) {
      remaining -= n - 1 - u;
      ++u;
    }
    std::uint64_t v = u + 1 + remaining;
    edges.push_back(Edge{u, v});
    std::uint64_t skip =
        p >= 1.0 ? 1
                 : 1 + static_cast<std::uint64_t>(
                           std::floor(std::log1p(-unit()) / logq));
    idx += skip;
  }
  return edges;
}

inline Graph gnp_graph(std::uint64_t n, double p, std::uint64_t seed) {
  return cliquemr::normalize(gnp_edges(n, p, seed));
}

inline std::vector<Edge> complete_graph_edges(std::uint64_t n,
                                              NodeId first_label = 1) {
  std::vector<Edge> edges;
  for (std::uint64_t i = 0; i < n; ++i)
    for (std::uint64_t j = i + 1; j < n; ++j)
      edges.push_back(Edge{first_label + i, first_label + j});
  return edges;
}

// Star with `leaves` leaves: center label 0, leaves 1..leaves.
inline std::vector<Edge> star_edges(std::uint64_t leaves) {
  std::vector<Edge> edges;
  for (std::uint64_t i = 1; i <= leaves; ++i) edges.push_back(Edge{0, i});
  return edges;
}

inline std::vector<Edge> path_edges(std::uint64_t n, NodeId first_label = 1) {
  std::vector<Edge> edges;
  for (std::uint64_t i = 0; i + 1 < n; ++i)
    edges.push_back(Edge{first_label + i, first_label + i + 1});
  return edges;
}

inline cliquemr::LocalGraph local_from(const Graph& g) {
  auto edges = g.edge_list();
  return cliquemr::LocalGraph::from_edges(edges);
}

template <class K, class V>
std::string dump_pairs(const std::vector<cliquemr::KVPair<K, V>>& pairs,
                       const std::function<std::string(const K&, const V&)>& fmt) {
  std::ostringstream os;
  for (const auto& kv : pairs) os << fmt(kv.key, kv.value) << '\n';
  return os.str();
}

}  // namespace testsupport
