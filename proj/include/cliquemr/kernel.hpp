#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cliquemr/common.hpp"
#include "cliquemr/graph.hpp"

namespace cliquemr {

inline constexpr int kMaxCliqueSize = 32;

// A small standalone graph, as a reducer rebuilds it from a bag of edges.
// Vertices are re-indexed 0..nv-1 sorted by (local degree, label), so the
// index order is the orientation order and the high-neighborhood of a vertex
// is a suffix of its sorted adjacency list.
class LocalGraph {
 public:
  LocalGraph() = default;

  static LocalGraph from_edges(std::span<const std::pair<NodeId, NodeId>> edges);
  static LocalGraph from_edges(std::span<const Edge> edges);

  std::uint32_t vertex_count() const {
    return static_cast<std::uint32_t>(labels_.size());
  }
  std::uint64_t edge_count() const { return m_; }

  NodeId label(std::uint32_t idx) const { return labels_[idx]; }
  std::uint32_t local_degree(std::uint32_t idx) const {
    return static_cast<std::uint32_t>(offsets_[idx + 1] - offsets_[idx]);
  }
  std::span<const std::uint32_t> neighbors(std::uint32_t idx) const {
    return std::span<const std::uint32_t>(adj_).subspan(
        offsets_[idx], offsets_[idx + 1] - offsets_[idx]);
  }
  // Neighbors with a larger index, i.e. later in the orientation order.
  std::span<const std::uint32_t> high_neighbors(std::uint32_t idx) const {
    auto nb = neighbors(idx);
    auto it = std::upper_bound(nb.begin(), nb.end(), idx);
    return nb.subspan(static_cast<std::size_t>(it - nb.begin()));
  }

 private:
  std::vector<NodeId> labels_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> adj_;
  std::uint64_t m_ = 0;
};

namespace detail {

// Search policy that neither filters vertices nor observes cliques; the last
// recursion level is then counted in bulk.
struct NullPolicy {
  static constexpr bool kFilters = false;
  static constexpr bool kVisits = false;
  bool admit(std::uint32_t) { return true; }
  void retract(std::uint32_t) {}
  void clique(std::span<const std::uint32_t>) {}
};

inline void intersect_sorted(const std::uint32_t* a_begin,
                             const std::uint32_t* a_end,
                             std::span<const std::uint32_t> b,
                             std::vector<std::uint32_t>& out) {
  const std::uint32_t* bp = b.data();
  const std::uint32_t* b_end = b.data() + b.size();
  while (a_begin != a_end && bp != b_end) {
    if (*a_begin < *bp) {
      ++a_begin;
    } else if (*bp < *a_begin) {
      ++bp;
    } else {
      out.push_back(*a_begin);
      ++a_begin;
      ++bp;
    }
  }
}

// Ordered DFS over vertex indices: every clique is generated once, as its
// ascending index sequence. cand holds the common neighborhood of the chosen
// prefix restricted to indices past the last choice, so the candidate set
// strictly shrinks with depth.
template <class Policy>
struct CliqueSearch {
  const LocalGraph& g;
  Policy& pol;
  std::vector<std::vector<std::uint32_t>> cand;
  std::vector<std::uint32_t> chosen;

  std::uint64_t run(int k) {
    const std::uint32_t nv = g.vertex_count();
    if (static_cast<std::uint32_t>(k) > nv) return 0;
    cand.assign(static_cast<std::size_t>(k) + 1, {});
    chosen.clear();
    chosen.reserve(k);
    auto& roots = cand[0];
    roots.resize(nv);
    for (std::uint32_t i = 0; i < nv; ++i) roots[i] = i;
    return descend(0, k);
  }

  std::uint64_t descend(int level, int remaining) {
    const auto& cur = cand[level];
    if (remaining == 1) {
      if constexpr (!Policy::kFilters && !Policy::kVisits) {
        return cur.size();
      } else {
        std::uint64_t found = 0;
        for (std::uint32_t x : cur) {
          if (!pol.admit(x)) continue;
          chosen.push_back(x);
          if constexpr (Policy::kVisits) pol.clique(chosen);
          ++found;
          chosen.pop_back();
          pol.retract(x);
        }
        return found;
      }
    }
    std::uint64_t total = 0;
    for (std::size_t pos = 0; pos < cur.size(); ++pos) {
      if (cur.size() - pos < static_cast<std::size_t>(remaining)) break;
      std::uint32_t x = cur[pos];
      if constexpr (Policy::kFilters) {
        if (!pol.admit(x)) continue;
      }
      chosen.push_back(x);
      auto& next = cand[level + 1];
      next.clear();
      intersect_sorted(cur.data() + pos + 1, cur.data() + cur.size(),
                       g.high_neighbors(x), next);
      assert(next.size() < cur.size());
      total = checked_add(total, descend(level + 1, remaining - 1));
      chosen.pop_back();
      if constexpr (Policy::kFilters) pol.retract(x);
    }
    return total;
  }
};

inline void check_clique_size(int k) {
  if (k < 1 || k > kMaxCliqueSize)
    throw std::invalid_argument("clique size must be in [1, " +
                                std::to_string(kMaxCliqueSize) + "]");
}

template <class Visit>
struct VisitPolicy {
  static constexpr bool kFilters = false;
  static constexpr bool kVisits = true;
  Visit& v;
  bool admit(std::uint32_t) { return true; }
  void retract(std::uint32_t) {}
  void clique(std::span<const std::uint32_t> c) { v(c); }
};

}  // namespace detail

// Counts k-cliques under a caller-supplied policy; used for bucket-budget
// pruning where branches that cannot fit a reducer's tuple are cut early.
template <class Policy>
std::uint64_t count_cliques_filtered(const LocalGraph& g, int k, Policy& pol) {
  detail::check_clique_size(k);
  detail::CliqueSearch<Policy> search{g, pol, {}, {}};
  return search.run(k);
}

// Enumerates every k-clique once; visit receives the ascending internal
// vertex indices.
template <class Visit>
std::uint64_t for_each_clique(const LocalGraph& g, int k, Visit&& visit) {
  detail::VisitPolicy<Visit> pol{visit};
  return count_cliques_filtered(g, k, pol);
}

// Exact number of k-cliques. k=1 counts vertices, k=2 edges.
std::uint64_t count_cliques(const LocalGraph& g, int k);

// Same count, invoking the visitor once per clique with the vertex labels in
// orientation order.
std::uint64_t count_cliques(
    const LocalGraph& g, int k,
    const std::function<void(std::span<const NodeId>)>& visitor);

// Test oracle: explicitly enumerates every k-subset of the vertices and
// keeps those that are pairwise adjacent. Guarded to 24 vertices.
std::uint64_t brute_force_count(const LocalGraph& g, int k);

}  // namespace cliquemr
