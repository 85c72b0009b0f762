#include "cliquemr/kernel.hpp"

#include <algorithm>

namespace cliquemr {

LocalGraph LocalGraph::from_edges(
    std::span<const std::pair<NodeId, NodeId>> edges) {
  // Canonicalize, dedupe, drop loops.
  std::vector<std::pair<NodeId, NodeId>> es;
  es.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    if (a == b) continue;
    es.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(es.begin(), es.end());
  es.erase(std::unique(es.begin(), es.end()), es.end());

  LocalGraph g;
  g.m_ = es.size();
  std::vector<NodeId> labels;
  labels.reserve(es.size() * 2);
  for (const auto& [a, b] : es) {
    labels.push_back(a);
    labels.push_back(b);
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

  const std::size_t nv = labels.size();
  std::vector<std::uint32_t> deg(nv, 0);
  auto label_pos = [&](NodeId l) {
    return static_cast<std::uint32_t>(
        std::lower_bound(labels.begin(), labels.end(), l) - labels.begin());
  };
  for (const auto& [a, b] : es) {
    ++deg[label_pos(a)];
    ++deg[label_pos(b)];
  }

  // Rank vertices by (local degree, label); rank order is the orientation.
  std::vector<std::uint32_t> by_order(nv);
  for (std::uint32_t i = 0; i < nv; ++i) by_order[i] = i;
  std::sort(by_order.begin(), by_order.end(),
            [&](std::uint32_t a, std::uint32_t b) {
              if (deg[a] != deg[b]) return deg[a] < deg[b];
              return labels[a] < labels[b];
            });
  std::vector<std::uint32_t> rank(nv);
  for (std::uint32_t r = 0; r < nv; ++r) rank[by_order[r]] = r;

  g.labels_.resize(nv);
  std::vector<std::uint32_t> rdeg(nv);
  for (std::uint32_t r = 0; r < nv; ++r) {
    g.labels_[r] = labels[by_order[r]];
    rdeg[r] = deg[by_order[r]];
  }
  g.offsets_.assign(nv + 1, 0);
  for (std::size_t i = 0; i < nv; ++i) g.offsets_[i + 1] = g.offsets_[i] + rdeg[i];
  g.adj_.resize(2 * g.m_);
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& [a, b] : es) {
    std::uint32_t ra = rank[label_pos(a)], rb = rank[label_pos(b)];
    g.adj_[cursor[ra]++] = rb;
    g.adj_[cursor[rb]++] = ra;
  }
  for (std::size_t i = 0; i < nv; ++i)
    std::sort(g.adj_.begin() + g.offsets_[i], g.adj_.begin() + g.offsets_[i + 1]);
  return g;
}

LocalGraph LocalGraph::from_edges(std::span<const Edge> edges) {
  std::vector<std::pair<NodeId, NodeId>> es;
  es.reserve(edges.size());
  for (const Edge& e : edges) es.emplace_back(e.u, e.v);
  return from_edges(es);
}

std::uint64_t count_cliques(const LocalGraph& g, int k) {
  detail::check_clique_size(k);
  detail::NullPolicy pol;
  detail::CliqueSearch<detail::NullPolicy> search{g, pol, {}, {}};
  return search.run(k);
}

std::uint64_t count_cliques(
    const LocalGraph& g, int k,
    const std::function<void(std::span<const NodeId>)>& visitor) {
  detail::check_clique_size(k);
  std::vector<NodeId> labels(static_cast<std::size_t>(k));
  return for_each_clique(g, k, [&](std::span<const std::uint32_t> idxs) {
    for (std::size_t i = 0; i < idxs.size(); ++i) labels[i] = g.label(idxs[i]);
    visitor(std::span<const NodeId>(labels.data(), idxs.size()));
  });
}

std::uint64_t brute_force_count(const LocalGraph& g, int k) {
  detail::check_clique_size(k);
  const std::uint32_t nv = g.vertex_count();
  if (nv > 24) throw std::invalid_argument("brute force is guarded to 24 vertices");
  if (static_cast<std::uint32_t>(k) > nv) return 0;

  std::vector<std::uint32_t> adj_mask(nv, 0);
  for (std::uint32_t v = 0; v < nv; ++v)
    for (std::uint32_t w : g.neighbors(v)) adj_mask[v] |= 1u << w;

  std::vector<std::uint32_t> pick(static_cast<std::size_t>(k));
  std::uint64_t count = 0;
  // Enumerate all k-subsets as ascending index tuples and test every pair.
  auto rec = [&](auto&& self, std::uint32_t start, int depth) -> void {
    if (depth == k) {
      for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
          if (!(adj_mask[pick[i]] & (1u << pick[j]))) return;
      ++count;
      return;
    }
    for (std::uint32_t v = start; v < nv; ++v) {
      pick[depth] = v;
      self(self, v + 1, depth + 1);
    }
  };
  rec(rec, 0, 0);
  return count;
}

}  // namespace cliquemr
