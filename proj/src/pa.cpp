#include "cliquemr/pa.hpp"

#include <random>
#include <stdexcept>

namespace cliquemr {

namespace {

// Bounded uniform draw by rejection; stable across standard library
// implementations, unlike std::uniform_int_distribution.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % n;
}

}  // namespace

Graph generate_pa(std::uint64_t nodes, std::uint32_t mu, std::uint64_t seed) {
  if (mu < 1) throw std::invalid_argument("mu must be >= 1");
  if (nodes < mu + 1)
    throw std::invalid_argument("need at least mu+1 nodes for the seed clique");

  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  edges.reserve((static_cast<std::size_t>(mu) * (mu + 1)) / 2 +
                mu * (nodes - mu - 1));
  // Endpoint multiset: each node appears once per incident edge, so a uniform
  // element is a degree-proportional node draw.
  std::vector<NodeId> endpoints;

  for (NodeId u = 0; u <= mu; ++u)
    for (NodeId v = u + 1; v <= mu; ++v) {
      edges.push_back(Edge{u, v});
      endpoints.push_back(u);
      endpoints.push_back(v);
    }

  std::vector<NodeId> targets;
  for (NodeId t = mu + 1; t < nodes; ++t) {
    targets.clear();
    const std::size_t pool = endpoints.size();  // frozen for this arrival
    while (targets.size() < mu) {
      NodeId cand = endpoints[uniform_below(rng, pool)];
      bool dup = false;
      for (NodeId existing : targets) dup |= (existing == cand);
      if (!dup) targets.push_back(cand);
    }
    for (NodeId v : targets) {
      edges.push_back(Edge{t, v});
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return normalize(std::move(edges));
}

}  // namespace cliquemr
