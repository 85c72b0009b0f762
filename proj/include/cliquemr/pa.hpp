#pragma once

#include <cstdint>

#include "cliquemr/graph.hpp"

namespace cliquemr {

// Preferential-attachment graph: a (mu+1)-clique seed, then every arriving
// node attaches mu edges to distinct existing nodes picked proportionally to
// their current degree (uniform draw from the edge-endpoint multiset).
Graph generate_pa(std::uint64_t nodes, std::uint32_t mu, std::uint64_t seed);

}  // namespace cliquemr
