#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "cliquemr/exact.hpp"
#include "cliquemr/graph.hpp"
#include "cliquemr/mrengine.hpp"

namespace cliquemr {

// Non-decreasing k-tuple of buckets; one reducer identity in the multiway
// join. There are C(b+k-1, k) distinct tuples over b buckets.
struct BucketTuple {
  std::array<std::uint16_t, 16> buckets{};
  std::uint8_t size = 0;

  void push(std::uint16_t b) { buckets[size++] = b; }
  friend auto operator<=>(const BucketTuple&, const BucketTuple&) = default;
};

template <>
struct KeyHash<BucketTuple> {
  std::uint64_t operator()(const BucketTuple& t) const {
    std::uint64_t h = mix64(t.size);
    for (std::uint8_t i = 0; i < t.size; ++i) h = mix64(h, t.buckets[i]);
    return h;
  }
};

// Deterministic hash of a label into [0, b). The seed lets tests explore
// adversarial skews.
inline std::uint32_t bucket_of(NodeId node, std::uint32_t b, std::uint64_t seed) {
  if (b < 1) throw std::invalid_argument("bucket count must be >= 1");
  return static_cast<std::uint32_t>(mix64(seed, node) % b);
}

// Predicted map emissions of the multiway join: every edge is replicated once
// per (k-2)-multiset of buckets, i.e. m * C(b+k-3, k-2).
std::uint64_t afu_predicted_replication(std::uint64_t m, int k, std::uint32_t b);

struct SizingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact triangle count by the two-round wedge-join. With delayed_paths the
// round-1 reducers ship whole neighborhoods and round-2 mappers expand the
// wedges; without it the wedges are materialized by the round-1 reducers.
CliqueCountReport sv_count(const Graph& g, const EngineOptions& opts,
                           bool delayed_paths = false);

struct AfuOptions {
  std::uint32_t buckets = 2;
  std::uint64_t seed = 0;
  // Abort before running if the predicted replication exceeds this.
  std::uint64_t replication_cap = 200'000'000;
};

// Exact q_k in one round: nodes hash into b buckets, each edge is replicated
// to every tuple containing its bucket pair as a sub-multiset, and the
// reducer for tuple T counts exactly the cliques whose bucket multiset is T.
CliqueCountReport afu_count(const Graph& g, int k, const AfuOptions& afu,
                            const EngineOptions& opts);

}  // namespace cliquemr
