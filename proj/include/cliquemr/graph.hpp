#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cliquemr {

// External node label, kept verbatim from the input file.
using NodeId = std::uint64_t;

struct Edge {
  NodeId u{};
  NodeId v{};
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Nodes are ordered degree-first with the label breaking ties. This is the
// total order that orients every edge and assigns each clique to a unique
// minimum node.
struct OrderKey {
  std::uint32_t degree{};
  NodeId label{};
  friend auto operator<=>(const OrderKey&, const OrderKey&) = default;
};

// Strict: true iff a comes before b in the degree/label order.
inline bool precedes(const OrderKey& a, const OrderKey& b) { return a < b; }

struct ParseError : std::runtime_error {
  ParseError(std::size_t line_no, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + what),
        line(line_no) {}
  std::size_t line;
};

struct IngestStats {
  std::uint64_t lines = 0;
  std::uint64_t self_loops_removed = 0;
  std::uint64_t duplicate_edges_merged = 0;
};

// Γ+(u): the neighbors of u that follow it in the order, sorted ascending.
struct HighNeighborhood {
  NodeId owner{};
  std::vector<OrderKey> members;
};

// Immutable undirected graph: no self-loops, no parallel edges, no isolated
// nodes. Adjacency lists carry (degree, label) pairs sorted by OrderKey, so
// the high-neighborhood of a node is a suffix of its list. Safe for
// concurrent reads once built.
class Graph {
 public:
  Graph() = default;

  std::size_t node_count() const { return labels_.size(); }
  std::uint64_t edge_count() const { return m_; }

  std::span<const NodeId> labels() const { return labels_; }

  bool has_node(NodeId label) const;
  std::uint32_t index_of(NodeId label) const;  // throws if unknown

  NodeId label_at(std::uint32_t idx) const { return labels_[idx]; }
  std::uint32_t degree_at(std::uint32_t idx) const { return degrees_[idx]; }
  std::uint32_t degree(NodeId label) const { return degrees_[index_of(label)]; }
  OrderKey order_key_at(std::uint32_t idx) const {
    return OrderKey{degrees_[idx], labels_[idx]};
  }
  OrderKey order_key(NodeId label) const { return order_key_at(index_of(label)); }

  std::span<const OrderKey> neighbors_at(std::uint32_t idx) const {
    return std::span<const OrderKey>(adjacency_)
        .subspan(offsets_[idx], offsets_[idx + 1] - offsets_[idx]);
  }
  std::span<const OrderKey> neighbors(NodeId label) const {
    return neighbors_at(index_of(label));
  }

  // Suffix of the adjacency list strictly after this node's own OrderKey.
  std::span<const OrderKey> high_neighbors_at(std::uint32_t idx) const;

  // One entry per undirected edge, endpoints (smaller-order, larger-order).
  std::vector<Edge> edge_list() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  friend Graph normalize(std::vector<Edge>, IngestStats*);
  std::vector<NodeId> labels_;          // ascending
  std::vector<std::uint32_t> degrees_;  // by index
  std::vector<std::size_t> offsets_;    // CSR, size n+1
  std::vector<OrderKey> adjacency_;     // per node sorted by OrderKey
  std::uint64_t m_ = 0;
};

// Reads an edge list: '#'-prefixed lines are comments, data lines are two
// integer labels separated by spaces or tabs. Keeps duplicates, reversals
// and self-loops; those are resolved by normalize().
std::vector<Edge> parse_edge_list(std::istream& in);

// Deduplicates, drops self-loops, computes degrees and builds sorted
// adjacency. Duplicate/self-loop tallies are reported through stats.
Graph normalize(std::vector<Edge> edges, IngestStats* stats = nullptr);

// Loads a SNAP-style edge list from a plain or gzip file (magic-byte
// detection) and normalizes it.
Graph load_graph(const std::string& path, IngestStats* stats = nullptr);

HighNeighborhood high_neighborhood(const Graph& g, NodeId u);

}  // namespace cliquemr
