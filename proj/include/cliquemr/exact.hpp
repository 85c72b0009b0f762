#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "cliquemr/graph.hpp"
#include "cliquemr/kernel.hpp"
#include "cliquemr/mrengine.hpp"

namespace cliquemr {

using DegPair = std::pair<std::uint32_t, std::uint32_t>;
using EdgeKey = std::pair<NodeId, NodeId>;
using MemberList = std::vector<OrderKey>;
using OwnerList = std::vector<NodeId>;

// Pairs flowing between rounds are either node-keyed (a neighborhood) or
// edge-keyed (a raw degree-annotated edge, or a wedge with its center). One
// variant family serves both the three-round pipeline and the two-round
// wedge-join baseline.
using StageKey = std::variant<NodeId, EdgeKey>;
using StageVal = std::variant<DegPair, MemberList, NodeId>;
using StagePair = KVPair<StageKey, StageVal>;

// Value seen by the edge-keyed join reducer: either a wedge owner or the
// marker that tags the key as a genuine edge. A tagged struct, so the marker
// can never collide with a real label.
struct Round2Value {
  enum class Kind : std::uint8_t { kOwner = 0, kMarker = 1 };
  Kind kind = Kind::kOwner;
  NodeId owner = 0;

  static Round2Value owner_of(NodeId u) { return {Kind::kOwner, u}; }
  static Round2Value marker() { return {Kind::kMarker, 0}; }
  bool is_marker() const { return kind == Kind::kMarker; }
  friend auto operator<=>(const Round2Value&, const Round2Value&) = default;
};

// Partial result emitted by the last round: owned counts sum to q_k across
// keys; contained counts (per-node mode) sum to k*q_k.
struct NodeTotals {
  std::uint64_t owned = 0;
  std::uint64_t contained = 0;
  friend bool operator==(const NodeTotals&, const NodeTotals&) = default;
};

struct CliqueCountReport {
  int k = 0;
  std::uint64_t count = 0;
  std::optional<std::map<NodeId, std::uint64_t>> per_node;
  RunReport run_report;
  std::optional<double> replication_factor;  // multiway-join runs only
};

// Observes every counted clique: owner first, then the remaining members in
// the subgraph's orientation order. May be invoked concurrently from several
// reducers; the callee synchronizes.
using CliqueSink =
    std::function<void(NodeId owner, std::span<const NodeId> members)>;

// Both orientations of every edge, endpoints annotated with their degrees.
std::vector<StagePair> annotated_edge_pairs(const Graph& g);

// --- round building blocks ---

// Round 1 map: keep the orientation where the source precedes the target.
inline void map_orient_edges(const StagePair& in, Emitter<NodeId, OrderKey>& out) {
  const EdgeKey& e = std::get<EdgeKey>(in.key);
  const DegPair& d = std::get<DegPair>(in.value);
  OrderKey a{d.first, e.first}, b{d.second, e.second};
  if (a < b) out.emit(e.first, b);
}

// Round 1 reduce: assemble Γ+(u), keep it only if it can still host a
// (k-1)-clique.
inline auto make_reduce_high_neighborhoods(int k) {
  return [k](const NodeId& u, std::span<const OrderKey> vals,
             Emitter<StageKey, StageVal>& out) {
    if (vals.size() + 1 < static_cast<std::size_t>(k)) return;
    MemberList members(vals.begin(), vals.end());
    std::sort(members.begin(), members.end());
    out.emit(StageKey{u}, StageVal{std::move(members)});
  };
}

// Round 2 map: neighborhoods fan out their ordered pairs (subject to the
// filter — sampling plugs in here), raw edges emit the marker once, and
// pre-built wedges pass through.
template <class PairFilter>
auto make_map_wedges(PairFilter filter) {
  return [filter](const StagePair& in, Emitter<EdgeKey, Round2Value>& out) {
    if (const EdgeKey* e = std::get_if<EdgeKey>(&in.key)) {
      if (const DegPair* d = std::get_if<DegPair>(&in.value)) {
        OrderKey a{d->first, e->first}, b{d->second, e->second};
        if (a < b) out.emit(*e, Round2Value::marker());
      } else {
        out.emit(*e, Round2Value::owner_of(std::get<NodeId>(in.value)));
      }
      return;
    }
    NodeId u = std::get<NodeId>(in.key);
    const MemberList& m = std::get<MemberList>(in.value);
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = i + 1; j < m.size(); ++j)
        if (filter(u, m[i], m[j]))
          out.emit(EdgeKey{m[i].label, m[j].label}, Round2Value::owner_of(u));
  };
}

inline bool keep_all_pairs(NodeId, const OrderKey&, const OrderKey&) {
  return true;
}

// Round 2 reduce: a key is a genuine edge iff the marker is present; then its
// owners are exactly the nodes whose induced neighborhood needs the edge.
inline void reduce_join_marked_edges(const EdgeKey& e,
                                     std::span<const Round2Value> vals,
                                     Emitter<EdgeKey, OwnerList>& out) {
  bool marked = false;
  OwnerList owners;
  owners.reserve(vals.size());
  for (const Round2Value& v : vals) {
    if (v.is_marker()) {
      assert(!marked);  // edges are deduplicated upstream
      marked = true;
    } else {
      owners.push_back(v.owner);
    }
  }
  if (marked) out.emit(e, std::move(owners));
}

// Round 3 map: route each surviving edge to every owner that needs it.
inline void map_fan_out_owners(const KVPair<EdgeKey, OwnerList>& in,
                               Emitter<NodeId, EdgeKey>& out) {
  for (NodeId u : in.value) out.emit(u, in.key);
}

// Round 3 reduce: rebuild the owner's induced subgraph and count its
// (k-1)-cliques; per-node mode also tallies how often each member appears.
inline auto make_reduce_local_counts(int k, bool per_node,
                                     const CliqueSink* sink) {
  return [k, per_node, sink](const NodeId& u, std::span<const EdgeKey> edges,
                             Emitter<NodeId, NodeTotals>& out) {
    LocalGraph sub = LocalGraph::from_edges(edges);
    if (!per_node && !sink) {
      out.emit(u, NodeTotals{count_cliques(sub, k - 1), 0});
      return;
    }
    std::vector<std::uint64_t> incidence(sub.vertex_count(), 0);
    std::vector<NodeId> labels;
    labels.reserve(static_cast<std::size_t>(k));
    std::uint64_t owned =
        for_each_clique(sub, k - 1, [&](std::span<const std::uint32_t> idxs) {
          for (std::uint32_t i : idxs) ++incidence[i];
          if (sink) {
            labels.clear();
            for (std::uint32_t i : idxs) labels.push_back(sub.label(i));
            (*sink)(u, std::span<const NodeId>(labels));
          }
        });
    out.emit(u, NodeTotals{owned, per_node ? owned : 0});
    if (per_node)
      for (std::uint32_t i = 0; i < sub.vertex_count(); ++i)
        if (incidence[i]) out.emit(sub.label(i), NodeTotals{0, incidence[i]});
  };
}

struct PipelineTotals {
  std::uint64_t total = 0;
  std::map<NodeId, std::uint64_t> per_node;
  RunReport report;
};

// The full three-round dataflow, parameterized over the wedge filter so the
// sampling estimators are drop-in variants of the exact run.
template <class PairFilter>
PipelineTotals run_clique_pipeline(const Graph& g, int k,
                                   const EngineOptions& opts,
                                   PairFilter&& filter, bool per_node = false,
                                   const CliqueSink* sink = nullptr) {
  if (k < 3 || k > 16) throw std::invalid_argument("k must be in [3,16]");
  PipelineTotals res;
  res.report.workers = opts.workers;
  if (g.node_count() == 0 || static_cast<std::uint64_t>(k) > g.node_count())
    return res;

  auto t0 = std::chrono::steady_clock::now();
  std::vector<StagePair> edges = annotated_edge_pairs(g);
  Engine engine(opts);

  auto r1 = engine.run_round<NodeId, OrderKey, StageKey, StageVal>(
      std::span<const StagePair>(edges), map_orient_edges,
      make_reduce_high_neighborhoods(k), "high-neighborhoods");
  res.report.rounds.push_back(std::move(r1.metrics));

  auto r2 = engine.run_round<EdgeKey, Round2Value, EdgeKey, OwnerList>(
      std::span<const StagePair>(r1.pairs),
      make_map_wedges(std::forward<PairFilter>(filter)),
      reduce_join_marked_edges, "wedge-join", std::span<const StagePair>(edges));
  res.report.rounds.push_back(std::move(r2.metrics));
  r1.pairs.clear();
  r1.pairs.shrink_to_fit();
  edges.clear();
  edges.shrink_to_fit();

  auto r3 = engine.run_round<NodeId, EdgeKey, NodeId, NodeTotals>(
      std::span<const KVPair<EdgeKey, OwnerList>>(r2.pairs),
      map_fan_out_owners, make_reduce_local_counts(k, per_node, sink),
      "local-count");
  res.report.rounds.push_back(std::move(r3.metrics));

  for (const auto& kv : r3.pairs) {
    res.total = checked_add(res.total, kv.value.owned);
    if (per_node && kv.value.contained > 0)
      res.per_node[kv.key] =
          checked_add(res.per_node[kv.key], kv.value.contained);
  }
  res.report.total_wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                t0)
          .count();
  return res;
}

// Exact q_k by the three-round pipeline. With per_node, the report also maps
// every node to the number of k-cliques containing it (summing to k*q_k).
CliqueCountReport fff_count(const Graph& g, int k, const EngineOptions& opts,
                            bool per_node = false,
                            const CliqueSink* sink = nullptr);

}  // namespace cliquemr
