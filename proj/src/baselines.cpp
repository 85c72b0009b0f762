#include "cliquemr/baselines.hpp"

#include <chrono>

#include "cliquemr/kernel.hpp"

namespace cliquemr {

namespace {

// Round-1 reduce of the two-round variant: materialize every ordered wedge
// centered at u right away.
void reduce_emit_wedges(const NodeId& u, std::span<const OrderKey> vals,
                        Emitter<StageKey, StageVal>& out) {
  MemberList members(vals.begin(), vals.end());
  std::sort(members.begin(), members.end());
  for (std::size_t i = 0; i < members.size(); ++i)
    for (std::size_t j = i + 1; j < members.size(); ++j)
      out.emit(StageKey{EdgeKey{members[i].label, members[j].label}},
               StageVal{u});
}

// Counting flavor of the marked-edge join: each owner of a marked wedge key
// closes one triangle.
void reduce_count_marked(const EdgeKey& e, std::span<const Round2Value> vals,
                         Emitter<EdgeKey, std::uint64_t>& out) {
  bool marked = false;
  std::uint64_t owners = 0;
  for (const Round2Value& v : vals) {
    if (v.is_marker())
      marked = true;
    else
      ++owners;
  }
  if (marked) out.emit(e, owners);
}

}  // namespace

CliqueCountReport sv_count(const Graph& g, const EngineOptions& opts,
                           bool delayed_paths) {
  CliqueCountReport report;
  report.k = 3;
  report.run_report.workers = opts.workers;
  if (g.node_count() < 3) return report;

  auto t0 = std::chrono::steady_clock::now();
  std::vector<StagePair> edges = annotated_edge_pairs(g);
  Engine engine(opts);

  RoundOutput<StageKey, StageVal> r1 =
      delayed_paths
          ? engine.run_round<NodeId, OrderKey, StageKey, StageVal>(
                std::span<const StagePair>(edges), map_orient_edges,
                make_reduce_high_neighborhoods(3), "high-neighborhoods")
          : engine.run_round<NodeId, OrderKey, StageKey, StageVal>(
                std::span<const StagePair>(edges), map_orient_edges,
                reduce_emit_wedges, "wedges");
  report.run_report.rounds.push_back(std::move(r1.metrics));

  auto r2 = engine.run_round<EdgeKey, Round2Value, EdgeKey, std::uint64_t>(
      std::span<const StagePair>(r1.pairs), make_map_wedges(keep_all_pairs),
      reduce_count_marked, "wedge-join", std::span<const StagePair>(edges));
  report.run_report.rounds.push_back(std::move(r2.metrics));

  for (const auto& kv : r2.pairs)
    report.count = checked_add(report.count, kv.value);
  report.run_report.total_wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                t0)
          .count();
  return report;
}

std::uint64_t afu_predicted_replication(std::uint64_t m, int k,
                                        std::uint32_t b) {
  return checked_mul(m, binomial(static_cast<std::uint64_t>(b) + k - 3, k - 2));
}

namespace {

// Kernel policy that prunes any branch whose partial bucket usage already
// exceeds the reducer's tuple.
struct BucketBudgetPolicy {
  static constexpr bool kFilters = true;
  static constexpr bool kVisits = false;
  const std::vector<std::uint16_t>& vertex_bucket;  // by internal index
  std::vector<std::uint32_t> budget;                // copies of each bucket in T
  std::vector<std::uint32_t> used;

  bool admit(std::uint32_t idx) {
    std::uint16_t b = vertex_bucket[idx];
    if (used[b] == budget[b]) return false;
    ++used[b];
    return true;
  }
  void retract(std::uint32_t idx) { --used[vertex_bucket[idx]]; }
  void clique(std::span<const std::uint32_t>) {}
};

}  // namespace

CliqueCountReport afu_count(const Graph& g, int k, const AfuOptions& afu,
                            const EngineOptions& opts) {
  if (k < 3 || k > 16) throw std::invalid_argument("k must be in [3,16]");
  if (afu.buckets < 1) throw std::invalid_argument("buckets must be >= 1");
  if (afu.buckets > 0xffff)
    throw std::invalid_argument("buckets must fit in 16 bits");

  CliqueCountReport report;
  report.k = k;
  report.run_report.workers = opts.workers;
  if (g.node_count() == 0 || static_cast<std::uint64_t>(k) > g.node_count())
    return report;

  std::uint64_t predicted = 0;
  try {
    predicted = afu_predicted_replication(g.edge_count(), k, afu.buckets);
  } catch (const std::overflow_error&) {
    throw SizingError("replication estimate overflows 64 bits; reduce buckets");
  }
  if (predicted > afu.replication_cap)
    throw SizingError("predicted replication " + std::to_string(predicted) +
                      " pairs exceeds cap " +
                      std::to_string(afu.replication_cap));

  auto t0 = std::chrono::steady_clock::now();
  const std::uint32_t b = afu.buckets;
  const std::uint64_t seed = afu.seed;

  // One pair per edge; the orientation does not matter here.
  std::vector<KVPair<EdgeKey, std::uint8_t>> input;
  input.reserve(g.edge_count());
  for (const Edge& e : g.edge_list())
    input.push_back({EdgeKey{e.u, e.v}, std::uint8_t{0}});

  auto map_replicate = [b, seed, k](const KVPair<EdgeKey, std::uint8_t>& in,
                                    Emitter<BucketTuple, EdgeKey>& out) {
    std::uint16_t i = static_cast<std::uint16_t>(bucket_of(in.key.first, b, seed));
    std::uint16_t j = static_cast<std::uint16_t>(bucket_of(in.key.second, b, seed));
    if (i > j) std::swap(i, j);
    // Walk every non-decreasing (k-2)-multiset over [0,b) with an odometer;
    // merging it with {i,j} hits each containing tuple exactly once.
    std::vector<std::uint16_t> rest(static_cast<std::size_t>(k - 2), 0);
    for (;;) {
      BucketTuple t;
      std::size_t r = 0;
      std::uint16_t pending[2] = {i, j};
      std::size_t p = 0;
      while (r < rest.size() || p < 2) {
        if (p < 2 && (r == rest.size() || pending[p] <= rest[r]))
          t.push(pending[p++]);
        else
          t.push(rest[r++]);
      }
      out.emit(t, in.key);
      std::size_t pos = rest.size();
      while (pos > 0 && rest[pos - 1] == b - 1) --pos;
      if (pos == 0) break;
      std::uint16_t v = ++rest[pos - 1];
      for (std::size_t q = pos; q < rest.size(); ++q) rest[q] = v;
    }
  };

  auto reduce_tuple = [b, seed, k](const BucketTuple& t,
                                   std::span<const EdgeKey> edges,
                                   Emitter<BucketTuple, std::uint64_t>& out) {
    LocalGraph sub = LocalGraph::from_edges(edges);
    std::vector<std::uint16_t> vertex_bucket(sub.vertex_count());
    for (std::uint32_t v = 0; v < sub.vertex_count(); ++v)
      vertex_bucket[v] =
          static_cast<std::uint16_t>(bucket_of(sub.label(v), b, seed));
    BucketBudgetPolicy pol{vertex_bucket,
                           std::vector<std::uint32_t>(b, 0),
                           std::vector<std::uint32_t>(b, 0)};
    for (std::uint8_t i = 0; i < t.size; ++i) ++pol.budget[t.buckets[i]];
    out.emit(t, count_cliques_filtered(sub, k, pol));
  };

  Engine engine(opts);
  auto r = engine.run_round<BucketTuple, EdgeKey, BucketTuple, std::uint64_t>(
      std::span<const KVPair<EdgeKey, std::uint8_t>>(input), map_replicate,
      reduce_tuple, "bucket-join");
  double emitted = static_cast<double>(r.metrics.emitted_pairs);
  report.run_report.rounds.push_back(std::move(r.metrics));

  for (const auto& kv : r.pairs)
    report.count = checked_add(report.count, kv.value);
  if (g.edge_count() > 0)
    report.replication_factor = emitted / static_cast<double>(g.edge_count());
  report.run_report.total_wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                t0)
          .count();
  return report;
}

}  // namespace cliquemr
