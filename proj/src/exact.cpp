#include "cliquemr/exact.hpp"

namespace cliquemr {

std::vector<StagePair> annotated_edge_pairs(const Graph& g) {
  std::vector<StagePair> pairs;
  pairs.reserve(2 * g.edge_count());
  for (std::uint32_t i = 0; i < g.node_count(); ++i) {
    OrderKey self = g.order_key_at(i);
    for (const OrderKey& nb : g.neighbors_at(i))
      pairs.push_back(StagePair{StageKey{EdgeKey{self.label, nb.label}},
                                StageVal{DegPair{self.degree, nb.degree}}});
  }
  return pairs;
}

CliqueCountReport fff_count(const Graph& g, int k, const EngineOptions& opts,
                            bool per_node, const CliqueSink* sink) {
  PipelineTotals res =
      run_clique_pipeline(g, k, opts, keep_all_pairs, per_node, sink);
  CliqueCountReport report;
  report.k = k;
  report.count = res.total;
  if (per_node) report.per_node = std::move(res.per_node);
  report.run_report = std::move(res.report);
  return report;
}

}  // namespace cliquemr
