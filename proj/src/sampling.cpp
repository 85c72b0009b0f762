#include "cliquemr/sampling.hpp"

#include <cmath>

namespace cliquemr {

Estimate estimate(const Graph& g, int k, const SamplingConfig& config,
                  const EngineOptions& opts) {
  if (config.mode == SamplingConfig::Mode::kPlain) {
    if (!(config.p > 0.0) || config.p > 1.0)
      throw std::invalid_argument("sampling probability must be in (0,1]");
  } else if (config.colors < 1) {
    throw std::invalid_argument("color count must be >= 1");
  }

  PipelineTotals totals;
  if (config.mode == SamplingConfig::Mode::kPlain) {
    const double p = config.p;
    const std::uint64_t seed = config.seed;
    totals = run_clique_pipeline(
        g, k, opts, [p, seed](NodeId u, const OrderKey& x, const OrderKey& y) {
          return sample_decision_plain(seed, u, x.label, y.label, p);
        });
  } else {
    const std::uint32_t c = config.colors;
    const std::uint64_t seed = config.seed;
    totals = run_clique_pipeline(
        g, k, opts, [c, seed](NodeId u, const OrderKey& x, const OrderKey& y) {
          return color_of(seed, u, x.label, c) == color_of(seed, u, y.label, c);
        });
  }

  Estimate est;
  est.k = k;
  est.config = config;
  est.value = static_cast<double>(totals.total) * config.scale(k);
  est.run_report = std::move(totals.report);
  return est;
}

ConcentrationAdvice concentration_check(const SamplingConfig& config, int k,
                                        std::uint64_t m, double epsilon,
                                        double qk_reference) {
  ConcentrationAdvice adv;
  const double md = static_cast<double>(m);
  if (config.mode == SamplingConfig::Mode::kPlain) {
    adv.lhs = std::pow(config.p, static_cast<double>((k - 1) * (k - 2) / 2));
    adv.rhs = std::pow(md, (k - 3) / 2.0) * std::log(md) /
              (epsilon * epsilon * qk_reference);
  } else {
    adv.lhs = std::pow(static_cast<double>(config.colors),
                       -static_cast<double>(k - 2));
    adv.rhs = std::pow(md, static_cast<double>(k - 2)) * std::log(md) /
              (epsilon * epsilon * qk_reference);
  }
  adv.satisfied = adv.lhs > adv.rhs;
  return adv;
}

}  // namespace cliquemr
