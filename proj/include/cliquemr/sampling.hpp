#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "cliquemr/exact.hpp"
#include "cliquemr/graph.hpp"

namespace cliquemr {

// Plain mode keeps each ordered high-neighbor pair independently with
// probability p; color mode keeps monochromatic pairs under a per-owner
// random c-coloring. Decisions are pure functions of (seed, owner,
// endpoints), so reruns are reproducible and distinct owners sample the same
// pair independently.
struct SamplingConfig {
  enum class Mode { kPlain, kColor };
  Mode mode = Mode::kPlain;
  double p = 1.0;
  std::uint32_t colors = 1;
  std::uint64_t seed = 0;

  static SamplingConfig plain(double p, std::uint64_t seed) {
    if (!(p > 0.0) || p > 1.0)
      throw std::invalid_argument("sampling probability must be in (0,1]");
    SamplingConfig c;
    c.mode = Mode::kPlain;
    c.p = p;
    c.seed = seed;
    return c;
  }
  static SamplingConfig color(std::uint32_t colors, std::uint64_t seed) {
    if (colors < 1) throw std::invalid_argument("color count must be >= 1");
    SamplingConfig c;
    c.mode = Mode::kColor;
    c.colors = colors;
    c.seed = seed;
    return c;
  }

  // Rescaling applied to the summed local counts: a k-clique survives plain
  // sampling iff all C(k-1,2) pairs among its non-minimum nodes are kept, and
  // color sampling iff those k-1 nodes share a color.
  double scale(int k) const {
    if (mode == Mode::kPlain)
      return std::pow(p, -static_cast<double>((k - 1) * (k - 2) / 2));
    return std::pow(static_cast<double>(colors), static_cast<double>(k - 2));
  }
};

struct Estimate {
  int k = 0;
  double value = 0.0;
  SamplingConfig config;
  RunReport run_report;
};

inline bool sample_decision_plain(std::uint64_t seed, NodeId owner, NodeId x,
                                  NodeId y, double p) {
  return to_unit(mix64(seed, owner, x, y)) < p;
}

inline std::uint32_t color_of(std::uint64_t seed, NodeId owner, NodeId x,
                              std::uint32_t c) {
  if (c < 1) throw std::invalid_argument("color count must be >= 1");
  return static_cast<std::uint32_t>(mix64(seed, owner, x) % c);
}

// Runs the three-round pipeline with the sampled wedge filter and rescales
// the total. p=1 or c=1 degenerate to the exact count.
Estimate estimate(const Graph& g, int k, const SamplingConfig& config,
                  const EngineOptions& opts);

// Sides of the concentration condition for the requested configuration, with
// the unknown constant taken as 1. Advisory output only; q_k must be supplied
// by the caller (typically the estimate itself).
struct ConcentrationAdvice {
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
};
ConcentrationAdvice concentration_check(const SamplingConfig& config, int k,
                                        std::uint64_t m, double epsilon,
                                        double qk_reference);

}  // namespace cliquemr
