#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cliquemr/mrengine.hpp"

namespace cliquemr {

struct DatasetRef {
  std::string name;
  std::string path;
};

// Manifest lines are "name path", '#' comments allowed; relative paths
// resolve against the manifest's directory.
std::vector<DatasetRef> load_manifest(const std::string& path);

struct BenchParams {
  std::uint32_t buckets = 2;      // afu
  bool delayed_paths = false;     // sv
  double p = 0.1;                 // plain estimator
  std::uint32_t colors = 10;      // color estimator
  std::uint64_t seed = 1;
  std::uint64_t afu_cap = 200'000'000;
};

struct BenchSpec {
  std::vector<DatasetRef> datasets;
  std::vector<std::string> algos;  // fff | sv | afu | plain | color
  int k_min = 3;
  int k_max = 3;
  BenchParams params;
  EngineOptions exec;
};

struct BenchmarkRow {
  enum class Kind { kResult, kGrowth };
  Kind kind = Kind::kResult;
  std::string dataset;
  std::string algo;
  int k = 0;
  std::string params;  // rendered b=/p=/c=/seed=/workers= set, algo-dependent
  std::string status = "ok";
  std::optional<double> result;     // count or estimate
  std::optional<double> reference;  // exact count from the same run
  std::optional<double> rel_error;
  double wall_ms = 0.0;
  std::vector<double> round_ms;
  std::vector<std::uint64_t> round_pairs;  // emissions per round
};

// Runs datasets x algorithms x k in order; a failing row records its error
// and the run continues. Growth rows q_{k+1}/q_k follow each dataset's block
// when an exact algorithm covered consecutive k.
std::vector<BenchmarkRow> run_benchmark(const BenchSpec& spec);

void write_rows_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows);
void write_rows_table(std::ostream& out, const std::vector<BenchmarkRow>& rows);
const char* bench_csv_header();

std::string format_mm_ss(double ms);

}  // namespace cliquemr
