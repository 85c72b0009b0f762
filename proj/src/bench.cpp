#include "cliquemr/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "cliquemr/baselines.hpp"
#include "cliquemr/exact.hpp"
#include "cliquemr/graph.hpp"
#include "cliquemr/sampling.hpp"

namespace cliquemr {

std::vector<DatasetRef> load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest " + path);
  std::filesystem::path base = std::filesystem::path(path).parent_path();
  std::vector<DatasetRef> refs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string name, file;
    if (!(ls >> name) || name.front() == '#') continue;
    if (!(ls >> file))
      throw ParseError(line_no, "manifest line needs a name and a path");
    std::filesystem::path p(file);
    if (p.is_relative()) p = base / p;
    refs.push_back(DatasetRef{name, p.string()});
  }
  return refs;
}

namespace {

bool is_exact(const std::string& algo) {
  return algo == "fff" || algo == "sv" || algo == "afu";
}

std::string render_params(const std::string& algo, const BenchParams& p,
                          const EngineOptions& exec) {
  std::ostringstream os;
  if (algo == "afu") os << "b=" << p.buckets << " seed=" << p.seed << " ";
  if (algo == "sv" && p.delayed_paths) os << "delayed ";
  if (algo == "plain") os << "p=" << p.p << " seed=" << p.seed << " ";
  if (algo == "color") os << "c=" << p.colors << " seed=" << p.seed << " ";
  os << "w=" << exec.workers;
  return os.str();
}

void fill_report(BenchmarkRow& row, const RunReport& rr) {
  for (const RoundMetrics& m : rr.rounds) {
    row.round_ms.push_back(m.wall_ms);
    row.round_pairs.push_back(m.emitted_pairs);
  }
}

}  // namespace

std::vector<BenchmarkRow> run_benchmark(const BenchSpec& spec) {
  std::vector<BenchmarkRow> rows;
  for (const DatasetRef& ds : spec.datasets) {
    Graph g;
    std::string load_error;
    try {
      g = load_graph(ds.path);
    } catch (const std::exception& e) {
      load_error = e.what();
    }

    // exact counts seen for this dataset, keyed by k; estimator reference
    std::map<int, double> exact_by_k;
    std::map<int, std::uint64_t> growth_source;
    std::size_t block_start = rows.size();

    for (const std::string& algo : spec.algos) {
      for (int k = spec.k_min; k <= spec.k_max; ++k) {
        if (algo == "sv" && k != 3) continue;
        BenchmarkRow row;
        row.dataset = ds.name;
        row.algo = algo;
        row.k = k;
        row.params = render_params(algo, spec.params, spec.exec);
        if (!load_error.empty()) {
          row.status = "error: " + load_error;
          rows.push_back(std::move(row));
          continue;
        }
        auto t0 = std::chrono::steady_clock::now();
        try {
          if (algo == "fff") {
            CliqueCountReport r = fff_count(g, k, spec.exec);
            row.result = static_cast<double>(r.count);
            fill_report(row, r.run_report);
          } else if (algo == "sv") {
            CliqueCountReport r =
                sv_count(g, spec.exec, spec.params.delayed_paths);
            row.result = static_cast<double>(r.count);
            fill_report(row, r.run_report);
          } else if (algo == "afu") {
            AfuOptions ao;
            ao.buckets = spec.params.buckets;
            ao.seed = spec.params.seed;
            ao.replication_cap = spec.params.afu_cap;
            CliqueCountReport r = afu_count(g, k, ao, spec.exec);
            row.result = static_cast<double>(r.count);
            fill_report(row, r.run_report);
          } else if (algo == "plain" || algo == "color") {
            SamplingConfig cfg =
                algo == "plain"
                    ? SamplingConfig::plain(spec.params.p, spec.params.seed)
                    : SamplingConfig::color(spec.params.colors,
                                            spec.params.seed);
            Estimate est = estimate(g, k, cfg, spec.exec);
            row.result = est.value;
            fill_report(row, est.run_report);
          } else {
            row.status = "error: unknown algorithm '" + algo + "'";
          }
        } catch (const std::exception& e) {
          row.status = std::string("error: ") + e.what();
        }
        row.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        if (row.status == "ok" && is_exact(algo) && row.result) {
          auto [it, fresh] = exact_by_k.emplace(k, *row.result);
          if (!fresh && *row.result != it->second) row.status = "mismatch";
          if (algo == "fff" || growth_source.find(k) == growth_source.end())
            growth_source[k] = static_cast<std::uint64_t>(*row.result);
        }
        rows.push_back(std::move(row));
      }
    }

    // relative errors for estimator rows, now that references are known
    for (std::size_t i = block_start; i < rows.size(); ++i) {
      BenchmarkRow& row = rows[i];
      if (!row.result) continue;
      auto ref = exact_by_k.find(row.k);
      if (ref == exact_by_k.end() || is_exact(row.algo)) continue;
      row.reference = ref->second;
      if (ref->second != 0)
        row.rel_error = std::abs(*row.result - ref->second) / ref->second;
    }

    for (auto it = growth_source.begin(); it != growth_source.end(); ++it) {
      auto next = std::next(it);
      if (next == growth_source.end() || next->first != it->first + 1) continue;
      if (it->second == 0) continue;
      BenchmarkRow row;
      row.kind = BenchmarkRow::Kind::kGrowth;
      row.dataset = ds.name;
      row.algo = "growth";
      row.k = next->first;
      row.result = static_cast<double>(next->second) /
                   static_cast<double>(it->second);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

const char* bench_csv_header() {
  return "dataset,algo,k,params,status,result,reference,rel_error,wall_ms,"
         "r1_ms,r2_ms,r3_ms,r1_pairs,r2_pairs,r3_pairs";
}

namespace {

std::string opt_str(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream os;
  os << std::setprecision(12) << *v;
  return os.str();
}

template <class T>
std::string nth(const std::vector<T>& v, std::size_t i) {
  if (i >= v.size()) return "";
  std::ostringstream os;
  os << v[i];
  return os.str();
}

}  // namespace

void write_rows_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows) {
  out << bench_csv_header() << '\n';
  for (const BenchmarkRow& r : rows) {
    out << r.dataset << ',' << r.algo << ',' << r.k << ',' << r.params << ','
        << r.status << ',' << opt_str(r.result) << ',' << opt_str(r.reference)
        << ',' << opt_str(r.rel_error) << ',' << r.wall_ms;
    for (std::size_t i = 0; i < 3; ++i) out << ',' << nth(r.round_ms, i);
    for (std::size_t i = 0; i < 3; ++i) out << ',' << nth(r.round_pairs, i);
    out << '\n';
  }
}

std::string format_mm_ss(double ms) {
  long total = std::lround(ms / 1000.0);
  std::ostringstream os;
  os << total / 60 << ':' << std::setw(2) << std::setfill('0') << total % 60;
  return os.str();
}

void write_rows_table(std::ostream& out, const std::vector<BenchmarkRow>& rows) {
  out << std::left << std::setw(14) << "dataset" << std::setw(8) << "algo"
      << std::setw(4) << "k" << std::setw(22) << "result" << std::setw(8)
      << "time" << std::setw(10) << "rel.err" << "status\n";
  for (const BenchmarkRow& r : rows) {
    std::ostringstream result;
    if (r.result) {
      if (r.kind == BenchmarkRow::Kind::kGrowth)
        result << std::fixed << std::setprecision(2) << *r.result << "x";
      else
        result << std::setprecision(12) << *r.result;
    }
    std::ostringstream err;
    if (r.rel_error)
      err << std::fixed << std::setprecision(2) << *r.rel_error * 100 << "%";
    out << std::left << std::setw(14) << r.dataset << std::setw(8) << r.algo
        << std::setw(4) << r.k << std::setw(22) << result.str() << std::setw(8)
        << (r.kind == BenchmarkRow::Kind::kGrowth ? std::string()
                                                  : format_mm_ss(r.wall_ms))
        << std::setw(10) << err.str() << r.status << '\n';
  }
}

}  // namespace cliquemr
