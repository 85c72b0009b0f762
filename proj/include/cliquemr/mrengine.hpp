#pragma once

#include <atomic>
#include <bit>
#include <chrono>
#include <concepts>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "cliquemr/common.hpp"

namespace cliquemr {

template <class K, class V>
struct KVPair {
  K key;
  V value;
  friend bool operator==(const KVPair&, const KVPair&) = default;
};

// Shuffle keys hash through KeyHash, not std::hash: integer labels are often
// near-sequential and need the extra mixing to shard evenly.
template <class T>
struct KeyHash;

template <std::integral T>
struct KeyHash<T> {
  std::uint64_t operator()(T v) const {
    return mix64(static_cast<std::uint64_t>(v));
  }
};

template <class A, class B>
struct KeyHash<std::pair<A, B>> {
  std::uint64_t operator()(const std::pair<A, B>& p) const {
    return mix64(KeyHash<A>{}(p.first), KeyHash<B>{}(p.second));
  }
};

template <>
struct KeyHash<std::string> {
  std::uint64_t operator()(const std::string& s) const {
    return mix64(std::hash<std::string>{}(s));
  }
};

template <class... Ts>
struct KeyHash<std::variant<Ts...>> {
  std::uint64_t operator()(const std::variant<Ts...>& v) const {
    return std::visit(
        [&](const auto& alt) {
          return mix64(v.index(),
                       KeyHash<std::decay_t<decltype(alt)>>{}(alt));
        },
        v);
  }
};

namespace detail {

template <class T>
std::string describe_key(const T& key) {
  if constexpr (std::integral<T>) {
    return std::to_string(key);
  } else if constexpr (requires { key.first; key.second; }) {
    return "(" + describe_key(key.first) + "," + describe_key(key.second) + ")";
  } else if constexpr (std::convertible_to<T, std::string>) {
    return std::string(key);
  } else if constexpr (requires { std::visit([](const auto&) {}, key); }) {
    return std::visit([](const auto& alt) { return describe_key(alt); }, key);
  } else {
    return "<key>";
  }
}

}  // namespace detail

// A map or reduce function threw; carries the key of the offending task.
struct RoundError : std::runtime_error {
  RoundError(std::string phase_, std::string key_, const std::string& what)
      : std::runtime_error(phase_ + " failed at key " + key_ + ": " + what),
        phase(std::move(phase_)),
        key(std::move(key_)) {}
  std::string phase;
  std::string key;
};

// Per-round cost accounting. emitted_pairs counts map-side emissions (the
// data volume crossing the shuffle); max_group_size is the largest reducer
// input and stands in for local space; total_values always equals the sum of
// group sizes.
struct RoundMetrics {
  std::string name;
  std::uint64_t map_input_pairs = 0;
  std::uint64_t emitted_pairs = 0;
  std::uint64_t distinct_keys = 0;
  std::uint64_t max_group_size = 0;
  std::uint64_t total_values = 0;
  double wall_ms = 0.0;
  double max_reduce_ms = 0.0;
};

struct RunReport {
  std::vector<RoundMetrics> rounds;
  double total_wall_ms = 0.0;
  unsigned workers = 1;

  void write_csv(std::ostream& out) const;
  static const char* csv_header();
};

struct EngineOptions {
  unsigned workers = 1;
  bool deterministic = true;
};

// Fixed-size pool executing parallel index ranges. Each worker starts with a
// contiguous slice of [0,n) and steals the back half of the largest remaining
// slice when its own runs dry; ranges are packed in one atomic so pop and
// steal are single CAS operations. With one worker everything runs inline on
// the caller.
class WorkerPool {
 public:
  explicit WorkerPool(unsigned workers);
  ~WorkerPool();
  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  unsigned size() const { return workers_; }

  // fn(lo, hi, worker) over disjoint chunks covering [0,n); blocks until all
  // items are done. fn must not throw.
  void for_range(std::uint64_t n, std::uint64_t grain,
                 const std::function<void(std::uint64_t, std::uint64_t,
                                          unsigned)>& fn);

 private:
  struct alignas(64) Slice {
    std::atomic<std::uint64_t> bits{0};  // lo<<32 | hi
  };

  void worker_loop(unsigned id);
  void run_worker(unsigned id);

  unsigned workers_;
  std::vector<std::thread> threads_;
  std::vector<Slice> slices_;
  const std::function<void(std::uint64_t, std::uint64_t, unsigned)>* fn_ =
      nullptr;
  std::uint64_t grain_ = 1;
  std::atomic<std::uint64_t> remaining_{0};

  std::mutex mu_;
  std::condition_variable start_cv_;
  std::condition_variable done_cv_;
  std::uint64_t generation_ = 0;
  unsigned active_ = 0;
  bool shutdown_ = false;
};

template <class K, class V>
struct RoundOutput {
  std::vector<KVPair<K, V>> pairs;
  RoundMetrics metrics;
};

// Collects emissions from one map or reduce task. Map-side emitters route by
// key hash into shard buffers; reduce-side emitters append to a single
// buffer.
template <class K, class V>
class Emitter {
 public:
  void emit(K key, V value) {
    if (sink_) {
      sink_->push_back(KVPair<K, V>{std::move(key), std::move(value)});
      return;
    }
    std::uint64_t h = KeyHash<K>{}(key);
    (*shards_)[h & mask_].push_back(KVPair<K, V>{std::move(key), std::move(value)});
  }

  static Emitter map_sink(std::vector<std::vector<KVPair<K, V>>>& shards,
                          std::uint64_t mask) {
    Emitter e;
    e.shards_ = &shards;
    e.mask_ = mask;
    return e;
  }
  static Emitter reduce_sink(std::vector<KVPair<K, V>>& out) {
    Emitter e;
    e.sink_ = &out;
    return e;
  }

 private:
  Emitter() = default;
  std::vector<std::vector<KVPair<K, V>>>* shards_ = nullptr;
  std::uint64_t mask_ = 0;
  std::vector<KVPair<K, V>>* sink_ = nullptr;
};

// One round of a map/reduce pipeline plus an optional side input appended to
// the upstream data before mapping (how original edges are re-fed to a later
// round without copying them).
template <class KIn, class VIn, class KMid, class VMid, class KOut, class VOut,
          class MapFn, class ReduceFn>
struct RoundSpec {
  std::string name;
  MapFn map;
  ReduceFn reduce;
  std::span<const KVPair<KIn, VIn>> extra{};

  using in_key = KIn;
  using in_value = VIn;
  using mid_key = KMid;
  using mid_value = VMid;
  using out_key = KOut;
  using out_value = VOut;
};

template <class KIn, class VIn, class KMid, class VMid, class KOut, class VOut,
          class MapFn, class ReduceFn>
RoundSpec<KIn, VIn, KMid, VMid, KOut, VOut, MapFn, ReduceFn> make_round(
    std::string name, MapFn map, ReduceFn reduce,
    std::span<const KVPair<KIn, VIn>> extra = {}) {
  return {std::move(name), std::move(map), std::move(reduce), extra};
}

// In-process MapReduce runtime. A round applies map_fn to every input pair,
// groups the emissions by key equality, and applies reduce_fn once per group.
// map_fn and reduce_fn must be pure: they may run concurrently on any worker
// and in any order, and all map emissions happen-before any reduce call.
//
// With deterministic=true, reducer outputs are concatenated in ascending key
// order and each group's value list is sorted, so the output is byte-stable
// across runs and worker counts. Without it, group order follows the shard
// layout and value order follows mapper interleaving; only the output
// multiset is guaranteed.
class Engine {
 public:
  explicit Engine(EngineOptions opts)
      : opts_(opts), pool_(opts.workers) {
    if (opts.workers < 1) throw std::invalid_argument("workers must be >= 1");
  }

  const EngineOptions& options() const { return opts_; }

  // MapFn:    void(const KVPair<KIn,VIn>&, Emitter<KMid,VMid>&)
  // ReduceFn: void(const KMid&, std::span<const VMid>, Emitter<KOut,VOut>&)
  template <class KMid, class VMid, class KOut, class VOut, class KIn,
            class VIn, class MapFn, class ReduceFn>
  RoundOutput<KOut, VOut> run_round(
      std::span<const KVPair<KIn, VIn>> input, MapFn&& map_fn,
      ReduceFn&& reduce_fn, std::string name = {},
      std::span<const KVPair<KIn, VIn>> extra = {});

  template <class KIn, class VIn, class KMid, class VMid, class KOut,
            class VOut, class MapFn, class ReduceFn>
  RoundOutput<KOut, VOut> run_round(
      std::span<const KVPair<KIn, VIn>> input,
      const RoundSpec<KIn, VIn, KMid, VMid, KOut, VOut, MapFn, ReduceFn>& spec) {
    return run_round<KMid, VMid, KOut, VOut>(input, spec.map, spec.reduce,
                                             spec.name, spec.extra);
  }

  // Folds run_round over the given rounds; collects one RoundMetrics each.
  // With no rounds the input is returned unchanged.
  template <class KIn, class VIn, class... Specs>
  auto run_pipeline(std::vector<KVPair<KIn, VIn>> input, RunReport& report,
                    const Specs&... specs);

 private:
  template <class KIn, class VIn>
  std::vector<KVPair<KIn, VIn>> pipeline_step(std::vector<KVPair<KIn, VIn>> in,
                                              RunReport&) {
    return in;
  }

  template <class KIn, class VIn, class First, class... Rest>
  auto pipeline_step(std::vector<KVPair<KIn, VIn>> in, RunReport& report,
                     const First& first, const Rest&... rest) {
    auto out = run_round(std::span<const KVPair<KIn, VIn>>(in), first);
    report.rounds.push_back(std::move(out.metrics));
    in.clear();
    in.shrink_to_fit();
    return pipeline_step(std::move(out.pairs), report, rest...);
  }

  EngineOptions opts_;
  WorkerPool pool_;
};

template <class KIn, class VIn, class... Specs>
auto Engine::run_pipeline(std::vector<KVPair<KIn, VIn>> input,
                          RunReport& report, const Specs&... specs) {
  report.workers = opts_.workers;
  auto t0 = std::chrono::steady_clock::now();
  auto out = pipeline_step(std::move(input), report, specs...);
  report.total_wall_ms +=
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                t0)
          .count();
  return out;
}

template <class KMid, class VMid, class KOut, class VOut, class KIn, class VIn,
          class MapFn, class ReduceFn>
RoundOutput<KOut, VOut> Engine::run_round(
    std::span<const KVPair<KIn, VIn>> input, MapFn&& map_fn,
    ReduceFn&& reduce_fn, std::string name,
    std::span<const KVPair<KIn, VIn>> extra) {
  static_assert(std::totally_ordered<KMid>,
                "shuffle keys need a total order for deterministic grouping");
  static_assert(std::totally_ordered<VMid>,
                "shuffle values need a total order for deterministic grouping");
  using MidPair = KVPair<KMid, VMid>;
  using OutPair = KVPair<KOut, VOut>;
  using clock = std::chrono::steady_clock;

  const auto t0 = clock::now();
  const unsigned workers = opts_.workers;
  const std::uint64_t n_in = input.size() + extra.size();
  if (n_in >> 32)
    throw std::invalid_argument("round input exceeds 2^32 pairs");

  RoundMetrics metrics;
  metrics.name = std::move(name);
  metrics.map_input_pairs = n_in;

  const std::uint64_t nshards =
      workers == 1 ? 1 : std::bit_ceil<std::uint64_t>(workers) * 4;
  const std::uint64_t shard_mask = nshards - 1;

  // --- map ---
  std::vector<std::vector<std::vector<MidPair>>> bufs(workers);
  for (auto& b : bufs) b.resize(nshards);

  std::mutex err_mu;
  std::string err_phase, err_key, err_what;
  std::atomic<bool> failed{false};
  auto record_error = [&](const char* phase, std::string key) {
    try {
      throw;
    } catch (const std::exception& e) {
      std::lock_guard lock(err_mu);
      if (!failed.exchange(true)) {
        err_phase = phase;
        err_key = std::move(key);
        err_what = e.what();
      }
    } catch (...) {
      std::lock_guard lock(err_mu);
      if (!failed.exchange(true)) {
        err_phase = phase;
        err_key = std::move(key);
        err_what = "unknown exception";
      }
    }
  };

  pool_.for_range(
      n_in, std::max<std::uint64_t>(1, n_in / (workers * 16) + 1),
      [&](std::uint64_t lo, std::uint64_t hi, unsigned w) {
        auto em = Emitter<KMid, VMid>::map_sink(bufs[w], shard_mask);
        for (std::uint64_t i = lo; i < hi && !failed.load(std::memory_order_relaxed);
             ++i) {
          const auto& kv = i < input.size() ? input[i]
                                            : extra[i - input.size()];
          try {
            map_fn(kv, em);
          } catch (...) {
            record_error("map", detail::describe_key(kv.key));
          }
        }
      });
  if (failed.load()) throw RoundError(err_phase, err_key, err_what);

  for (const auto& per_worker : bufs)
    for (const auto& shard : per_worker) metrics.emitted_pairs += shard.size();
  metrics.total_values = metrics.emitted_pairs;

  // --- shuffle: gather each shard, sort, find group boundaries ---
  struct GroupRef {
    std::uint32_t shard;
    std::uint32_t begin;
    std::uint32_t end;
  };
  std::vector<std::vector<MidPair>> shards(nshards);
  std::vector<std::vector<GroupRef>> shard_groups(nshards);
  std::vector<std::uint64_t> shard_max_group(nshards, 0);

  pool_.for_range(nshards, 1, [&](std::uint64_t lo, std::uint64_t hi, unsigned) {
    for (std::uint64_t s = lo; s < hi; ++s) {
      std::size_t total = 0;
      for (unsigned w = 0; w < workers; ++w) total += bufs[w][s].size();
      auto& shard = shards[s];
      shard.reserve(total);
      for (unsigned w = 0; w < workers; ++w) {
        auto& src = bufs[w][s];
        std::move(src.begin(), src.end(), std::back_inserter(shard));
        src.clear();
        src.shrink_to_fit();
      }
      if (opts_.deterministic) {
        std::sort(shard.begin(), shard.end(), [](const MidPair& a, const MidPair& b) {
          if (a.key < b.key) return true;
          if (b.key < a.key) return false;
          return a.value < b.value;
        });
      } else {
        std::sort(shard.begin(), shard.end(),
                  [](const MidPair& a, const MidPair& b) { return a.key < b.key; });
      }
      auto& groups = shard_groups[s];
      std::size_t i = 0;
      while (i < shard.size()) {
        std::size_t j = i + 1;
        while (j < shard.size() && !(shard[i].key < shard[j].key)) ++j;
        groups.push_back(GroupRef{static_cast<std::uint32_t>(s),
                                  static_cast<std::uint32_t>(i),
                                  static_cast<std::uint32_t>(j)});
        shard_max_group[s] = std::max<std::uint64_t>(shard_max_group[s], j - i);
        i = j;
      }
    }
  });

  std::vector<GroupRef> refs;
  for (std::uint64_t s = 0; s < nshards; ++s) {
    metrics.distinct_keys += shard_groups[s].size();
    metrics.max_group_size = std::max(metrics.max_group_size, shard_max_group[s]);
    refs.insert(refs.end(), shard_groups[s].begin(), shard_groups[s].end());
  }
  if (opts_.deterministic && nshards > 1) {
    std::sort(refs.begin(), refs.end(), [&](const GroupRef& a, const GroupRef& b) {
      return shards[a.shard][a.begin].key < shards[b.shard][b.begin].key;
    });
  }

  // --- reduce over group ranges; outputs reassembled in group order ---
  struct Segment {
    std::uint64_t first_group;
    std::vector<OutPair> out;
  };
  std::mutex seg_mu;
  std::vector<Segment> segments;
  std::vector<double> worker_max_ms(workers, 0.0);

  pool_.for_range(
      refs.size(), std::max<std::uint64_t>(1, refs.size() / (workers * 16) + 1),
      [&](std::uint64_t lo, std::uint64_t hi, unsigned w) {
        Segment seg;
        seg.first_group = lo;
        auto em = Emitter<KOut, VOut>::reduce_sink(seg.out);
        std::vector<VMid> values;
        for (std::uint64_t gi = lo;
             gi < hi && !failed.load(std::memory_order_relaxed); ++gi) {
          const GroupRef& ref = refs[gi];
          auto& shard = shards[ref.shard];
          values.clear();
          for (std::uint32_t i = ref.begin; i < ref.end; ++i)
            values.push_back(std::move(shard[i].value));
          const KMid& key = shard[ref.begin].key;
          auto r0 = clock::now();
          try {
            reduce_fn(key, std::span<const VMid>(values), em);
          } catch (...) {
            record_error("reduce", detail::describe_key(key));
          }
          double ms =
              std::chrono::duration<double, std::milli>(clock::now() - r0)
                  .count();
          worker_max_ms[w] = std::max(worker_max_ms[w], ms);
        }
        std::lock_guard lock(seg_mu);
        segments.push_back(std::move(seg));
      });
  if (failed.load()) throw RoundError(err_phase, err_key, err_what);

  for (double ms : worker_max_ms)
    metrics.max_reduce_ms = std::max(metrics.max_reduce_ms, ms);

  std::sort(segments.begin(), segments.end(),
            [](const Segment& a, const Segment& b) {
              return a.first_group < b.first_group;
            });
  std::size_t out_total = 0;
  for (const auto& s : segments) out_total += s.out.size();
  std::vector<OutPair> output;
  output.reserve(out_total);
  for (auto& s : segments)
    std::move(s.out.begin(), s.out.end(), std::back_inserter(output));

  metrics.wall_ms =
      std::chrono::duration<double, std::milli>(clock::now() - t0).count();
  return RoundOutput<KOut, VOut>{std::move(output), std::move(metrics)};
}

}  // namespace cliquemr
