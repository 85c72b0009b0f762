#include "cliquemr/mrengine.hpp"

#include <algorithm>
#include <ostream>

namespace cliquemr {

const char* RunReport::csv_header() {
  return "round,name,map_input_pairs,emitted_pairs,distinct_keys,"
         "max_group_size,total_values,wall_ms,max_reduce_ms";
}

void RunReport::write_csv(std::ostream& out) const {
  out << csv_header() << '\n';
  for (std::size_t i = 0; i < rounds.size(); ++i) {
    const RoundMetrics& r = rounds[i];
    out << i + 1 << ',' << r.name << ',' << r.map_input_pairs << ','
        << r.emitted_pairs << ',' << r.distinct_keys << ',' << r.max_group_size
        << ',' << r.total_values << ',' << r.wall_ms << ',' << r.max_reduce_ms
        << '\n';
  }
}

namespace {

constexpr std::uint64_t pack(std::uint64_t lo, std::uint64_t hi) {
  return (lo << 32) | hi;
}
constexpr std::uint64_t slice_lo(std::uint64_t bits) { return bits >> 32; }
constexpr std::uint64_t slice_hi(std::uint64_t bits) {
  return bits & 0xffffffffULL;
}

}  // namespace

WorkerPool::WorkerPool(unsigned workers) : workers_(workers), slices_(workers) {
  if (workers_ > 1) {
    threads_.reserve(workers_);
    for (unsigned i = 0; i < workers_; ++i)
      threads_.emplace_back([this, i] { worker_loop(i); });
  }
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard lock(mu_);
    shutdown_ = true;
  }
  start_cv_.notify_all();
  for (auto& t : threads_) t.join();
}

void WorkerPool::for_range(
    std::uint64_t n, std::uint64_t grain,
    const std::function<void(std::uint64_t, std::uint64_t, unsigned)>& fn) {
  if (n == 0) return;
  if (workers_ == 1) {
    fn(0, n, 0);
    return;
  }

  std::uint64_t per = n / workers_;
  std::uint64_t rem = n % workers_;
  std::uint64_t at = 0;
  for (unsigned i = 0; i < workers_; ++i) {
    std::uint64_t len = per + (i < rem ? 1 : 0);
    slices_[i].bits.store(pack(at, at + len), std::memory_order_relaxed);
    at += len;
  }
  remaining_.store(n, std::memory_order_relaxed);

  {
    std::lock_guard lock(mu_);
    fn_ = &fn;
    grain_ = std::max<std::uint64_t>(1, grain);
    active_ = workers_;
    ++generation_;
  }
  start_cv_.notify_all();

  std::unique_lock lock(mu_);
  done_cv_.wait(lock, [this] { return active_ == 0; });
  fn_ = nullptr;
}

void WorkerPool::worker_loop(unsigned id) {
  std::uint64_t seen_generation = 0;
  for (;;) {
    {
      std::unique_lock lock(mu_);
      start_cv_.wait(lock, [&] {
        return shutdown_ || generation_ != seen_generation;
      });
      if (shutdown_) return;
      seen_generation = generation_;
    }
    run_worker(id);
    {
      std::lock_guard lock(mu_);
      if (--active_ == 0) done_cv_.notify_all();
    }
  }
}

void WorkerPool::run_worker(unsigned id) {
  const auto& fn = *fn_;
  for (;;) {
    // Pop a chunk from the front of our own slice.
    std::uint64_t bits = slices_[id].bits.load(std::memory_order_acquire);
    for (;;) {
      std::uint64_t lo = slice_lo(bits), hi = slice_hi(bits);
      if (lo >= hi) break;
      std::uint64_t take = std::min(grain_, hi - lo);
      if (slices_[id].bits.compare_exchange_weak(bits, pack(lo + take, hi),
                                                 std::memory_order_acq_rel)) {
        fn(lo, lo + take, id);
        remaining_.fetch_sub(take, std::memory_order_relaxed);
        bits = slices_[id].bits.load(std::memory_order_acquire);
      }
    }
    if (remaining_.load(std::memory_order_acquire) == 0) return;

    // Steal the back half of the fullest slice.
    unsigned victim = workers_;
    std::uint64_t best = 0;
    for (unsigned v = 0; v < workers_; ++v) {
      if (v == id) continue;
      std::uint64_t b = slices_[v].bits.load(std::memory_order_acquire);
      std::uint64_t avail = slice_hi(b) - std::min(slice_lo(b), slice_hi(b));
      if (avail > best) {
        best = avail;
        victim = v;
      }
    }
    if (victim == workers_) {
      if (remaining_.load(std::memory_order_acquire) == 0) return;
      std::this_thread::yield();
      continue;
    }
    std::uint64_t vbits = slices_[victim].bits.load(std::memory_order_acquire);
    std::uint64_t lo = slice_lo(vbits), hi = slice_hi(vbits);
    if (lo >= hi) continue;
    std::uint64_t mid = lo + (hi - lo + 1) / 2;
    if (slices_[victim].bits.compare_exchange_strong(
            vbits, pack(lo, mid), std::memory_order_acq_rel)) {
      std::uint64_t my = slices_[id].bits.load(std::memory_order_acquire);
      // Own slice is empty here; install the stolen range.
      (void)my;
      slices_[id].bits.store(pack(mid, hi), std::memory_order_release);
    }
  }
}

}  // namespace cliquemr
