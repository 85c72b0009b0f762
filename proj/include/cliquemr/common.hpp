#pragma once

#include <cstdint>
#include <stdexcept>

namespace cliquemr {

// splitmix64 finalizer; full avalanche. Used for shuffle sharding, node
// bucketing, and the stateless sampling decisions.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix64(std::uint64_t a, std::uint64_t b) noexcept {
  return mix64(a ^ mix64(b));
}

constexpr std::uint64_t mix64(std::uint64_t a, std::uint64_t b,
                              std::uint64_t c) noexcept {
  return mix64(mix64(a, b) ^ mix64(c));
}

constexpr std::uint64_t mix64(std::uint64_t a, std::uint64_t b,
                              std::uint64_t c, std::uint64_t d) noexcept {
  return mix64(mix64(a, b, c) ^ mix64(d));
}

// Uniform double in [0,1) from the 53 high bits of a hash.
constexpr double to_unit(std::uint64_t h) noexcept {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_add_overflow(a, b, &r))
    throw std::overflow_error("64-bit count overflow in addition");
  return r;
}

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r))
    throw std::overflow_error("64-bit count overflow in multiplication");
  return r;
}

// C(n, k); returns 0 when k > n, throws std::overflow_error if the value
// does not fit in 64 bits.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > UINT64_MAX) throw std::overflow_error("binomial overflows 64 bits");
  }
  return static_cast<std::uint64_t>(r);
}

// C(n, 2) without overflow for any n that itself fits in 64 bits.
inline std::uint64_t choose2(std::uint64_t n) {
  if (n < 2) return 0;
  return (n % 2 == 0) ? checked_mul(n / 2, n - 1) : checked_mul(n, (n - 1) / 2);
}

}  // namespace cliquemr
