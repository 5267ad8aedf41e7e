// Counter-based splittable random stream.
//
// Every stream is a pure function of (key, counter): output i is
// mix64(key + (i+1)*GAMMA), the SplitMix64 sequence seeded at `key`.
// Child streams derive a fresh key by hashing (parent key, label, index),
// so a trial, a purpose within a trial, or a per-entity draw sequence can
// be replayed in isolation.  Thread scheduling and evaluation order across
// sibling streams cannot change any draw.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string_view>

namespace femtosim {

namespace detail {

inline constexpr std::uint64_t kWeyl = 0x9E3779B97F4A7C15ull;

inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

// FNV-1a over arbitrary bytes, used only for key derivation.
inline constexpr std::uint64_t fnv1a(std::uint64_t h, const char* data,
                                     std::size_t n) noexcept {
  for (std::size_t i = 0; i < n; ++i) {
    h ^= static_cast<unsigned char>(data[i]);
    h *= 0x100000001B3ull;
  }
  return h;
}

inline constexpr std::uint64_t fnv1a_u64(std::uint64_t h,
                                         std::uint64_t v) noexcept {
  for (int i = 0; i < 8; ++i) {
    h ^= v & 0xFFu;
    h *= 0x100000001B3ull;
    v >>= 8;
  }
  return h;
}

}  // namespace detail

class RngStream {
 public:
  static RngStream root(std::uint64_t master_seed) noexcept {
    return RngStream(detail::mix64(master_seed ^ 0xA5C1E5EEDull));
  }

  // Child key depends on parent key, label string and index only; the
  // parent's counter position is irrelevant, so derivation order never
  // matters.
  RngStream child(std::string_view label, std::uint64_t index = 0) const noexcept {
    std::uint64_t h = detail::fnv1a_u64(0xCBF29CE484222325ull, key_);
    h = detail::fnv1a(h, label.data(), label.size());
    h = detail::fnv1a_u64(h, index);
    return RngStream(detail::mix64(h));
  }

  std::uint64_t next_u64() noexcept {
    ++counter_;
    return detail::mix64(key_ + counter_ * detail::kWeyl);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) noexcept {
    return a + (b - a) * uniform01();
  }

  // Uniform on {0, ..., n-1} without modulo bias (rejection).
  std::uint64_t bounded(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("bounded: n must be > 0");
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t v = next_u64();
      if (v >= threshold) return v % n;
    }
  }

  // Exponential with the given mean (not rate).
  double exponential(double mean) noexcept {
    return -mean * std::log1p(-uniform01());
  }

  // Exact inversion by sequential search; one uniform per draw.  Splits
  // recursively when exp(-lambda) would underflow.
  std::uint64_t poisson(double lambda) {
    if (lambda < 0.0 || !std::isfinite(lambda))
      throw std::invalid_argument("poisson: lambda must be finite and >= 0");
    if (lambda == 0.0) return 0;
    if (lambda > 500.0) {
      const std::uint64_t half = poisson(lambda * 0.5);
      return half + poisson(lambda * 0.5);
    }
    const double u = uniform01();
    double pmf = std::exp(-lambda);
    double cdf = pmf;
    std::uint64_t k = 0;
    // Cap far outside any realistic quantile; the walk terminates earlier
    // with probability 1 - O(1e-15).
    const std::uint64_t cap =
        static_cast<std::uint64_t>(lambda + 30.0 * std::sqrt(lambda) + 100.0);
    while (u >= cdf && k < cap) {
      ++k;
      pmf *= lambda / static_cast<double>(k);
      cdf += pmf;
    }
    return k;
  }

 private:
  explicit RngStream(std::uint64_t key) noexcept : key_(key) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace femtosim
