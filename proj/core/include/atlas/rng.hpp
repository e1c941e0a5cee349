#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>

namespace atlas {

// Counter-based splittable generator. Draw i of a stream with key k is
// mix(k + (i+1) * golden), the splitmix64 output function, so a stream is a
// pure function of (key, counter) and child streams derived by split() are
// reproducible regardless of thread schedule or how much the parent drew.
//
// split(token) does not advance the parent; distinct tokens give
// independent streams. Experiments document their token paths so any
// substream can be reproduced from the master seed alone.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : key_(mix(seed)) {}

  SplitRng split(std::uint64_t token) const {
    return SplitRng(FromKey{}, mix(key_ ^ mix(token)));
  }
  // Token a real number (e.g. a region width); keyed by its bit pattern.
  SplitRng split_real(double token) const {
    return split(std::bit_cast<std::uint64_t>(token));
  }

  std::uint64_t next_u64() { return mix(key_ + ++counter_ * kGolden); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }
  double normal(double mean, double sd) { return mean + sd * normal(); }

  // Inverse-CDF exponential with the given mean.
  double exponential(double mean) {
    if (!(mean > 0.0))
      throw std::invalid_argument("exponential: mean must be positive");
    return -mean * std::log1p(-uniform());
  }

  // Unbiased integer on [0, bound), multiply-shift with rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("below: bound must be nonzero");
    unsigned __int128 m =
        static_cast<unsigned __int128>(next_u64()) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
      const std::uint64_t threshold = -bound % bound;
      while (lo < threshold) {
        m = static_cast<unsigned __int128>(next_u64()) * bound;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  template <class T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i)
      std::swap(items[i - 1], items[below(i)]);
  }

 private:
  struct FromKey {};
  SplitRng(FromKey, std::uint64_t key) : key_(key) {}

  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  static std::uint64_t mix(std::uint64_t z) {
    z += kGolden;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace atlas
