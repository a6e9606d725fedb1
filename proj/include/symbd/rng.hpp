#pragma once

#include <cstdint>
#include <vector>

namespace symbd {

// splitmix64 (Steele/Lea/Flood). Constants: golden gamma 0x9E3779B97F4A7C15
// and the finalizer multipliers 0xBF58476D1CE4E5B9, 0x94D049BB133111EB.
// split() derives an independent stream, so one instance seed fans out into
// per-instance and per-field streams deterministically.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  SplitMix64 split() { return SplitMix64(next()); }

  // Uniform in [0, n). Modulo bias is below 2^-50 for the tiny ranges used
  // here and, unlike std::uniform_int_distribution, identical on every
  // platform.
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  // Uniform integer in [lo, hi], inclusive.
  long long range(long long lo, long long hi) {
    return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  // Uniform on the 1-decimal grid {lo, lo+0.1, ..., hi}.
  double decimal(double lo, double hi) {
    const long long a = llround(lo * 10.0), b = llround(hi * 10.0);
    return static_cast<double>(range(a, b)) / 10.0;
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }
};

}  // namespace symbd
