#pragma once

#include <cstdint>
#include <random>

namespace genbounds {

/// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Caller-owned random stream. Streams derived with `split` from the same
/// parent are independent by construction and do not advance the parent.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed_sequence(seed)) {}

  /// Child stream number `index`; a pure function of (seed, index).
  RandomStream split(std::uint64_t index) const {
    return RandomStream(splitmix64(seed_ ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
  }

  std::uint64_t seed() const noexcept { return seed_; }

  /// Uniform on [0, 1).
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  /// Uniform on the open interval (lo, hi).
  double uniform_open(double lo, double hi) {
    double u;
    do {
      u = uniform();
    } while (u == 0.0);
    return lo + (hi - lo) * u;
  }
  double normal() { return normal_(engine_); }
  /// Exp(1), strictly positive.
  double exponential() {
    double e;
    do {
      e = std::exponential_distribution<double>(1.0)(engine_);
    } while (e <= 0.0);
    return e;
  }
  std::uint64_t bits() { return engine_(); }
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  static std::uint64_t seed_sequence(std::uint64_t seed) { return splitmix64(seed); }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace genbounds
