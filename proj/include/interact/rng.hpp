#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace interact {

/// Seeded random stream with a fixed, versioned derivation of every variate.
///
/// The engine is std::mt19937_64, whose output sequence is pinned by the C++
/// standard. The std:: distributions are not (their algorithms differ between
/// standard libraries), so every variate here is derived from raw engine
/// output by code in this file. Same seed and same algorithm id give the same
/// stream on every conforming platform.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64/interact-v1";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). Requires n > 0.
  std::uint64_t below(std::uint64_t n);

  double normal();

  /// Gamma(shape, 1). Requires shape > 0.
  double gamma(double shape);

  /// Poisson(mean) by inversion; intended for modest means (document lengths).
  std::uint64_t poisson(double mean);

  /// Fills `out` with a draw from a symmetric Dirichlet(concentration).
  void dirichlet(double concentration, std::span<double> out);

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace interact
