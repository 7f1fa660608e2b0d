#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ncc {

/// Portable pseudo-random source.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. All variate transforms below are implemented here rather than
/// through <random> distributions, whose algorithms differ between standard
/// libraries. Same seed and same call sequence give the same stream everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Uniform on (0, 1), never returns an endpoint.
  double uniform_open();

  /// Uniform integer on [0, n), unbiased (rejection sampling). n must be > 0.
  std::uint64_t below(std::uint64_t n);

  /// Standard normal via the Marsaglia polar method.
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }

  /// Gamma(shape, rate) via Marsaglia-Tsang; shape < 1 goes through Gamma(a+1)*U^(1/a).
  double gamma(double shape, double rate);

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// SplitMix64 finalizer; used to derive independent child seeds.
std::uint64_t mix64(std::uint64_t x);

/// FNV-1a 64-bit hash of a string.
std::uint64_t hash_string(std::string_view s);

/// Deterministic child seed from a parent seed and a stream of tags.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag);

}  // namespace ncc
