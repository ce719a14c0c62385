#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace qbench {

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t hash_combine64(std::uint64_t a, std::uint64_t b);
// 64-bit FNV-1a of the bytes of s.
std::uint64_t fnv1a64(std::string_view s);

// Standard normal deviate that depends only on (seed, counter).
double counter_normal(std::uint64_t seed, std::uint64_t counter);

// Seeded generator with splittable substreams. Identical (seed, stream) pairs
// produce identical sequences on every platform: only the engine's raw output
// is used, never the implementation-defined std distributions.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  // Child generator for an independent, reproducible substream.
  Rng substream(std::uint64_t id) const;

  std::uint64_t next() { return engine_(); }
  std::uint64_t operator()() { return engine_(); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  // Uniform integer in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);
  bool bernoulli(double p) { return uniform() < p; }
  double normal();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace qbench
