#pragma once

// Deterministic per-replicate random streams.

#include <cstdint>
#include <random>
#include <string_view>

namespace levyext {

/// Stream tags keep independent parts of one replicate on separate substreams,
/// so enabling one part never shifts the draws of another.
enum class Stream : std::uint32_t {
  Heavy = 1,
  HeavyNegative = 2,
  Light = 3,
  SideOne = 4,
  SideTwo = 5,
  Misc = 6,
};

class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t replicate_id, Stream stream);

  std::mt19937_64& engine() { return engine_; }

  /// Uniform on (0, 1]; safe as an argument to tail quantiles.
  double uniform_open_closed();
  double uniform(double lo, double hi);
  double normal(double mean, double sd);
  double exponential(double rate);
  std::uint64_t poisson(double mean);

 private:
  std::mt19937_64 engine_;
};

}  // namespace levyext
