#pragma once

#include <cstdint>
#include <random>

namespace twtt {

// Sub-stream identifiers. Each scenario derives one independent stream per
// consumer so that adding draws in one module never shifts another's draws.
enum class StreamId : std::uint64_t {
  kClock = 1,
  kChannel = 2,
  kAttack = 3,
};

// Seedable, portable random stream.
//
// The bit generator is std::mt19937_64, whose output sequence is fixed by the
// standard. Uniform and Gaussian variates are derived here rather than through
// <random> distributions, which are implementation-defined and would make
// traces differ between standard libraries.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  // Stream `id` of scenario seed `seed`. Seeds are mixed through SplitMix64.
  static RandomStream derive(std::uint64_t seed, StreamId id);

  std::uint64_t next_u64() { return engine_(); }

  // Uniform variate in [0, 1) with 53 random bits.
  double uniform();

  // Standard normal variate via Box-Muller. Consumes exactly two 64-bit
  // outputs per call; no value is cached between calls.
  double gaussian();

  double gaussian(double sigma) { return sigma * gaussian(); }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace twtt
