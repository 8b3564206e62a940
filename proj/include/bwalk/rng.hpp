#pragma once

#include <cstdint>
#include <random>

namespace bwalk {

std::uint64_t splitmix64(std::uint64_t x);

/// A seeded generator stream. Bounded integers use Lemire's multiply-shift
/// rejection on the raw 64-bit output, so draws are identical on every
/// standard library (std::uniform_int_distribution is not).
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::uint64_t seed() const { return seed_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

/// Independent stream for worker/walker/burst `id` under a master seed.
Stream child_stream(std::uint64_t seed, std::uint64_t id);

/// Distinct stream families derived from the same master seed.
enum class StreamTag : std::uint64_t {
  Walker = 1,
  Burst = 2,
  Anchor = 3,
  Sampler = 4,
};

Stream tagged_stream(std::uint64_t seed, StreamTag tag, std::uint64_t id);

}  // namespace bwalk
