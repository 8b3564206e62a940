#include "bwalk/rng.hpp"

#include <stdexcept>

namespace bwalk {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t Stream::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Stream::below needs a positive bound");
  unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(next()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

Stream child_stream(std::uint64_t seed, std::uint64_t id) {
  return Stream(splitmix64(splitmix64(seed) ^ splitmix64(id + 0x632be59bd9b4e019ull)));
}

Stream tagged_stream(std::uint64_t seed, StreamTag tag, std::uint64_t id) {
  return child_stream(splitmix64(seed ^ (static_cast<std::uint64_t>(tag) << 56)), id);
}

}  // namespace bwalk
