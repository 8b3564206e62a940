#pragma once

#include "bwalk/ensemble.hpp"
#include "bwalk/rng.hpp"

namespace bwalk::fixtures {

/// Uniform vertex of the hypercube (the exact stationary law).
inline SignVector random_signs(const EnsembleKind& kind, Stream& rng) {
  SignVector s(kind);
  for (std::size_t i = 0; i < s.size(); ++i)
    if (rng.below(2)) s.flip_in_place(i);
  return s;
}

inline ScaledMatrix random_matrix(const EnsembleKind& kind, Stream& rng) {
  return realize(random_signs(kind, rng));
}

}  // namespace bwalk::fixtures
