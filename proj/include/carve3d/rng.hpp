#pragma once

#include <cstdint>
#include <random>

namespace carve3d {

// Every randomized operation takes this engine explicitly; results are a pure
// function of the inputs and the engine state.
using Rng = std::mt19937_64;

inline int uniform_index(Rng& rng, int size) {
  return std::uniform_int_distribution<int>(0, size - 1)(rng);
}

}  // namespace carve3d
