#pragma once

#include <random>

#include "kdv5/field.hpp"

namespace kdv5 {

// Mean-zero real field with independent complex Gaussian modes scaled by
// (1+k^2)^{-decay/2}, normalized to the requested L^2 amplitude. Deterministic
// for a fixed seed.
SpectralField random_field(const PeriodicGrid& grid, std::mt19937_64& rng, double decay = 2.0,
                           int kmax = 0, double amplitude = 1.0);

}  // namespace kdv5
