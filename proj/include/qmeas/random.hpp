#pragma once

// Seeded random states and operators for property sweeps.

#include <cstdint>
#include <random>

#include "qmeas/core.hpp"

namespace qmeas {

using Rng = std::mt19937_64;

/// Haar-random unitary (QR of a complex Ginibre matrix with phase fix).
ComplexMatrix random_unitary(Index dim, Rng& rng);

/// Haar-random normalized ket.
Ket random_ket(Index dim, Rng& rng);

/// Random full-rank density matrix G G^dagger / Tr(G G^dagger).
DensityMatrix random_density(Index dim, Rng& rng);

/// Random Hermitian matrix with standard-normal entries.
ComplexMatrix random_hermitian(Index dim, Rng& rng);

}  // namespace qmeas
