/*
 * This code is part of coinflip-lab.
 *
 * (C) Copyright 2026, coinflip-lab contributors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include "coinflip/qmatrix.hpp"
#include "coinflip/rng.hpp"

namespace coinflip {

/// Haar-distributed unit vector (complex Gaussian entries, normalized).
StateVector random_state_vector(Index dim, Rng& rng);

/// Full-rank random density matrix A A^dagger / tr(A A^dagger) with Ginibre A.
DensityMatrix random_density_matrix(Index dim, Rng& rng);

/// Random probability vector with every entry at least `min_mass`.
/// Degenerate draws are rejected and retried.
std::vector<double> random_prior(Index n, Rng& rng, double min_mass = 1e-6);

} // namespace coinflip
