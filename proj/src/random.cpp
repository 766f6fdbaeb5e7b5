/*
 * This code is part of coinflip-lab.
 *
 * (C) Copyright 2026, coinflip-lab contributors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "coinflip/random.hpp"

namespace coinflip {

StateVector random_state_vector(Index dim, Rng& rng) {
  Vector v(dim);
  for (Index i = 0; i < dim; ++i) {
    v(i) = Complex(rng.normal(), rng.normal());
  }
  return StateVector(std::move(v)).normalized();
}

DensityMatrix random_density_matrix(Index dim, Rng& rng) {
  Matrix a(dim, dim);
  for (Index r = 0; r < dim; ++r) {
    for (Index c = 0; c < dim; ++c) {
      a(r, c) = Complex(rng.normal(), rng.normal());
    }
  }
  Matrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix::from_operator(Operator(std::move(rho)));
}

std::vector<double> random_prior(Index n, Rng& rng, double min_mass) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<double> p(static_cast<size_t>(n));
    double sum = 0.0;
    for (auto& x : p) {
      x = -std::log(1.0 - rng.uniform());
      sum += x;
    }
    bool ok = sum > 0.0;
    for (auto& x : p) {
      x /= sum;
      ok = ok && x >= min_mass;
    }
    if (ok) {
      return p;
    }
  }
  throw InvariantError("failed to draw a non-degenerate prior");
}

} // namespace coinflip
