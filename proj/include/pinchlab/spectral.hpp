#pragma once

#include "pinchlab/operators.hpp"

#include <cstdint>

namespace pinchlab {

struct EigenOptions {
  double tol = 1e-9;          // bound on |S phi - lambda M phi| / |M phi|
  int max_iter = 500;
  std::uint64_t seed = 4242;  // start-block seed; fixes the result under multiplicity
  int block = 8;
};

struct EigenResult {
  double lambda1 = 0;
  ScalarField eigenvector;    // M-normalized, mass-orthogonal to constants
  double residual = 0;
  int iterations = 0;
};

// Smallest eigenvalue of stiffness * phi = lambda * mass * phi with the
// constant mode deflated at every step. Locally optimal block preconditioned
// CG on the Rayleigh quotient, with a blocked inverse-iteration fallback when
// it stagnates. Deterministic for a fixed seed.
EigenResult first_nonzero_eigenvalue(const OperatorPair& ops, const EigenOptions& opts = {});

// (f' S f) / (g' M g) with g = f minus its mass-weighted mean.
double rayleigh_quotient(const OperatorPair& ops, const ScalarField& f);

}  // namespace pinchlab
