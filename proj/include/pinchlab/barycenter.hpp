#pragma once

#include "pinchlab/mesh.hpp"
#include "pinchlab/operators.hpp"

#include <vector>

namespace pinchlab {

struct GravityResult {
  Vec4 p0 = Vec4::Zero();
  double energy = 0;            // E(p0), area units
  double moment_residual = 0;   // |(1/|M|) \int (sin r / r) exp^-1_{p0}(x) dv|
  int iterations = 0;
  bool flat_flag = false;       // near-degenerate criticality landscape
};

// E(p) = \int (1 - cos d(p, x)) dv, quadrature against the mass matrix.
double gravity_energy(const OperatorPair& ops, const ImmersedMesh& mesh, const Vec4& p);

struct MomentResult {
  Vec4 moments = Vec4::Zero();  // ambient components of \int (sin r / r) exp^-1_p(x) dv
  double norm = 0;
  std::vector<int> excluded;    // antipodal vertices skipped with a warning flag
};

// Coordinate moments of the center-of-mass condition at p.
MomentResult moment_residual(const OperatorPair& ops, const ImmersedMesh& mesh, const Vec4& p);

// Riemannian fixed-point descent p <- exp_p(eta * m(p)) on the gravity energy,
// with step halving on energy increase. Stops when |m(p)| <= tol (m normalized
// by |M|). flat_flag is set when the energy landscape is flat to 1e-12 * |M|
// while the moment is already below 10 * tol.
GravityResult center_of_gravity(const OperatorPair& ops, const ImmersedMesh& mesh,
                                const Vec4& init, double tol = 1e-10, int max_iter = 200);

}  // namespace pinchlab
