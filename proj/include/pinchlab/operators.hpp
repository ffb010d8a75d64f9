#pragma once

#include "pinchlab/mesh.hpp"

#include <Eigen/SparseCore>

namespace pinchlab {

using ScalarField = Eigen::VectorXd;
using SparseMat = Eigen::SparseMatrix<double>;

enum class MassType { Lumped, Consistent };

// Intrinsic Laplace-Beltrami pair. Triangle cotangents and areas come from the
// three great-circle edge lengths (spherical law of cosines, l'Huilier), so
// the operators discretize the metric induced by the ambient sphere rather
// than the chordal geometry.
struct OperatorPair {
  SparseMat stiffness;          // symmetric PSD, constants in the kernel
  SparseMat mass;               // SPD; barycentric-lumped diagonal by default
  ScalarField vertex_weights;   // mass row sums: per-vertex quadrature weights
  double total_area = 0;
  MassType mass_type = MassType::Lumped;
};

OperatorPair assemble(const ImmersedMesh& mesh, MassType mass_type = MassType::Lumped);

// Integral of a vertex field against the mass matrix: f' * mass * 1.
double integrate(const OperatorPair& ops, const ScalarField& f);

// Normalized L^p norm ((1/|M|) \int |f|^p dv)^(1/p); p may be infinity.
double lp_norm(const OperatorPair& ops, const ScalarField& f, double p);

// Writes the stiffness matrix in coordinate text format: one "i j value" per line.
void write_matrix_coord(const SparseMat& m, std::ostream& os);

}  // namespace pinchlab
