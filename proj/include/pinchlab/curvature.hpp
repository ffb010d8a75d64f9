#pragma once

#include "pinchlab/mesh.hpp"
#include "pinchlab/operators.hpp"

#include <vector>

namespace pinchlab {

enum class CurvatureSource { Analytic, Discrete };

// Per-vertex extrinsic geometry of the immersion into S^3: unit normal nu
// (tangent to the ambient sphere), mean curvature H = trace(shape)/n, and the
// Frobenius norm |B| of the second fundamental form. Sign convention: on a
// geodesic sphere the outward normal gives H = cot R > 0.
struct CurvatureField {
  std::vector<Vec4> nu;
  ScalarField H;
  ScalarField B_norm;
  CurvatureSource source = CurvatureSource::Discrete;
  std::vector<int> flagged;  // vertices whose fit was rank-deficient
};

// Closed-form curvature for tagged geodesic spheres and Clifford tori.
// Throws ConfigError for perturbed or untagged meshes.
CurvatureField analytic_curvature(const ImmersedMesh& mesh);

// Shape operator by weighted least-squares jet fit of the two-ring expressed
// in geodesic normal coordinates of S^3 at each vertex. Normals are seeded
// from the oriented face normals, so the sign follows the mesh orientation.
CurvatureField discrete_curvature(const ImmersedMesh& mesh);

struct JorgeXavierResult {
  double h_inf = 0;   // |H|_infinity
  double cot_R = 0;   // cot of the enclosing radius
  bool pass = false;
};

// Checks |H|_inf >= cot(R_enclosing) - rel_tol * cot(R_enclosing). Requires
// every vertex within R_enclosing < pi/2 of p0.
JorgeXavierResult jorge_xavier_check(const ImmersedMesh& mesh, const CurvatureField& curv,
                                     const Vec4& p0, double R_enclosing,
                                     double rel_tol = 0.05);

}  // namespace pinchlab
