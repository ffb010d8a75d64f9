#pragma once

#include "pinchlab/curvature.hpp"
#include "pinchlab/mesh.hpp"
#include "pinchlab/operators.hpp"

#include <vector>

namespace pinchlab {

// Per-vertex distance function r to the basepoint and the position field
// X = sin(r) grad r = cos(r) x - p0, split into its tangential part and the
// component along the surface normal.
struct PositionFields {
  Vec4 basepoint = Vec4::Zero();
  ScalarField r;
  std::vector<Vec4> X;
  std::vector<Vec4> X_tan;
  ScalarField X_normal;
  std::vector<int> degenerate;  // vertices with r = 0 (X undirected there)
};

// Throws ConfigError when a vertex is antipodal to p0 (r = pi). Vertices that
// coincide with p0 get X = X_tan = 0, X_normal = 0 and are flagged.
PositionFields position_fields(const ImmersedMesh& mesh, const Vec4& p0,
                               const CurvatureField& normals);

}  // namespace pinchlab
