#include "pinchlab/position_fields.hpp"

#include "pinchlab/errors.hpp"

#include <cmath>

namespace pinchlab {

PositionFields position_fields(const ImmersedMesh& mesh, const Vec4& p0,
                               const CurvatureField& normals) {
  const int nv = mesh.vertex_count();
  if (static_cast<int>(normals.nu.size()) != nv) {
    throw ConfigError("position_fields: curvature field size does not match the mesh");
  }
  PositionFields out;
  out.basepoint = p0;
  out.r.resize(nv);
  out.X.resize(nv);
  out.X_tan.resize(nv);
  out.X_normal.resize(nv);

  for (int v = 0; v < nv; ++v) {
    const Vec4& x = mesh.vertices[v];
    const double r = geodesic_distance(p0, x);
    if (r > kPi - 1e-12) {
      throw ConfigError("position_fields: vertex " + std::to_string(v) +
                        " is antipodal to the basepoint");
    }
    out.r[v] = r;
    // X = sin(r) * grad r; in ambient coordinates this is cos(r) x - p0.
    const Vec4 X = std::cos(r) * x - p0;
    out.X[v] = X;
    if (r < 1e-14) {
      out.X[v].setZero();
      out.X_tan[v].setZero();
      out.X_normal[v] = 0.0;
      out.degenerate.push_back(v);
      continue;
    }
    const double xn = X.dot(normals.nu[v]);
    out.X_normal[v] = xn;
    out.X_tan[v] = X - xn * normals.nu[v];
  }
  return out;
}

}  // namespace pinchlab
