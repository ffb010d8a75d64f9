#include "pinchlab/operators.hpp"

#include "pinchlab/errors.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <vector>

namespace pinchlab {

OperatorPair assemble(const ImmersedMesh& mesh, MassType mass_type) {
  validate_mesh(mesh);
  const int nv = mesh.vertex_count();

  std::vector<Eigen::Triplet<double>> st;
  std::vector<Eigen::Triplet<double>> mt;
  st.reserve(mesh.faces.size() * 12);
  mt.reserve(mesh.faces.size() * (mass_type == MassType::Lumped ? 3 : 9));

  OperatorPair ops;
  ops.mass_type = mass_type;

  for (int f = 0; f < mesh.face_count(); ++f) {
    const auto& tri = mesh.faces[f];
    const Vec4& pa = mesh.vertices[tri[0]];
    const Vec4& pb = mesh.vertices[tri[1]];
    const Vec4& pc = mesh.vertices[tri[2]];
    // side i opposite corner i
    const double la = geodesic_distance(pb, pc);
    const double lb = geodesic_distance(pa, pc);
    const double lc = geodesic_distance(pa, pb);

    TriangleGeometry geo;
    try {
      geo = spherical_triangle(la, lb, lc);
    } catch (const NumericError&) {
      throw NumericError("assemble: degenerate face " + std::to_string(f));
    }
    if (geo.area < 1e-14) {
      throw NumericError("assemble: degenerate face " + std::to_string(f));
    }
    ops.total_area += geo.area;

    for (int k = 0; k < 3; ++k) {
      const int i = tri[(k + 1) % 3];
      const int j = tri[(k + 2) % 3];
      const double w = 0.5 * geo.cot[k];  // cotangent at the corner opposite edge (i,j)
      st.emplace_back(i, j, -w);
      st.emplace_back(j, i, -w);
      st.emplace_back(i, i, w);
      st.emplace_back(j, j, w);
    }

    if (mass_type == MassType::Lumped) {
      const double third = geo.area / 3.0;
      for (int k = 0; k < 3; ++k) mt.emplace_back(tri[k], tri[k], third);
    } else {
      const double off = geo.area / 12.0;
      for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
          mt.emplace_back(tri[k], tri[l], k == l ? 2.0 * off : off);
        }
      }
    }
  }

  ops.stiffness.resize(nv, nv);
  ops.stiffness.setFromTriplets(st.begin(), st.end());
  ops.mass.resize(nv, nv);
  ops.mass.setFromTriplets(mt.begin(), mt.end());

  ops.vertex_weights = ops.mass * ScalarField::Ones(nv);
  for (int v = 0; v < nv; ++v) {
    if (!(ops.vertex_weights[v] > 0.0)) {
      throw NumericError("assemble: nonpositive vertex weight at vertex " + std::to_string(v));
    }
  }
  return ops;
}

double integrate(const OperatorPair& ops, const ScalarField& f) {
  if (f.size() != ops.vertex_weights.size()) {
    throw ConfigError("integrate: field size does not match operator size");
  }
  return f.dot(ops.vertex_weights);
}

double lp_norm(const OperatorPair& ops, const ScalarField& f, double p) {
  if (f.size() != ops.vertex_weights.size()) {
    throw ConfigError("lp_norm: field size does not match operator size");
  }
  const double peak = f.cwiseAbs().maxCoeff();
  if (std::isinf(p)) return peak;
  if (!(p >= 1.0)) throw ConfigError("lp_norm: p must be >= 1 or infinity");
  if (peak == 0.0) return 0.0;
  // Scale by the peak so large p cannot overflow.
  double acc = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    acc += ops.vertex_weights[i] * std::pow(std::abs(f[i]) / peak, p);
  }
  return peak * std::pow(acc / ops.total_area, 1.0 / p);
}

void write_matrix_coord(const SparseMat& m, std::ostream& os) {
  char buf[96];
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseMat::InnerIterator it(m, k); it; ++it) {
      std::snprintf(buf, sizeof(buf), "%ld %ld %.17g\n", static_cast<long>(it.row()),
                    static_cast<long>(it.col()), it.value());
      os << buf;
    }
  }
}

}  // namespace pinchlab
