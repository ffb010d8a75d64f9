#include "pinchlab/barycenter.hpp"

#include "pinchlab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace pinchlab {

double gravity_energy(const OperatorPair& ops, const ImmersedMesh& mesh, const Vec4& p) {
  if (mesh.vertex_count() != ops.vertex_weights.size()) {
    throw ConfigError("gravity_energy: mesh and operators disagree");
  }
  double acc = 0;
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    acc += ops.vertex_weights[v] * (1.0 - std::cos(geodesic_distance(p, mesh.vertices[v])));
  }
  return acc;
}

MomentResult moment_residual(const OperatorPair& ops, const ImmersedMesh& mesh, const Vec4& p) {
  if (mesh.vertex_count() != ops.vertex_weights.size()) {
    throw ConfigError("moment_residual: mesh and operators disagree");
  }
  MomentResult out;
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    const Vec4& x = mesh.vertices[v];
    const Vec4 u = tangent_part(p, x);
    const double s = u.norm();
    const double r = std::atan2(s, p.dot(x));
    if (r > kPi - 1e-9) {
      out.excluded.push_back(v);
      continue;
    }
    if (s < 1e-300) continue;  // x == p contributes nothing
    // (sin r / r) * exp^-1_p(x); the sinc factor uses a series below r = 1e-6.
    out.moments += ops.vertex_weights[v] * (sinc_smooth(r) * (r / s)) * u;
  }
  out.norm = out.moments.norm();
  return out;
}

GravityResult center_of_gravity(const OperatorPair& ops, const ImmersedMesh& mesh,
                                const Vec4& init, double tol, int max_iter) {
  if (!(tol > 0)) throw ConfigError("center_of_gravity: tolerance must be positive");
  const double area = ops.total_area;
  Vec4 p = init.normalized();

  auto normalized_moment = [&](const Vec4& q) -> Vec4 {
    return moment_residual(ops, mesh, q).moments / area;
  };

  GravityResult out;
  double energy = gravity_energy(ops, mesh, p);
  double energy_min = energy, energy_max = energy;
  Vec4 m = normalized_moment(p);

  int it = 0;
  for (; it < max_iter && m.norm() > tol; ++it) {
    double eta = 1.0;
    Vec4 next = sphere_exp(p, eta * m);
    double next_energy = gravity_energy(ops, mesh, next);
    // Halve on a genuine energy increase; near the minimum the differences
    // sit at roundoff, so allow noise at the 1e-12 |M| level through.
    while (next_energy > energy + 1e-12 * area && eta > 1e-8) {
      eta *= 0.5;
      next = sphere_exp(p, eta * m);
      next_energy = gravity_energy(ops, mesh, next);
    }
    p = next;
    energy = next_energy;
    energy_min = std::min(energy_min, energy);
    energy_max = std::max(energy_max, energy);
    m = normalized_moment(p);
  }
  if (m.norm() > tol) {
    throw NumericError("center_of_gravity: no convergence within max_iter (|m| = " +
                       std::to_string(m.norm()) + " at the last iterate)");
  }

  out.p0 = p;
  out.energy = energy;
  out.moment_residual = m.norm();
  out.iterations = it;

  // Flat-landscape detection. Iterate energies alone cannot see flatness when
  // convergence is immediate, so probe a fixed fan of nearby points as well.
  if (m.norm() <= 10.0 * tol) {
    double probe_min = energy_min, probe_max = energy_max;
    const auto basis = tangent_basis(p);
    for (int k = 0; k < 3; ++k) {
      for (double s : {0.2, -0.2}) {
        const double e = gravity_energy(ops, mesh, sphere_exp(p, s * basis[k]));
        probe_min = std::min(probe_min, e);
        probe_max = std::max(probe_max, e);
      }
    }
    out.flat_flag = (probe_max - probe_min) <= 1e-12 * area;
  }
  return out;
}

}  // namespace pinchlab
