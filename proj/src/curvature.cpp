#include "pinchlab/curvature.hpp"

#include "pinchlab/errors.hpp"
#include "pinchlab/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

namespace pinchlab {

namespace {

struct FaceFrame {
  Vec4 normal = Vec4::Zero();  // tangent to S^3 at the face centroid
  double area = 0;
};

std::vector<FaceFrame> oriented_face_normals(const ImmersedMesh& mesh) {
  std::vector<FaceFrame> out(mesh.faces.size());
  for (size_t f = 0; f < mesh.faces.size(); ++f) {
    const auto& tri = mesh.faces[f];
    const Vec4& a = mesh.vertices[tri[0]];
    const Vec4& b = mesh.vertices[tri[1]];
    const Vec4& c = mesh.vertices[tri[2]];
    const Vec4 m = (a + b + c).normalized();
    Vec4 n = cross4(m, b - a, c - a);
    const double len = n.norm();
    out[f].area = 0.5 * len;  // chordal area, used only as an averaging weight
    out[f].normal = len > 1e-300 ? Vec4(n / len) : Vec4::Zero();
  }
  return out;
}

}  // namespace

CurvatureField analytic_curvature(const ImmersedMesh& mesh) {
  const int nv = mesh.vertex_count();
  CurvatureField out;
  out.source = CurvatureSource::Analytic;
  out.nu.resize(nv);
  out.H.resize(nv);
  out.B_norm.resize(nv);

  if (const auto* tag = std::get_if<GeodesicSphereTag>(&mesh.family)) {
    const double cot_r = std::cos(tag->radius) / std::sin(tag->radius);
    for (int v = 0; v < nv; ++v) {
      const Vec4& x = mesh.vertices[v];
      // Unit tangent of the radial geodesic at x, pointing away from the center.
      Vec4 nu = std::cos(tag->radius) * x - tag->center;
      out.nu[v] = nu / std::sin(tag->radius);
      out.H[v] = cot_r;
      out.B_norm[v] = std::sqrt(2.0) * std::abs(cot_r);
    }
    return out;
  }
  if (const auto* tag = std::get_if<CliffordTorusTag>(&mesh.family)) {
    for (int v = 0; v < nv; ++v) {
      const Vec4& x = mesh.vertices[v];
      // Product normal: (-r2/r1 * u, r1/r2 * v) for x = (r1 u, r2 v).
      out.nu[v] = Vec4(-(tag->r2 / tag->r1) * x[0], -(tag->r2 / tag->r1) * x[1],
                       (tag->r1 / tag->r2) * x[2], (tag->r1 / tag->r2) * x[3]);
      out.nu[v].normalize();
      out.H[v] = 0.0;
      out.B_norm[v] = std::sqrt(2.0);
    }
    return out;
  }
  throw ConfigError("analytic_curvature: closed-form curvature requires a geodesic sphere "
                    "or Clifford torus tag; use discrete_curvature");
}

CurvatureField discrete_curvature(const ImmersedMesh& mesh) {
  const MeshTopology topo = build_topology(mesh);
  const int nv = mesh.vertex_count();
  for (int v = 0; v < nv; ++v) {
    if (topo.vertex_ring[v].size() < 5) {
      throw ConfigError("discrete_curvature: vertex " + std::to_string(v) +
                        " has valence < 5; the jet fit needs a richer neighborhood");
    }
  }

  const auto frames = oriented_face_normals(mesh);

  CurvatureField out;
  out.source = CurvatureSource::Discrete;
  out.nu.resize(nv);
  out.H.resize(nv);
  out.B_norm.resize(nv);
  std::vector<char> bad(nv, 0);

  parallel_for(nv, [&](int begin, int end) {
    std::vector<int> nbrs;
    std::vector<char> taken(nv, 0);
    for (int v = begin; v < end; ++v) {
      const Vec4& p = mesh.vertices[v];

      // Orientation seed from incident faces.
      Vec4 seed = Vec4::Zero();
      for (int f : topo.vertex_faces[v]) seed += frames[f].area * frames[f].normal;
      seed = tangent_part(p, seed);
      if (seed.norm() < 1e-14) seed = tangent_part(p, frames[topo.vertex_faces[v][0]].normal);
      seed.normalize();

      // Two-ring stencil.
      nbrs.clear();
      taken[v] = 1;
      for (int w : topo.vertex_ring[v]) {
        if (!taken[w]) {
          taken[w] = 1;
          nbrs.push_back(w);
        }
      }
      const size_t ring1 = nbrs.size();
      for (size_t k = 0; k < ring1; ++k) {
        for (int w : topo.vertex_ring[nbrs[k]]) {
          if (!taken[w]) {
            taken[w] = 1;
            nbrs.push_back(w);
          }
        }
      }
      taken[v] = 0;
      for (int w : nbrs) taken[w] = 0;

      // Geodesic normal coordinates of S^3 centered at the vertex. The image
      // of the surface keeps the same second fundamental form at the origin.
      std::vector<Vec4> logs(nbrs.size());
      double ring1_mean = 0;
      for (size_t k = 0; k < nbrs.size(); ++k) {
        logs[k] = sphere_log(p, mesh.vertices[nbrs[k]]);
        if (k < ring1) ring1_mean += logs[k].norm();
      }
      ring1_mean /= static_cast<double>(ring1);
      const double scale = ring1_mean > 1e-300 ? ring1_mean : 1.0;
      const double sigma = 1.5 * scale;

      Vec4 normal = seed;
      bool flagged = false;
      double d = 0, e = 0, qa = 0, qb = 0, qc = 0;
      const bool cubic = nbrs.size() >= 12;
      const int ncoef = cubic ? 9 : 5;

      for (int pass = 0; pass < 2; ++pass) {
        // Orthonormal chart frame (e1, e2, normal) of T_p S^3.
        const auto tb = tangent_basis(p);
        Vec4 e1 = tb[0] - tb[0].dot(normal) * normal;
        if (e1.norm() < 0.5) e1 = tb[1] - tb[1].dot(normal) * normal;
        e1.normalize();
        const Vec4 e2 = cross4(p, normal, e1).normalized();

        Eigen::MatrixXd A(static_cast<int>(nbrs.size()), ncoef);
        Eigen::VectorXd rhs(static_cast<int>(nbrs.size()));
        for (size_t k = 0; k < nbrs.size(); ++k) {
          const double xi = logs[k].dot(e1) / scale;
          const double eta = logs[k].dot(e2) / scale;
          const double zeta = logs[k].dot(normal) / scale;
          const double dist = logs[k].norm();
          const double w = std::sqrt(std::exp(-(dist * dist) / (sigma * sigma)));
          A(static_cast<int>(k), 0) = w * xi;
          A(static_cast<int>(k), 1) = w * eta;
          A(static_cast<int>(k), 2) = w * xi * xi;
          A(static_cast<int>(k), 3) = w * xi * eta;
          A(static_cast<int>(k), 4) = w * eta * eta;
          if (cubic) {
            A(static_cast<int>(k), 5) = w * xi * xi * xi;
            A(static_cast<int>(k), 6) = w * xi * xi * eta;
            A(static_cast<int>(k), 7) = w * xi * eta * eta;
            A(static_cast<int>(k), 8) = w * eta * eta * eta;
          }
          rhs[static_cast<int>(k)] = w * zeta;
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const double cond = svd.singularValues()(0) /
                            std::max(svd.singularValues()(ncoef - 1), 1e-300);
        if (cond > 1e8) {
          flagged = true;
          break;
        }
        const Eigen::VectorXd coef = svd.solve(rhs);
        d = coef[0];
        e = coef[1];
        qa = coef[2];
        qb = coef[3];
        qc = coef[4];
        // Tilt-corrected normal for the next pass / final frame.
        Vec4 next = -d * e1 - e * e2 + normal;
        normal = tangent_part(p, next).normalized();
      }

      if (flagged) {
        bad[v] = 1;
        out.nu[v] = seed;
        out.H[v] = 0;
        out.B_norm[v] = 0;
        continue;
      }

      // Graph z = h(x, y) at the origin: gradient (d, e), Hessian/scale.
      const double w2 = 1.0 + d * d + e * e;
      const double wr = std::sqrt(w2);
      Eigen::Matrix2d hess;
      hess << 2.0 * qa / scale, qb / scale, qb / scale, 2.0 * qc / scale;
      Eigen::Matrix2d g;
      g << 1.0 + d * d, d * e, d * e, 1.0 + e * e;
      // Second fundamental form with <grad_u nu, v> convention: -Hess/w.
      const Eigen::Matrix2d II = -hess / wr;
      const Eigen::Matrix2d shape = g.inverse() * II;

      // Keep the normal on the side selected by the face orientation.
      double sgn = 1.0;
      if (normal.dot(seed) < 0.0) {
        normal = -normal;
        sgn = -1.0;
      }
      out.nu[v] = normal;
      out.H[v] = sgn * 0.5 * shape.trace();
      out.B_norm[v] = std::sqrt(std::max((shape * shape).trace(), 0.0));
    }
  });

  // Rank-deficient fits inherit the one-ring average.
  for (int v = 0; v < nv; ++v) {
    if (!bad[v]) continue;
    out.flagged.push_back(v);
    double h = 0, b = 0;
    int cnt = 0;
    for (int w : topo.vertex_ring[v]) {
      if (!bad[w]) {
        h += out.H[w];
        b += out.B_norm[w];
        ++cnt;
      }
    }
    if (cnt > 0) {
      out.H[v] = h / cnt;
      out.B_norm[v] = b / cnt;
    }
  }
  return out;
}

JorgeXavierResult jorge_xavier_check(const ImmersedMesh& mesh, const CurvatureField& curv,
                                     const Vec4& p0, double R_enclosing, double rel_tol) {
  if (!(R_enclosing > 0.0) || !(R_enclosing < kPi / 2.0)) {
    throw ConfigError("jorge_xavier_check: enclosing radius must lie in (0, pi/2)");
  }
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    if (geodesic_distance(p0, mesh.vertices[v]) > R_enclosing + 1e-12) {
      throw ConfigError("jorge_xavier_check: vertex " + std::to_string(v) +
                        " lies outside the stated enclosing ball");
    }
  }
  JorgeXavierResult out;
  out.h_inf = curv.H.cwiseAbs().maxCoeff();
  out.cot_R = std::cos(R_enclosing) / std::sin(R_enclosing);
  out.pass = out.h_inf >= out.cot_R - rel_tol * std::abs(out.cot_R) - 1e-12;
  return out;
}

}  // namespace pinchlab
