#include "pinchlab/pinching.hpp"

#include "pinchlab/errors.hpp"
#include "pinchlab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

namespace pinchlab {

namespace {

constexpr int kN = 2;  // hypersurface dimension

bool pass_leq(double lhs, double rhs, double rel_tol) {
  return lhs <= rhs + rel_tol * std::abs(rhs) + 1e-12;
}

double face_area_intrinsic(const ImmersedMesh& mesh, int f) {
  const auto& tri = mesh.faces[f];
  const double la = geodesic_distance(mesh.vertices[tri[1]], mesh.vertices[tri[2]]);
  const double lb = geodesic_distance(mesh.vertices[tri[0]], mesh.vertices[tri[2]]);
  const double lc = geodesic_distance(mesh.vertices[tri[0]], mesh.vertices[tri[1]]);
  return spherical_triangle(la, lb, lc).area;
}

// Static kd-tree over points in R^4 for nearest-vertex queries.
class KdTree4 {
 public:
  explicit KdTree4(const std::vector<Vec4>& points) : pts_(points) {
    idx_.resize(pts_.size());
    std::iota(idx_.begin(), idx_.end(), 0);
    nodes_.reserve(2 * pts_.size() / kLeaf + 4);
    root_ = build(0, static_cast<int>(pts_.size()));
  }

  double nearest_sq(const Vec4& q) const {
    double best = std::numeric_limits<double>::max();
    search(root_, q, best);
    return best;
  }

 private:
  static constexpr int kLeaf = 12;
  struct Node {
    int axis = -1;
    double split = 0;
    int begin = 0, end = 0;
    int left = -1, right = -1;
  };

  int build(int begin, int end) {
    Node node;
    node.begin = begin;
    node.end = end;
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    if (end - begin <= kLeaf) return id;

    Vec4 lo = pts_[idx_[begin]], hi = lo;
    for (int i = begin + 1; i < end; ++i) {
      lo = lo.cwiseMin(pts_[idx_[i]]);
      hi = hi.cwiseMax(pts_[idx_[i]]);
    }
    int axis = 0;
    (hi - lo).maxCoeff(&axis);
    const int mid = (begin + end) / 2;
    std::nth_element(idx_.begin() + begin, idx_.begin() + mid, idx_.begin() + end,
                     [&](int a, int b) { return pts_[a][axis] < pts_[b][axis]; });
    nodes_[id].axis = axis;
    nodes_[id].split = pts_[idx_[mid]][axis];
    nodes_[id].left = build(begin, mid);
    nodes_[id].right = build(mid, end);
    return id;
  }

  void search(int id, const Vec4& q, double& best) const {
    const Node& node = nodes_[id];
    if (node.axis < 0) {
      for (int i = node.begin; i < node.end; ++i) {
        best = std::min(best, (pts_[idx_[i]] - q).squaredNorm());
      }
      return;
    }
    const double delta = q[node.axis] - node.split;
    const int near = delta < 0 ? node.left : node.right;
    const int far = delta < 0 ? node.right : node.left;
    search(near, q, best);
    if (delta * delta < best) search(far, q, best);
  }

  const std::vector<Vec4>& pts_;
  std::vector<int> idx_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace

PinchingScalars pinching_scalars(const OperatorPair& ops, const PositionFields& fields,
                                 const CurvatureField& curv, double lambda1, double q) {
  const int nv = static_cast<int>(fields.r.size());
  PinchingScalars s;
  s.lambda1 = lambda1;
  s.q = q;
  s.area = ops.total_area;
  s.H_inf = curv.H.cwiseAbs().maxCoeff();
  s.H_2 = lp_norm(ops, curv.H, 2.0);
  s.B_q = lp_norm(ops, curv.B_norm, q);
  s.h = std::sqrt(1.0 + s.H_inf * s.H_inf);
  s.R_enclosing = fields.r.maxCoeff();
  s.beta = std::cos(s.R_enclosing) / std::sin(s.R_enclosing);
  const double eps_raw = kN * (1.0 + s.H_inf * s.H_inf) - lambda1;
  s.eps_clamped = eps_raw < 0;
  s.eps = std::max(eps_raw, 0.0);
  s.R0 = std::asin(std::min(1.0 / s.h, 1.0));
  s.A = std::sqrt(s.area) * (1.0 + s.B_q);
  s.reilly_rhs = kN * (1.0 + s.H_2 * s.H_2);

  double x2 = 0, xt2 = 0;
  ScalarField psi(nv);
  for (int v = 0; v < nv; ++v) {
    const double xn = fields.X[v].norm();
    const double xt = fields.X_tan[v].norm();
    x2 += ops.vertex_weights[v] * xn * xn;
    xt2 += ops.vertex_weights[v] * xt * xt;
    s.X_inf = std::max(s.X_inf, xn);
    s.Xt_inf = std::max(s.Xt_inf, xt);
    psi[v] = std::sqrt(xn) * std::abs(xn - 1.0 / s.h);
  }
  s.X2sq = x2 / s.area;
  s.Xt2sq = xt2 / s.area;
  s.psi_1 = lp_norm(ops, psi, 1.0);
  s.psi_inf = psi.maxCoeff();
  return s;
}

ScalarField heintze_identity_check(const ImmersedMesh& mesh, const PositionFields& fields) {
  const int nv = mesh.vertex_count();
  const auto basis = tangent_basis(fields.basepoint);

  // f_i(x) = (sin r / r) x_i are, in ambient terms, the coordinates of x along
  // the three tangent directions at the basepoint.
  std::vector<ScalarField> f(3, ScalarField(nv));
  for (int v = 0; v < nv; ++v) {
    for (int i = 0; i < 3; ++i) f[i][v] = mesh.vertices[v].dot(basis[i]);
  }

  ScalarField acc = ScalarField::Zero(nv);
  ScalarField wsum = ScalarField::Zero(nv);
  for (int fc = 0; fc < mesh.face_count(); ++fc) {
    const auto& tri = mesh.faces[fc];
    const Vec4& a = mesh.vertices[tri[0]];
    const Vec4& b = mesh.vertices[tri[1]];
    const Vec4& c = mesh.vertices[tri[2]];
    double total = 0;
    for (int i = 0; i < 3; ++i) {
      total += face_gradient(a, b, c, f[i][tri[0]], f[i][tri[1]], f[i][tri[2]]).squaredNorm();
    }
    const double w = face_area_intrinsic(mesh, fc);
    for (int k = 0; k < 3; ++k) {
      acc[tri[k]] += w * total;
      wsum[tri[k]] += w;
    }
  }

  ScalarField residual(nv);
  for (int v = 0; v < nv; ++v) {
    const double lhs = acc[v] / wsum[v];
    const double rhs = kN - fields.X_tan[v].squaredNorm();
    residual[v] = std::abs(lhs - rhs);
  }
  return residual;
}

WeakDivergenceResult weak_divergence_check(const ImmersedMesh& mesh, const OperatorPair& ops,
                                           const PositionFields& fields,
                                           const CurvatureField& curv, int count,
                                           std::uint64_t seed) {
  const int nv = mesh.vertex_count();
  WeakDivergenceResult out;

  // div(X_tan) target.
  ScalarField g(nv);
  for (int v = 0; v < nv; ++v) {
    g[v] = kN * (std::cos(fields.r[v]) - curv.H[v] * fields.X_normal[v]);
  }
  out.global_relative = std::abs(integrate(ops, g)) / ops.total_area;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_unit = [&] {
    Vec4 u;
    for (int i = 0; i < 4; ++i) u[i] = gauss(rng);
    return Vec4(u.normalized());
  };

  out.relative.reserve(count);
  for (int k = 0; k < count; ++k) {
    // Smooth low-frequency combination of the hat basis: a random linear plus
    // quadratic ambient polynomial sampled at the vertices.
    ScalarField phi = ScalarField::Zero(nv);
    for (int j = 0; j < 3; ++j) {
      const Vec4 u = random_unit();
      const double amp = gauss(rng);
      for (int v = 0; v < nv; ++v) phi[v] += amp * mesh.vertices[v].dot(u);
    }
    for (int j = 0; j < 2; ++j) {
      const Vec4 u = random_unit();
      const Vec4 w = random_unit();
      const double amp = gauss(rng);
      for (int v = 0; v < nv; ++v) {
        phi[v] += amp * mesh.vertices[v].dot(u) * mesh.vertices[v].dot(w);
      }
    }
    const double norm2 = lp_norm(ops, phi, 2.0);
    if (norm2 > 1e-14) phi /= norm2;

    double lhs = 0;  // -∫ <X_tan, grad phi>
    for (int fc = 0; fc < mesh.face_count(); ++fc) {
      const auto& tri = mesh.faces[fc];
      const Vec4& a = mesh.vertices[tri[0]];
      const Vec4& b = mesh.vertices[tri[1]];
      const Vec4& c = mesh.vertices[tri[2]];
      const Vec4 grad = face_gradient(a, b, c, phi[tri[0]], phi[tri[1]], phi[tri[2]]);
      const Vec4 xt =
          (fields.X_tan[tri[0]] + fields.X_tan[tri[1]] + fields.X_tan[tri[2]]) / 3.0;
      lhs -= face_area_intrinsic(mesh, fc) * face_project(a, b, c, xt).dot(grad);
    }
    double rhs = 0;  // ∫ phi g
    for (int v = 0; v < nv; ++v) rhs += ops.vertex_weights[v] * phi[v] * g[v];

    // ||phi||_{L^2(M)} = sqrt(area) after normalization above.
    const double rel = std::abs(lhs - rhs) / (kN * std::sqrt(ops.total_area));
    out.relative.push_back(rel);
    out.max_relative = std::max(out.max_relative, rel);
  }
  return out;
}

std::vector<LemmaEntry> inequality_chain(const OperatorPair& ops, const PositionFields& fields,
                                         const CurvatureField& curv,
                                         const PinchingScalars& s, double rel_tol) {
  const int nv = static_cast<int>(fields.r.size());
  std::vector<LemmaEntry> entries;

  const bool beta_ok = s.beta > 0;
  const bool eps_ok = beta_ok && s.eps <= s.beta * s.beta;
  const std::string beta_reason = "enclosing radius >= pi/2 (beta <= 0)";
  const std::string eps_reason = "eps > beta^2";

  auto add = [&](const std::string& name, double lhs, double rhs, bool applicable,
                 const std::string& reason) {
    LemmaEntry e;
    e.name = name;
    e.lhs = lhs;
    e.rhs = rhs;
    if (!applicable) {
      e.not_applicable = true;
      e.reason = reason;
      e.pass = false;
    } else {
      e.pass = pass_leq(lhs, rhs, rel_tol);
    }
    entries.push_back(e);
  };

  // 1 <= (1 + |H|_inf^2) |X|_2^2 + (1 - beta^2)/n |X_tan|_2^2
  add("unit_lower_bound", 1.0,
      s.h * s.h * s.X2sq + (1.0 - s.beta * s.beta) / kN * s.Xt2sq, beta_ok, beta_reason);

  // lambda_1 |X|_2^2 <= avg(n - |X_tan|^2)
  add("rayleigh_test_bound", s.lambda1 * s.X2sq, kN - s.Xt2sq, true, "");

  // |X_tan|_2^2 <= (eps / beta^2) |X|_2^2
  add("tangential_energy_bound", s.Xt2sq,
      beta_ok ? s.eps / (s.beta * s.beta) * s.X2sq : 0.0, eps_ok,
      beta_ok ? eps_reason : beta_reason);

  // n / ((n+1) h^2) <= |X|_2^2 <= (1 + eps) / h^2
  add("position_energy_lower", kN / ((kN + 1.0) * s.h * s.h), s.X2sq, eps_ok,
      beta_ok ? eps_reason : beta_reason);
  add("position_energy_upper", s.X2sq, (1.0 + s.eps) / (s.h * s.h), eps_ok,
      beta_ok ? eps_reason : beta_reason);

  // |Y|_2^2 <= 4 n^2 h^2 eps (1 + 1/beta^2), Y = n cos(r) H nu - n |H|_inf^2 X
  double y2 = 0;
  for (int v = 0; v < nv; ++v) {
    const Vec4 y = kN * std::cos(fields.r[v]) * curv.H[v] * curv.nu[v] -
                   kN * s.H_inf * s.H_inf * fields.X[v];
    y2 += ops.vertex_weights[v] * y.squaredNorm();
  }
  y2 /= s.area;
  add("normal_defect_bound", y2,
      beta_ok ? 4.0 * kN * kN * s.h * s.h * s.eps * (1.0 + 1.0 / (s.beta * s.beta)) : 0.0,
      eps_ok, beta_ok ? eps_reason : beta_reason);

  // |W|_2^2 <= 4 h eps (1 + 1/beta^2), W = |X|^(-1/2) (X|X| + |X| cos(r) H nu - h X)
  double w2 = 0;
  for (int v = 0; v < nv; ++v) {
    const double xn = fields.X[v].norm();
    if (xn < 1e-14) continue;  // the field vanishes with |X|
    const Vec4 w = (fields.X[v] * xn + xn * std::cos(fields.r[v]) * curv.H[v] * curv.nu[v] -
                    s.h * fields.X[v]) /
                   std::sqrt(xn);
    w2 += ops.vertex_weights[v] * w.squaredNorm();
  }
  w2 /= s.area;
  add("radial_defect_bound", w2,
      beta_ok ? 4.0 * s.h * s.eps * (1.0 + 1.0 / (s.beta * s.beta)) : 0.0, eps_ok,
      beta_ok ? eps_reason : beta_reason);

  // |psi|_1 <= 5 eps^(1/2) / h^(3/2) (1 + 1/beta^2)^(1/2)
  add("radius_function_l1_bound", s.psi_1,
      beta_ok ? 5.0 * std::sqrt(s.eps) / std::pow(s.h, 1.5) *
                    std::sqrt(1.0 + 1.0 / (s.beta * s.beta))
              : 0.0,
      eps_ok, beta_ok ? eps_reason : beta_reason);

  // lambda_1 <= n (1 + |H|_2^2)
  add("reilly", s.lambda1, s.reilly_rhs, true, "");
  return entries;
}

ReillyResult reilly_check(double lambda1, const PinchingScalars& s, double rel_tol) {
  ReillyResult out;
  out.lambda1 = lambda1;
  out.rhs = s.reilly_rhs;
  out.pass = pass_leq(lambda1, out.rhs, rel_tol);
  return out;
}

ProjectedMesh project_F(const ImmersedMesh& mesh, const MeshTopology& topo, const Vec4& p0,
                        double R0) {
  const int nv = mesh.vertex_count();
  ProjectedMesh out;
  out.images.resize(nv);
  std::vector<Vec3> dirs(nv);  // direction coordinates in the tangent basis
  const auto basis = tangent_basis(p0);

  for (int v = 0; v < nv; ++v) {
    const Vec4& x = mesh.vertices[v];
    const Vec4 u = tangent_part(p0, x);
    const double s = u.norm();
    const double r = std::atan2(s, p0.dot(x));
    if (r < 1e-12 || r > kPi - 1e-12) {
      throw NumericError("project_F: vertex " + std::to_string(v) +
                         " lies at the basepoint or its antipode");
    }
    const Vec4 dir = u / s;
    out.images[v] = std::cos(R0) * p0 + std::sin(R0) * dir;
    dirs[v] = Vec3(dir.dot(basis[0]), dir.dot(basis[1]), dir.dot(basis[2]));
  }

  // Orientation of the direction-sphere image per face; a diffeomorphic
  // projection keeps one sign everywhere.
  out.jacobian_ok.assign(mesh.face_count(), 0);
  std::vector<double> dets(mesh.face_count());
  int positive = 0;
  for (int f = 0; f < mesh.face_count(); ++f) {
    const auto& tri = mesh.faces[f];
    Eigen::Matrix3d D;
    D.col(0) = dirs[tri[0]];
    D.col(1) = dirs[tri[1]];
    D.col(2) = dirs[tri[2]];
    dets[f] = D.determinant();
    if (dets[f] > 0) ++positive;
  }
  const double majority = positive * 2 >= mesh.face_count() ? 1.0 : -1.0;
  for (int f = 0; f < mesh.face_count(); ++f) {
    out.jacobian_ok[f] = (dets[f] * majority > 1e-16) ? 1 : 0;
    out.faces_ok += out.jacobian_ok[f];
  }

  out.edge_distortion.resize(static_cast<int>(topo.edges.size()));
  for (size_t e = 0; e < topo.edges.size(); ++e) {
    const auto& edge = topo.edges[e];
    const double d1 = geodesic_distance(mesh.vertices[edge.a], mesh.vertices[edge.b]);
    const double d2 = geodesic_distance(out.images[edge.a], out.images[edge.b]);
    out.edge_distortion[static_cast<int>(e)] = std::abs(d2 - d1);
  }
  out.max_distortion = out.edge_distortion.size() ? out.edge_distortion.maxCoeff() : 0.0;
  return out;
}

DfBracketResult df_bracket_check(const ImmersedMesh& mesh, const MeshTopology& topo,
                                 const ProjectedMesh& proj, const PositionFields& fields,
                                 double h, double slack) {
  DfBracketResult out;
  for (int v = 0; v < static_cast<int>(fields.r.size()); ++v) {
    const double xn = fields.X[v].norm();
    if (xn < 1e-12) continue;
    out.grad_r_inf = std::max(out.grad_r_inf, fields.X_tan[v].norm() / xn);
  }
  const double low_num = std::sqrt(std::max(0.0, 1.0 - out.grad_r_inf * out.grad_r_inf));

  out.edges_total = static_cast<int>(topo.edges.size());
  for (size_t e = 0; e < topo.edges.size(); ++e) {
    const auto& edge = topo.edges[e];
    const double d1 = geodesic_distance(mesh.vertices[edge.a], mesh.vertices[edge.b]);
    const double d2 = geodesic_distance(proj.images[edge.a], proj.images[edge.b]);
    const double rbar = 0.5 * (fields.r[edge.a] + fields.r[edge.b]);
    const double upper = 1.0 / (h * std::sin(rbar));
    const double lower = low_num * upper;
    const double ratio = d2 / d1;
    if (ratio >= lower * (1.0 - slack) - 1e-12 && ratio <= upper * (1.0 + slack) + 1e-12) {
      ++out.edges_ok;
    }
  }
  out.fraction_ok = out.edges_total ? static_cast<double>(out.edges_ok) / out.edges_total : 1.0;
  return out;
}

HausdorffResult hausdorff_distance(const ImmersedMesh& mesh, const MeshTopology& topo,
                                   const Vec4& p0, double R0, int sphere_samples) {
  const int nv = mesh.vertex_count();
  if (sphere_samples < 10 * nv) {
    throw ConfigError("hausdorff_distance: needs at least 10 samples per vertex");
  }
  HausdorffResult out;
  out.samples = sphere_samples;
  out.resolution_bound = topo.max_edge_length;

  // Direction 1 is exact: the distance from a point at radius r to the
  // distance sphere S(p0, R0) is |r - R0|.
  for (int v = 0; v < nv; ++v) {
    out.mesh_to_model =
        std::max(out.mesh_to_model, std::abs(geodesic_distance(p0, mesh.vertices[v]) - R0));
  }

  // Direction 2: Fibonacci samples of the model sphere against the vertex set.
  const KdTree4 tree(mesh.vertices);
  const auto basis = tangent_basis(p0);
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  std::vector<double> partial(static_cast<size_t>(sphere_samples));
  parallel_for(sphere_samples, [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / sphere_samples;
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * i;
      const Vec4 dir = rho * std::cos(phi) * basis[0] + rho * std::sin(phi) * basis[1] +
                       z * basis[2];
      const Vec4 sample = std::cos(R0) * p0 + std::sin(R0) * dir;
      const double chord = std::sqrt(tree.nearest_sq(sample));
      partial[static_cast<size_t>(i)] = 2.0 * std::asin(std::min(1.0, chord / 2.0));
    }
  });
  out.model_to_mesh = *std::max_element(partial.begin(), partial.end());
  out.d_h = std::max(out.mesh_to_model, out.model_to_mesh);
  return out;
}

StarshapedResult starshaped_check(const PositionFields& fields) {
  StarshapedResult out;
  out.min_X_normal = fields.X_normal.minCoeff();
  out.pass = out.min_X_normal > 0;
  return out;
}

RadiusPinchResult radius_pinching_check(const PositionFields& fields, double h, double R0) {
  RadiusPinchResult out;
  for (int v = 0; v < static_cast<int>(fields.r.size()); ++v) {
    out.max_X_dev = std::max(out.max_X_dev, std::abs(fields.X[v].norm() - 1.0 / h));
    out.max_r_dev = std::max(out.max_r_dev, std::abs(fields.r[v] - R0));
  }
  return out;
}

double chi_infinity(const PositionFields& fields) {
  double m = 0;
  for (const auto& xt : fields.X_tan) m = std::max(m, xt.norm());
  return m;
}

}  // namespace pinchlab
