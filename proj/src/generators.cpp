#include "pinchlab/errors.hpp"
#include "pinchlab/mesh.hpp"

#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace pinchlab {

namespace {

struct DirectionSphere {
  std::vector<Vec3> dirs;                   // unit directions in R^3
  std::vector<std::array<int, 3>> faces;    // outward (counterclockwise) winding
};

DirectionSphere icosphere(int refine) {
  if (refine < 0 || refine > 8) {
    throw ConfigError("icosphere: refine must be in [0, 8]");
  }
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  DirectionSphere s;
  const double raw[12][3] = {
      {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
      {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
      {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (const auto& c : raw) s.dirs.push_back(Vec3(c[0], c[1], c[2]).normalized());
  const int tri[20][3] = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (const auto& f : tri) s.faces.push_back({f[0], f[1], f[2]});

  for (int level = 0; level < refine; ++level) {
    std::unordered_map<std::uint64_t, int> midpoint;
    midpoint.reserve(s.faces.size() * 2);
    auto mid = [&](int a, int b) {
      const std::uint64_t key =
          (static_cast<std::uint64_t>(std::min(a, b)) << 32) | static_cast<std::uint32_t>(std::max(a, b));
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      const int idx = static_cast<int>(s.dirs.size());
      s.dirs.push_back((s.dirs[a] + s.dirs[b]).normalized());
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(s.faces.size() * 4);
    for (const auto& f : s.faces) {
      const int ab = mid(f[0], f[1]);
      const int bc = mid(f[1], f[2]);
      const int ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    s.faces = std::move(next);
  }
  return s;
}

// Reverses every face if the oriented face normal of face 0 disagrees with
// the reference direction, so generated meshes carry the outward convention
// regardless of the handedness of the tangent frame.
void align_winding(ImmersedMesh& mesh, const Vec4& reference_normal) {
  const auto& tri = mesh.faces[0];
  const Vec4& a = mesh.vertices[tri[0]];
  const Vec4& b = mesh.vertices[tri[1]];
  const Vec4& c = mesh.vertices[tri[2]];
  const Vec4 m = (a + b + c).normalized();
  const Vec4 n = cross4(m, b - a, c - a);
  if (n.dot(reference_normal) < 0) {
    for (auto& f : mesh.faces) std::swap(f[1], f[2]);
  }
}

// Graph of r(u) = radius + delta * Y_mode(u) over the distance sphere of `center`.
ImmersedMesh radial_graph(const Vec4& center, double radius, double delta, int mode,
                          int refine) {
  if (std::abs(center.norm() - 1.0) > 1e-12) {
    throw ConfigError("sphere family: center must be a unit vector");
  }
  const DirectionSphere dir = icosphere(refine);
  const auto basis = tangent_basis(center);
  // Profile axis inside the direction sphere; tilted off the basis axes so the
  // perturbation does not align with icosahedral symmetries.
  const Vec3 axis = Vec3(1.0, 1.0, 1.0).normalized();

  ImmersedMesh mesh;
  mesh.vertices.reserve(dir.dirs.size());
  for (const Vec3& u : dir.dirs) {
    const double r = radius + delta * legendre(mode, axis.dot(u));
    const Vec4 t = u[0] * basis[0] + u[1] * basis[1] + u[2] * basis[2];
    mesh.vertices.push_back(std::cos(r) * center + std::sin(r) * t);
  }
  mesh.faces = dir.faces;

  // Outward = direction of increasing distance from the center.
  const auto& tri = mesh.faces[0];
  const Vec4 m =
      (mesh.vertices[tri[0]] + mesh.vertices[tri[1]] + mesh.vertices[tri[2]]).normalized();
  align_winding(mesh, tangent_part(m, Vec4(m - center)));
  return mesh;
}

}  // namespace

ImmersedMesh make_geodesic_sphere(const Vec4& center, double radius, int refine) {
  if (!(radius > 0.0) || !(radius < kPi / 2.0)) {
    throw ConfigError("make_geodesic_sphere: radius must lie in (0, pi/2)");
  }
  ImmersedMesh mesh = radial_graph(center, radius, 0.0, 1, refine);
  mesh.family = GeodesicSphereTag{center, radius};
  return mesh;
}

ImmersedMesh make_perturbed_sphere(const Vec4& center, double radius, double delta,
                                   int mode, int refine) {
  if (delta < 0.0) throw ConfigError("make_perturbed_sphere: delta must be >= 0");
  if (mode < 1) throw ConfigError("make_perturbed_sphere: mode must be >= 1");
  if (!(radius - delta > 0.0) || !(radius + delta < kPi / 2.0)) {
    throw ConfigError("make_perturbed_sphere: radius range [R-delta, R+delta] must lie in (0, pi/2)");
  }
  ImmersedMesh mesh = radial_graph(center, radius, delta, mode, refine);
  mesh.family = PerturbedSphereTag{center, radius, delta, mode};
  return mesh;
}

ImmersedMesh make_clifford_torus(int p, int q, int res_u, int res_v) {
  if (p != 1 || q != 1) {
    throw ConfigError("make_clifford_torus: only p = q = 1 (surfaces in S^3) is supported");
  }
  if (res_u < 3 || res_v < 3) {
    throw ConfigError("make_clifford_torus: grid resolution must be >= 3");
  }
  const double r1 = std::sqrt(0.5);
  const double r2 = std::sqrt(0.5);

  ImmersedMesh mesh;
  mesh.vertices.reserve(static_cast<size_t>(res_u) * res_v);
  for (int i = 0; i < res_u; ++i) {
    const double theta = 2.0 * kPi * i / res_u;
    for (int j = 0; j < res_v; ++j) {
      const double beta = 2.0 * kPi * j / res_v;
      mesh.vertices.push_back(Vec4(r1 * std::cos(theta), r1 * std::sin(theta),
                                   r2 * std::cos(beta), r2 * std::sin(beta)));
    }
  }
  auto at = [res_v](int i, int j) { return i * res_v + j; };
  mesh.faces.reserve(static_cast<size_t>(res_u) * res_v * 2);
  for (int i = 0; i < res_u; ++i) {
    const int i1 = (i + 1) % res_u;
    for (int j = 0; j < res_v; ++j) {
      const int j1 = (j + 1) % res_v;
      const int v00 = at(i, j), v10 = at(i1, j), v11 = at(i1, j1), v01 = at(i, j1);
      mesh.faces.push_back({v00, v10, v11});
      mesh.faces.push_back({v00, v11, v01});
    }
  }
  mesh.family = CliffordTorusTag{p, q, r1, r2};

  // Standard product normal (-r2 u, r1 v) at x = (r1 u, r2 v).
  const auto& tri = mesh.faces[0];
  const Vec4 m =
      (mesh.vertices[tri[0]] + mesh.vertices[tri[1]] + mesh.vertices[tri[2]]).normalized();
  const double nu = std::hypot(m[0], m[1]);
  const double nv = std::hypot(m[2], m[3]);
  align_winding(mesh, Vec4(-r2 * m[0] / nu, -r2 * m[1] / nu, r1 * m[2] / nv, r1 * m[3] / nv));
  return mesh;
}

}  // namespace pinchlab
