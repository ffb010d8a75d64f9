#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pinchlab/barycenter.hpp"
#include "pinchlab/errors.hpp"
#include "pinchlab/mesh.hpp"

#include <cmath>
#include <random>

using namespace pinchlab;

namespace {

const Vec4 kNorth(0, 0, 0, 1);
const double kR = kPi / 4;

std::mt19937_64 rng(2024);

Vec4 random_unit() {
  std::normal_distribution<double> g(0, 1);
  Vec4 v;
  for (int i = 0; i < 4; ++i) v[i] = g(rng);
  return v.normalized();
}

}  // namespace

TEST_CASE("gravity energy closed forms on the distance sphere") {
  const ImmersedMesh m = make_geodesic_sphere(kNorth, kR, 3);
  const OperatorPair ops = assemble(m);
  // r is constant: E(center) = (1 - cos R) |M|.
  CHECK(gravity_energy(ops, m, kNorth) ==
        doctest::Approx((1.0 - std::cos(kR)) * ops.total_area).epsilon(1e-12));
  // Antipodal probe: d(-p0, x) = pi - R.
  CHECK(gravity_energy(ops, m, Vec4(-kNorth)) ==
        doctest::Approx((1.0 + std::cos(kR)) * ops.total_area).epsilon(1e-12));
}

TEST_CASE("gravity energy is constant on the clifford torus") {
  const ImmersedMesh m = make_clifford_torus(1, 1, 32, 32);
  const OperatorPair ops = assemble(m);
  double lo = 1e300, hi = 0;
  for (int t = 0; t < 50; ++t) {
    const double e = gravity_energy(ops, m, random_unit());
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  CHECK((hi - lo) / lo < 0.005);
  CHECK(lo == doctest::Approx(ops.total_area).epsilon(0.005));
}

TEST_CASE("center recovery on the sphere from random starts") {
  const ImmersedMesh m = make_geodesic_sphere(kNorth, kR, 3);
  const OperatorPair ops = assemble(m);
  for (int t = 0; t < 5; ++t) {
    const GravityResult g = center_of_gravity(ops, m, random_unit(), 1e-10, 300);
    CHECK(geodesic_distance(g.p0, kNorth) < 1e-8);
    CHECK(g.moment_residual <= 1e-10);
    CHECK(!g.flat_flag);
    CHECK(g.energy ==
          doctest::Approx((1.0 - std::cos(kR)) * ops.total_area).epsilon(1e-9));
  }
}

TEST_CASE("torus: flat landscape, any point is a critical point") {
  const ImmersedMesh m = make_clifford_torus(1, 1, 32, 32);
  const OperatorPair ops = assemble(m);
  const GravityResult g = center_of_gravity(ops, m, random_unit(), 1e-10, 300);
  CHECK(g.flat_flag);
  CHECK(g.moment_residual <= 1e-9);  // 10x the tolerance per the contract
  const MomentResult mom = moment_residual(ops, m, g.p0);
  CHECK(mom.norm <= 1e-9 * ops.total_area);
}

TEST_CASE("moment residual vanishes at the symmetric center") {
  const ImmersedMesh m = make_geodesic_sphere(kNorth, kR, 3);
  const OperatorPair ops = assemble(m);
  const MomentResult mom = moment_residual(ops, m, kNorth);
  CHECK(mom.norm <= 1e-10);
  CHECK(mom.excluded.empty());
  // All four ambient coordinate moments vanish.
  for (int i = 0; i < 4; ++i) CHECK(std::abs(mom.moments[i]) <= 1e-10);
}

TEST_CASE("moment grows monotonically along a geodesic leaving the center") {
  const ImmersedMesh m = make_geodesic_sphere(kNorth, kR, 3);
  const OperatorPair ops = assemble(m);
  const Vec4 dir = tangent_basis(kNorth)[1];
  double prev = moment_residual(ops, m, kNorth).norm;
  for (double t = 0.05; t <= 0.5; t += 0.05) {
    const double cur = moment_residual(ops, m, sphere_exp(kNorth, t * dir)).norm;
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("finite differences of the energy match the moment field") {
  // <grad E(p), u> by central differences equals -|M| <m(p), u>.
  const ImmersedMesh m = make_perturbed_sphere(kNorth, kR, 0.06, 2, 2);
  const OperatorPair ops = assemble(m);
  const double step = 1e-5;
  for (int t = 0; t < 20; ++t) {
    const Vec4 p = random_unit();
    Vec4 u = tangent_part(p, random_unit());
    if (u.norm() < 1e-6) continue;
    u.normalize();
    const double fd = (gravity_energy(ops, m, sphere_exp(p, step * u)) -
                       gravity_energy(ops, m, sphere_exp(p, -step * u))) /
                      (2 * step);
    const double analytic = -moment_residual(ops, m, p).moments.dot(u);
    CHECK(fd == doctest::Approx(analytic).epsilon(1e-6));
  }
}

TEST_CASE("equivariance under ambient rotations") {
  Mat4 Q = Mat4::Identity();
  const double a = 0.9, b = 0.4;
  Q(0, 0) = std::cos(a); Q(0, 2) = -std::sin(a);
  Q(2, 0) = std::sin(a); Q(2, 2) = std::cos(a);
  Q(1, 1) = std::cos(b); Q(1, 3) = -std::sin(b);
  Q(3, 1) = std::sin(b); Q(3, 3) = std::cos(b);

  const ImmersedMesh m = make_perturbed_sphere(kNorth, kR, 0.05, 2, 2);
  const ImmersedMesh rm = rotate_mesh(m, Q);
  const OperatorPair ops = assemble(m);
  const OperatorPair rops = assemble(rm);
  const Vec4 init = random_unit();
  const GravityResult g = center_of_gravity(ops, m, init);
  const GravityResult rg = center_of_gravity(rops, rm, Vec4(Q * init));
  CHECK(geodesic_distance(rg.p0, Vec4(Q * g.p0)) < 1e-7);
}

TEST_CASE("antipodal vertices are excluded from the moment with a flag") {
  const ImmersedMesh m = make_clifford_torus(1, 1, 16, 16);
  const OperatorPair ops = assemble(m);
  const MomentResult mom = moment_residual(ops, m, Vec4(-m.vertices[7]));
  CHECK(mom.excluded.size() == 1);
  CHECK(mom.excluded[0] == 7);
}

TEST_CASE("iteration budget violations raise with diagnostics") {
  const ImmersedMesh m = make_geodesic_sphere(kNorth, kR, 2);
  const OperatorPair ops = assemble(m);
  const Vec4 far = tangent_basis(kNorth)[0];
  CHECK_THROWS_AS(center_of_gravity(ops, m, far, 1e-10, 0), NumericError);
  CHECK_THROWS_AS(center_of_gravity(ops, m, far, -1.0, 10), ConfigError);
}
