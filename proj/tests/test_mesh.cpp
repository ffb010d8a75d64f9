#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pinchlab/errors.hpp"
#include "pinchlab/mesh.hpp"
#include "pinchlab/operators.hpp"

#include <cmath>
#include <sstream>

using namespace pinchlab;

namespace {
const Vec4 kNorth(0, 0, 0, 1);
const double kR = kPi / 4;
}  // namespace

TEST_CASE("icosahedral base sphere: 12 vertices, 20 faces, exact radius") {
  const ImmersedMesh m = make_geodesic_sphere(kNorth, kR, 0);
  CHECK(m.vertex_count() == 12);
  CHECK(m.face_count() == 20);
  for (const auto& v : m.vertices) {
    CHECK(std::abs(geodesic_distance(kNorth, v) - kR) < 1e-12);
    CHECK(std::abs(v.norm() - 1.0) < 1e-14);
  }
  const MeshTopology topo = build_topology(m);
  CHECK(topo.euler_characteristic == 2);
  CHECK(topo.genus == 0);
}

TEST_CASE("refined spheres stay on the distance sphere and stay valid") {
  for (int refine : {1, 2, 3}) {
    const ImmersedMesh m = make_geodesic_sphere(kNorth, kR, refine);
    CHECK(m.vertex_count() == 10 * (1 << (2 * refine)) + 2);
    CHECK(m.face_count() == 20 * (1 << (2 * refine)));
    const MeshTopology topo = build_topology(m);
    CHECK(topo.genus == 0);
    for (const auto& v : m.vertices) {
      CHECK(std::abs(geodesic_distance(kNorth, v) - kR) < 1e-12);
    }
  }
}

TEST_CASE("sphere radius domain errors") {
  CHECK_THROWS_AS(make_geodesic_sphere(kNorth, 0.0, 1), ConfigError);
  CHECK_THROWS_AS(make_geodesic_sphere(kNorth, kPi / 2, 1), ConfigError);
  CHECK_THROWS_AS(make_geodesic_sphere(kNorth, -0.5, 1), ConfigError);
}

TEST_CASE("discrete sphere area converges to 4 pi sin^2(R) at order >= 1.8") {
  // Closed form: the distance sphere of radius R is a round 2-sphere of
  // radius sin(R), so its area is 4 pi sin^2(R) = 2 pi at R = pi/4.
  const double exact = 4.0 * kPi * std::sin(kR) * std::sin(kR);
  double prev_err = 0, prev_h = 0;
  double min_order = 10;
  for (int refine : {2, 3, 4}) {
    const ImmersedMesh m = make_geodesic_sphere(kNorth, kR, refine);
    const MeshTopology topo = build_topology(m);
    const OperatorPair ops = assemble(m);
    const double err = std::abs(ops.total_area - exact);
    if (refine > 2) {
      const double order = std::log(prev_err / err) / std::log(prev_h / topo.max_edge_length);
      min_order = std::min(min_order, order);
    }
    prev_err = err;
    prev_h = topo.max_edge_length;
  }
  CHECK(min_order >= 1.8);
  // refine = 4 lands within 0.5% of the closed form.
  const OperatorPair ops = assemble(make_geodesic_sphere(kNorth, kR, 4));
  CHECK(std::abs(ops.total_area - exact) / exact < 0.005);
}

TEST_CASE("mirrored centers produce exactly negated meshes") {
  const Vec4 c = Vec4(0.3, -0.4, 0.2, 0.8).normalized();
  const ImmersedMesh a = make_geodesic_sphere(c, kR, 2);
  const ImmersedMesh b = make_geodesic_sphere(Vec4(-c), kR, 2);
  REQUIRE(a.vertex_count() == b.vertex_count());
  for (int v = 0; v < a.vertex_count(); ++v) {
    CHECK((a.vertices[v] + b.vertices[v]).norm() == 0.0);  // bitwise negation
  }
  CHECK(a.faces == b.faces);
}

TEST_CASE("clifford torus: grid counts, unit vertices, genus 1") {
  const ImmersedMesh tiny = make_clifford_torus(1, 1, 3, 3);
  CHECK(tiny.vertex_count() == 9);
  CHECK(tiny.face_count() == 18);
  const MeshTopology topo = build_topology(tiny);
  CHECK(topo.euler_characteristic == 0);
  CHECK(topo.genus == 1);
  for (const auto& v : tiny.vertices) {
    CHECK(std::abs(v.norm() - 1.0) < 1e-14);  // r1^2 + r2^2 = 1
  }
}

TEST_CASE("clifford torus area converges to 2 pi^2") {
  // Product of circumferences: (2 pi r1)(2 pi r2) with r1 = r2 = 1/sqrt(2).
  const double exact = 2.0 * kPi * kPi;
  double prev = 1e9;
  for (int res : {16, 32, 64}) {
    const OperatorPair ops = assemble(make_clifford_torus(1, 1, res, res));
    const double err = std::abs(ops.total_area - exact);
    CHECK(err < prev);
    prev = err;
  }
  const OperatorPair ops = assemble(make_clifford_torus(1, 1, 64, 64));
  CHECK(std::abs(ops.total_area - exact) / exact < 0.005);
}

TEST_CASE("clifford torus rejects unsupported dimensions and tiny grids") {
  CHECK_THROWS_AS(make_clifford_torus(2, 1, 16, 16), ConfigError);
  CHECK_THROWS_AS(make_clifford_torus(1, 2, 16, 16), ConfigError);
  CHECK_THROWS_AS(make_clifford_torus(1, 1, 2, 16), ConfigError);
}

TEST_CASE("perturbed sphere with delta = 0 is bitwise the geodesic sphere") {
  const ImmersedMesh a = make_geodesic_sphere(kNorth, kR, 3);
  const ImmersedMesh b = make_perturbed_sphere(kNorth, kR, 0.0, 2, 3);
  REQUIRE(a.vertex_count() == b.vertex_count());
  for (int v = 0; v < a.vertex_count(); ++v) {
    CHECK(a.vertices[v] == b.vertices[v]);
  }
  CHECK(a.faces == b.faces);
}

TEST_CASE("perturbed sphere stays inside [R - delta, R + delta]") {
  const double delta = 0.05;
  const ImmersedMesh m = make_perturbed_sphere(kNorth, kR, delta, 2, 4);
  double lo = 10, hi = 0;
  for (const auto& v : m.vertices) {
    const double r = geodesic_distance(kNorth, v);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  CHECK(lo >= kR - delta - 1e-12);
  CHECK(hi <= kR + delta + 1e-12);
  CHECK(hi - lo > delta);  // the profile actually varies
  validate_mesh(m);
}

TEST_CASE("perturbed sphere domain errors") {
  CHECK_THROWS_AS(make_perturbed_sphere(kNorth, kR, -0.1, 2, 3), ConfigError);
  CHECK_THROWS_AS(make_perturbed_sphere(kNorth, kR, kR, 2, 3), ConfigError);
  CHECK_THROWS_AS(make_perturbed_sphere(kNorth, 0.8, 0.8, 2, 3), ConfigError);
  CHECK_THROWS_AS(make_perturbed_sphere(kNorth, kR, 0.05, 0, 3), ConfigError);
}

TEST_CASE("validation rejects broken meshes") {
  ImmersedMesh m = make_geodesic_sphere(kNorth, kR, 1);

  SUBCASE("bad index") {
    m.faces[0][0] = 9999;
    CHECK_THROWS_AS(validate_mesh(m), MeshError);
  }
  SUBCASE("repeated vertex in a face") {
    m.faces[0][1] = m.faces[0][0];
    CHECK_THROWS_AS(validate_mesh(m), MeshError);
  }
  SUBCASE("flipped face breaks orientation") {
    std::swap(m.faces[0][0], m.faces[0][1]);
    CHECK_THROWS_AS(validate_mesh(m), MeshError);
  }
  SUBCASE("missing face leaves a boundary") {
    m.faces.pop_back();
    CHECK_THROWS_AS(validate_mesh(m), MeshError);
  }
  SUBCASE("off-sphere vertex") {
    m.vertices[3] *= 1.0 + 1e-6;
    CHECK_THROWS_AS(validate_mesh(m), MeshError);
  }
}

TEST_CASE("s4off round trip is exact") {
  const ImmersedMesh m = make_perturbed_sphere(kNorth, kR, 0.03, 3, 2);
  std::stringstream ss;
  write_s4off(m, ss);
  const ImmersedMesh back = read_s4off(ss);
  REQUIRE(back.vertex_count() == m.vertex_count());
  REQUIRE(back.face_count() == m.face_count());
  for (int v = 0; v < m.vertex_count(); ++v) {
    CHECK((back.vertices[v] - m.vertices[v].normalized()).norm() == 0.0);
  }
  CHECK(back.faces == m.faces);
  CHECK(family_name(back.family) == "untagged");
}

TEST_CASE("s4off reader rejects malformed input") {
  const ImmersedMesh m = make_geodesic_sphere(kNorth, kR, 0);
  std::stringstream good;
  write_s4off(m, good);
  const std::string text = good.str();

  SUBCASE("wrong magic") {
    std::stringstream ss("OFF\n3 1\n");
    CHECK_THROWS_AS(read_s4off(ss), IoError);
  }
  SUBCASE("truncated vertices") {
    std::stringstream ss(text.substr(0, text.size() / 2));
    CHECK_THROWS_AS(read_s4off(ss), IoError);
  }
  SUBCASE("trailing garbage") {
    std::stringstream ss(text + "junk\n");
    CHECK_THROWS_AS(read_s4off(ss), IoError);
  }
  SUBCASE("invariants enforced on read") {
    std::string bad = text;
    const size_t last_face = bad.rfind("\n3 ");
    REQUIRE(last_face != std::string::npos);
    bad.replace(last_face, bad.size() - last_face, "\n3 0 0 0\n");  // repeated vertex
    std::stringstream ss(bad);
    CHECK_THROWS_AS(read_s4off(ss), IoError);
  }
}

TEST_CASE("rotation keeps meshes valid and congruent") {
  Mat4 Q = Mat4::Identity();
  // A rotation mixing all four coordinates.
  const double a = 0.7, b = 1.2;
  Q(0, 0) = std::cos(a); Q(0, 1) = -std::sin(a);
  Q(1, 0) = std::sin(a); Q(1, 1) = std::cos(a);
  Q(2, 2) = std::cos(b); Q(2, 3) = -std::sin(b);
  Q(3, 2) = std::sin(b); Q(3, 3) = std::cos(b);

  const ImmersedMesh m = make_geodesic_sphere(kNorth, kR, 2);
  const ImmersedMesh r = rotate_mesh(m, Q);
  validate_mesh(r);
  const auto* tag = std::get_if<GeodesicSphereTag>(&r.family);
  REQUIRE(tag != nullptr);
  for (const auto& v : r.vertices) {
    CHECK(std::abs(geodesic_distance(tag->center, v) - kR) < 1e-12);
  }
  // Edge lengths are preserved.
  const OperatorPair a1 = assemble(m), a2 = assemble(r);
  CHECK(a1.total_area == doctest::Approx(a2.total_area).epsilon(1e-12));
}
