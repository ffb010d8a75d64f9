#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pinchlab/errors.hpp"
#include "pinchlab/mesh.hpp"
#include "pinchlab/spectral.hpp"

#include <cmath>
#include <random>

using namespace pinchlab;

namespace {
const Vec4 kNorth(0, 0, 0, 1);
const double kR = kPi / 4;
}  // namespace

TEST_CASE("sphere spectrum: lambda1 = 2 / sin^2(R)") {
  // Closed form: the induced metric is a round 2-sphere of radius sin(R),
  // whose first nonzero eigenvalue is 2 / sin^2(R) = 4 at R = pi/4.
  const OperatorPair ops = assemble(make_geodesic_sphere(kNorth, kR, 4));
  const EigenResult eig = first_nonzero_eigenvalue(ops);
  CHECK(eig.lambda1 == doctest::Approx(4.0).epsilon(0.01));
  CHECK(eig.residual <= 1e-9);
  CHECK(eig.lambda1 > 0);

  // Deflation: the eigenvector is mass-orthogonal to constants.
  const ScalarField ones = ScalarField::Ones(ops.mass.rows());
  const double against_const = std::abs(ones.dot(ops.mass * eig.eigenvector));
  CHECK(against_const <= 1e-8 * std::sqrt(ops.total_area));
}

TEST_CASE("torus spectrum: lambda1 = 2") {
  const OperatorPair ops = assemble(make_clifford_torus(1, 1, 48, 48));
  const EigenResult eig = first_nonzero_eigenvalue(ops);
  CHECK(eig.lambda1 == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("solver determinism and seed independence of the limit") {
  const OperatorPair ops = assemble(make_geodesic_sphere(kNorth, kR, 3));
  const EigenResult a = first_nonzero_eigenvalue(ops);
  const EigenResult b = first_nonzero_eigenvalue(ops);
  CHECK(a.lambda1 == b.lambda1);  // bitwise
  CHECK((a.eigenvector - b.eigenvector).cwiseAbs().maxCoeff() == 0.0);

  EigenOptions other;
  other.seed = 999;
  const EigenResult c = first_nonzero_eigenvalue(ops, other);
  CHECK(std::abs(a.lambda1 - c.lambda1) < 1e-7);
}

TEST_CASE("eigenvalue convergence order under refinement is >= 1.5") {
  double err[3], h[3];
  int k = 0;
  for (int refine : {2, 3, 4}) {
    const ImmersedMesh m = make_geodesic_sphere(kNorth, kR, refine);
    const MeshTopology topo = build_topology(m);
    const OperatorPair ops = assemble(m);
    err[k] = std::abs(first_nonzero_eigenvalue(ops).lambda1 - 4.0);
    h[k] = topo.max_edge_length;
    ++k;
  }
  for (int i = 1; i < 3; ++i) {
    const double order = std::log(err[i - 1] / err[i]) / std::log(h[i - 1] / h[i]);
    CHECK(order >= 1.5);
  }
}

TEST_CASE("consistent mass option also recovers the spectrum") {
  const OperatorPair ops = assemble(make_geodesic_sphere(kNorth, kR, 3), MassType::Consistent);
  const EigenResult eig = first_nonzero_eigenvalue(ops);
  CHECK(eig.lambda1 == doctest::Approx(4.0).epsilon(0.01));
}

TEST_CASE("rayleigh quotient: definition, minimization property, coordinates") {
  const ImmersedMesh m = make_geodesic_sphere(kNorth, kR, 3);
  const OperatorPair ops = assemble(m);
  const EigenResult eig = first_nonzero_eigenvalue(ops);

  CHECK(rayleigh_quotient(ops, eig.eigenvector) ==
        doctest::Approx(eig.lambda1).epsilon(1e-9));

  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0, 1);
  for (int t = 0; t < 100; ++t) {
    ScalarField f(m.vertex_count());
    for (int v = 0; v < m.vertex_count(); ++v) f[v] = g(rng);
    CHECK(rayleigh_quotient(ops, f) >= eig.lambda1 - 1e-9);
  }

  // The tangent-coordinate test functions are first eigenfunctions of the
  // round sphere, so their quotients sit at lambda1 (and never below).
  const auto basis = tangent_basis(kNorth);
  for (const Vec4& b : basis) {
    ScalarField f(m.vertex_count());
    for (int v = 0; v < m.vertex_count(); ++v) f[v] = m.vertices[v].dot(b);
    const double q = rayleigh_quotient(ops, f);
    CHECK(q >= eig.lambda1 - 1e-9);
    CHECK(q == doctest::Approx(4.0).epsilon(0.01));
  }
}

TEST_CASE("constant fields are rejected") {
  const OperatorPair ops = assemble(make_geodesic_sphere(kNorth, kR, 2));
  CHECK_THROWS_AS(rayleigh_quotient(ops, ScalarField::Constant(ops.mass.rows(), 3.0)),
                  ConfigError);
}

TEST_CASE("non-convergence carries the best Ritz data") {
  const OperatorPair ops = assemble(make_geodesic_sphere(kNorth, kR, 3));
  EigenOptions opts;
  opts.max_iter = 1;
  opts.tol = 1e-15;
  try {
    (void)first_nonzero_eigenvalue(ops, opts);
    FAIL("expected a convergence failure");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("Ritz") != std::string::npos);
  }
}

TEST_CASE("rectangular torus grids are handled too") {
  const OperatorPair ops = assemble(make_clifford_torus(1, 1, 40, 56));
  const EigenResult eig = first_nonzero_eigenvalue(ops);
  CHECK(eig.lambda1 == doctest::Approx(2.0).epsilon(0.02));
}
