#pragma once

#include "pinchlab/curvature.hpp"
#include "pinchlab/mesh.hpp"
#include "pinchlab/operators.hpp"
#include "pinchlab/position_fields.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pinchlab {

struct LemmaEntry {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  bool pass = false;
  bool not_applicable = false;
  std::string reason;  // set when not_applicable
};

// Scalar summary of the pinching analysis. All L^p norms are normalized by
// the total area.
struct PinchingScalars {
  double lambda1 = 0;
  double H_inf = 0, H_2 = 0, B_q = 0, q = 4;
  double h = 0;              // sqrt(1 + |H|_inf^2)
  double beta = 0;           // cot(R_enclosing); negative once R_enclosing > pi/2
  double eps = 0;            // max(0, n (1 + |H|_inf^2) - lambda1)
  bool eps_clamped = false;
  double R_enclosing = 0;    // max vertex distance from the basepoint
  double R0 = 0;             // arcsin(1/h)
  double area = 0;
  double A = 0;              // area^(1/n) (1 + |B|_q)
  double reilly_rhs = 0;     // n (1 + |H|_2^2)
  double X2sq = 0, Xt2sq = 0;      // normalized squared L^2 norms of X, X_tan
  double X_inf = 0, Xt_inf = 0;
  double psi_1 = 0, psi_inf = 0;   // psi = |X|^(1/2) | |X| - 1/h |
};

PinchingScalars pinching_scalars(const OperatorPair& ops, const PositionFields& fields,
                                 const CurvatureField& curv, double lambda1, double q);

// Pointwise residual of sum_i |grad((sin r / r) x_i)|^2 = n - |X_tan|^2, with
// piecewise-linear face gradients averaged onto vertices.
ScalarField heintze_identity_check(const ImmersedMesh& mesh, const PositionFields& fields);

struct WeakDivergenceResult {
  std::vector<double> relative;  // one per test function
  double max_relative = 0;
  double global_relative = 0;    // phi == 1 case, |∫(n cos r - n H <X,nu>)| / |M|
};

// Weak form of div(X_tan) = n cos r - n H <X, nu> against smooth random
// combinations of the hat basis. Residuals are reported relative to
// n * ||phi||_{L^2(M)}.
WeakDivergenceResult weak_divergence_check(const ImmersedMesh& mesh, const OperatorPair& ops,
                                           const PositionFields& fields,
                                           const CurvatureField& curv, int count = 32,
                                           std::uint64_t seed = 777);

// The L^2 inequality chain. Entries with failed preconditions (beta <= 0, or
// eps > beta^2 for the estimate lemmas) are marked not_applicable.
std::vector<LemmaEntry> inequality_chain(const OperatorPair& ops, const PositionFields& fields,
                                         const CurvatureField& curv,
                                         const PinchingScalars& scal, double rel_tol);

struct ReillyResult {
  double lambda1 = 0;
  double rhs = 0;  // n (1 + |H|_2^2)
  bool pass = false;
};
ReillyResult reilly_check(double lambda1, const PinchingScalars& scal, double rel_tol);

struct ProjectedMesh {
  std::vector<Vec4> images;          // on S(p0, R0) by construction
  std::vector<char> jacobian_ok;     // per face: non-degenerate, orientation-consistent
  ScalarField edge_distortion;       // |d2(F a, F b) - d1(a, b)| per topology edge
  int faces_ok = 0;
  double max_distortion = 0;
};

// Radial projection x -> exp_{p0}(R0 * Y/|Y|), Y = exp^-1_{p0}(x). Distances
// are measured at edge scale with great-circle lengths on both sides.
ProjectedMesh project_F(const ImmersedMesh& mesh, const MeshTopology& topo, const Vec4& p0,
                        double R0);

struct DfBracketResult {
  int edges_total = 0;
  int edges_ok = 0;
  double fraction_ok = 0;
  double grad_r_inf = 0;  // |grad r|_inf = max |X_tan| / |X|
};

// Two-sided differential bound: every edge ratio d2/d1 must lie inside
// [sqrt(1 - |grad r|_inf^2) / (h sin r), 1 / (h sin r)] within `slack`.
DfBracketResult df_bracket_check(const ImmersedMesh& mesh, const MeshTopology& topo,
                                 const ProjectedMesh& proj, const PositionFields& fields,
                                 double h, double slack = 0.05);

struct HausdorffResult {
  double d_h = 0;
  double mesh_to_model = 0;   // max_v |r(v) - R0| (exact point-to-sphere distance)
  double model_to_mesh = 0;   // max over model samples of min distance to vertices
  double resolution_bound = 0;  // max mesh edge length (sampling error cap)
  int samples = 0;
};

HausdorffResult hausdorff_distance(const ImmersedMesh& mesh, const MeshTopology& topo,
                                   const Vec4& p0, double R0, int sphere_samples);

struct StarshapedResult {
  double min_X_normal = 0;
  bool pass = false;
};
StarshapedResult starshaped_check(const PositionFields& fields);

struct RadiusPinchResult {
  double max_X_dev = 0;  // max | |X| - 1/h |
  double max_r_dev = 0;  // max | r - R0 |
};
RadiusPinchResult radius_pinching_check(const PositionFields& fields, double h, double R0);

// |X_tan|_infinity over vertices.
double chi_infinity(const PositionFields& fields);

}  // namespace pinchlab
