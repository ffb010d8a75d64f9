#include "pinchlab/verify.hpp"

#include "pinchlab/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <iterator>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

namespace pinchlab {

namespace {

constexpr double kSphereRadius = kPi / 4.0;
const Vec4 kNorth(0, 0, 0, 1);

std::string fmt(const char* pattern, ...) {
  char buf[1024];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof(buf), pattern, args);
  va_end(args);
  return buf;
}

// Meshes and full analyses reused across criteria within one suite run.
struct SuiteCache {
  std::optional<PinchingReport> sphere5;
  std::optional<PinchingReport> torus96;
  std::optional<ImmersedMesh> sphere5_mesh;
  std::optional<ImmersedMesh> torus96_mesh;

  const ImmersedMesh& sphere_mesh() {
    if (!sphere5_mesh) sphere5_mesh = make_geodesic_sphere(kNorth, kSphereRadius, 5);
    return *sphere5_mesh;
  }
  const ImmersedMesh& torus_mesh() {
    if (!torus96_mesh) torus96_mesh = make_clifford_torus(1, 1, 96, 96);
    return *torus96_mesh;
  }
  const PinchingReport& sphere_report() {
    if (!sphere5) sphere5 = analyze_mesh(sphere_mesh());
    return *sphere5;
  }
  const PinchingReport& torus_report() {
    if (!torus96) torus96 = analyze_mesh(torus_mesh());
    return *torus96;
  }
};

std::vector<Vec4> random_unit_vectors(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Vec4> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    Vec4 v;
    for (int k = 0; k < 4; ++k) v[k] = gauss(rng);
    out.push_back(v.normalized());
  }
  return out;
}

}  // namespace

std::vector<CriterionResult> run_acceptance_suite(const VerifyOptions& opts, std::ostream& log) {
  const double ts = opts.tol_scale;
  SuiteCache cache;

  using Check = std::function<std::pair<bool, std::string>()>;
  std::map<int, std::pair<std::string, Check>> criteria;

  criteria[1] = {"sphere_spectrum", [&]() -> std::pair<bool, std::string> {
    const auto t0 = std::chrono::steady_clock::now();
    const OperatorPair ops = assemble(cache.sphere_mesh());
    const EigenResult eig = first_nonzero_eigenvalue(ops);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double err = std::abs(eig.lambda1 - 4.0) / 4.0;
    const bool ok = err <= 0.01 * ts && secs <= 60.0;
    return {ok, fmt("lambda1 = %.6f (target 4 within 1%%, rel err %.2e), solve %.1fs <= 60s",
                    eig.lambda1, err, secs)};
  }};

  criteria[2] = {"torus_spectrum", [&]() -> std::pair<bool, std::string> {
    const auto t0 = std::chrono::steady_clock::now();
    const OperatorPair ops = assemble(cache.torus_mesh());
    const EigenResult eig = first_nonzero_eigenvalue(ops);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double err = std::abs(eig.lambda1 - 2.0) / 2.0;
    const bool ok = err <= 0.02 * ts && secs <= 120.0;
    return {ok, fmt("lambda1 = %.6f (target 2 within 2%%, rel err %.2e), solve %.1fs <= 120s",
                    eig.lambda1, err, secs)};
  }};

  criteria[3] = {"reilly_equality_and_gap", [&]() -> std::pair<bool, std::string> {
    const PinchingReport& sph = cache.sphere_report();
    const PinchingReport& tor = cache.torus_report();
    const double sph_dev = std::abs(sph.lambda1 - sph.reilly_rhs) / sph.lambda1;
    const double tor_dev = std::abs(tor.lambda1 - tor.reilly_rhs) / tor.lambda1;
    const ImmersedMesh pert = make_perturbed_sphere(kNorth, kSphereRadius, 0.1, 2, 5);
    const PinchingReport prep = analyze_mesh(pert);
    const double gap = prep.reilly_rhs - prep.lambda1;
    const bool ok = sph_dev <= 0.02 * ts && tor_dev <= 0.02 * ts && gap >= 0.01 / ts;
    return {ok, fmt("sphere |l1-rhs|/l1 = %.2e, torus %.2e (<= 2%%); perturbed gap %.4f >= 0.01",
                    sph_dev, tor_dev, gap)};
  }};

  criteria[4] = {"heintze_identity", [&]() -> std::pair<bool, std::string> {
    std::vector<double> sphere_res, torus_res;
    for (int refine : {3, 4, 5}) {
      const ImmersedMesh m = make_geodesic_sphere(kNorth, kSphereRadius, refine);
      const OperatorPair ops = assemble(m);
      const CurvatureField curv = analytic_curvature(m);
      const GravityResult g = center_of_gravity(ops, m, kNorth);
      const PositionFields f = position_fields(m, g.p0, curv);
      sphere_res.push_back(heintze_identity_check(m, f).maxCoeff());
    }
    for (int res : {24, 48, 96}) {
      const ImmersedMesh m = make_clifford_torus(1, 1, res, res);
      const OperatorPair ops = assemble(m);
      const CurvatureField curv = analytic_curvature(m);
      const GravityResult g = center_of_gravity(ops, m, Vec4(1, 0, 0, 0));
      const PositionFields f = position_fields(m, g.p0, curv);
      torus_res.push_back(heintze_identity_check(m, f).maxCoeff());
    }
    const bool small = sphere_res.back() <= 0.05 * ts && torus_res.back() <= 0.05 * ts;
    // On the round sphere the identity holds exactly (residuals at roundoff),
    // so "decreasing" there means staying at the floor.
    auto decreases = [](const std::vector<double>& r) {
      for (size_t i = 1; i < r.size(); ++i) {
        if (!(r[i] < r[i - 1] || r[i] <= 1e-12)) return false;
      }
      return true;
    };
    const bool decreasing = decreases(sphere_res) && decreases(torus_res);
    return {small && decreasing,
            fmt("sphere refine {3,4,5}: %.4f > %.4f > %.4f; torus res {24,48,96}: %.4f > %.4f > "
                "%.4f; finest <= 0.05",
                sphere_res[0], sphere_res[1], sphere_res[2], torus_res[0], torus_res[1],
                torus_res[2])};
  }};

  criteria[5] = {"weak_divergence", [&]() -> std::pair<bool, std::string> {
    const ImmersedMesh m = make_perturbed_sphere(kNorth, kSphereRadius, 0.05, 2, 5);
    const OperatorPair ops = assemble(m);
    const CurvatureField curv = discrete_curvature(m);
    const GravityResult g = center_of_gravity(ops, m, kNorth);
    const PositionFields f = position_fields(m, g.p0, curv);
    const WeakDivergenceResult wd = weak_divergence_check(m, ops, f, curv, 32, opts.seed + 5);
    const bool ok = wd.max_relative <= 0.02 * ts;
    return {ok, fmt("32 weak residuals, max %.4f <= 0.02 (global %.2e)", wd.max_relative,
                    wd.global_relative)};
  }};

  criteria[6] = {"gravity_constancy", [&]() -> std::pair<bool, std::string> {
    const ImmersedMesh& m = cache.torus_mesh();
    const OperatorPair ops = assemble(m);
    const auto probes = random_unit_vectors(50, opts.seed + 6);
    double lo = std::numeric_limits<double>::max(), hi = 0, mean = 0;
    for (const Vec4& p : probes) {
      const double e = gravity_energy(ops, m, p);
      lo = std::min(lo, e);
      hi = std::max(hi, e);
      mean += e;
    }
    mean /= probes.size();
    const double spread = (hi - lo) / mean;
    const double area_dev = std::abs(mean - ops.total_area) / ops.total_area;
    const double exact_dev = std::abs(ops.total_area - 2.0 * kPi * kPi) / (2.0 * kPi * kPi);
    const bool ok = spread <= 0.005 * ts && area_dev <= 0.005 * ts && exact_dev <= 0.005 * ts;
    return {ok, fmt("E spread %.2e <= 0.5%%; mean/area dev %.2e; area vs 2*pi^2 dev %.2e",
                    spread, area_dev, exact_dev)};
  }};

  criteria[7] = {"center_recovery", [&]() -> std::pair<bool, std::string> {
    const ImmersedMesh m = make_geodesic_sphere(kNorth, kSphereRadius, 4);
    const OperatorPair ops = assemble(m);
    const auto inits = random_unit_vectors(10, opts.seed + 7);
    double worst_dist = 0, worst_moment = 0;
    for (const Vec4& init : inits) {
      const GravityResult g = center_of_gravity(ops, m, init, 1e-10, 300);
      worst_dist = std::max(worst_dist, geodesic_distance(g.p0, kNorth));
      const MomentResult mom = moment_residual(ops, m, g.p0);
      worst_moment = std::max(worst_moment, mom.norm / ops.total_area);
    }
    const bool ok = worst_dist <= 1e-8 * ts && worst_moment <= 1e-10 * ts;
    return {ok, fmt("10 random inits: max distance to center %.2e <= 1e-8, max moment/|M| "
                    "%.2e <= 1e-10",
                    worst_dist, worst_moment)};
  }};

  criteria[8] = {"equality_case_pinching", [&]() -> std::pair<bool, std::string> {
    const PinchingReport& r = cache.sphere_report();
    bool lemmas_ok = true;
    for (const auto& e : r.lemma_entries) {
      if (!e.not_applicable && !e.pass) lemmas_ok = false;
    }
    const bool ok = r.eps <= 0.05 * ts && r.psi_inf <= 0.02 * ts && r.chi_inf <= 0.02 * ts &&
                    r.hausdorff <= r.resolution_bound * ts && lemmas_ok && r.starshaped &&
                    r.max_edge_distortion <= 1e-10 * ts;
    return {ok, fmt("eps %.4f <= 0.05, psi_inf %.2e <= 0.02, chi_inf %.2e <= 0.02, d_H %.4f <= "
                    "edge %.4f, lemmas %s, starshaped %s, distortion %.2e <= 1e-10",
                    r.eps, r.psi_inf, r.chi_inf, r.hausdorff, r.resolution_bound,
                    lemmas_ok ? "pass" : "FAIL", r.starshaped ? "pass" : "FAIL",
                    r.max_edge_distortion)};
  }};

  criteria[9] = {"df_bracket", [&]() -> std::pair<bool, std::string> {
    const ImmersedMesh m = make_perturbed_sphere(kNorth, kSphereRadius, 0.05, 2, 5);
    const MeshTopology topo = build_topology(m);
    const OperatorPair ops = assemble(m);
    const CurvatureField curv = discrete_curvature(m);
    const EigenResult eig = first_nonzero_eigenvalue(ops);
    const GravityResult g = center_of_gravity(ops, m, kNorth);
    const PositionFields f = position_fields(m, g.p0, curv);
    const PinchingScalars s = pinching_scalars(ops, f, curv, eig.lambda1, 4.0);
    const ProjectedMesh proj = project_F(m, topo, g.p0, s.R0);
    const DfBracketResult df = df_bracket_check(m, topo, proj, f, s.h, 0.05 * ts);
    const bool ok = df.edges_ok == df.edges_total;
    return {ok, fmt("%d / %d edges inside the two-sided bound (5%% slack), |grad r|_inf %.4f",
                    df.edges_ok, df.edges_total, df.grad_r_inf)};
  }};

  criteria[10] = {"scaling_trend", [&]() -> std::pair<bool, std::string> {
    const SweepResult sweep =
        run_sweep(kNorth, kSphereRadius, 2, 5, {0.1, 0.05, 0.025, 0.0125});
    bool eps_dec = true, dh_dec = true;
    for (size_t i = 1; i < sweep.rows.size(); ++i) {
      eps_dec = eps_dec && sweep.rows[i].eps < sweep.rows[i - 1].eps;
      dh_dec = dh_dec && sweep.rows[i].d_hausdorff < sweep.rows[i - 1].d_hausdorff;
    }
    const bool slope_ok = std::isfinite(sweep.slope_dh_vs_eps) && sweep.slope_dh_vs_eps > 0;
    std::ostringstream rows;
    for (const auto& r : sweep.rows) rows << fmt(" (d=%.4g eps=%.4g dH=%.4g)", r.delta, r.eps, r.d_hausdorff);
    return {eps_dec && dh_dec && slope_ok,
            fmt("eps decreasing %s, d_H decreasing %s, slope %.3f >0 finite;%s",
                eps_dec ? "yes" : "NO", dh_dec ? "yes" : "NO", sweep.slope_dh_vs_eps,
                rows.str().c_str())};
  }};

  criteria[11] = {"torus_optimality", [&]() -> std::pair<bool, std::string> {
    const PinchingReport& r = cache.torus_report();
    const double radius_dev = std::abs(r.R_enclosing - kPi / 2.0);
    const bool radius_ok = radius_dev <= 0.05 * ts;
    const bool genus_ok = r.genus == 1;
    bool chain_na = true;
    for (const auto& e : r.lemma_entries) {
      if (e.name == "tangential_energy_bound" || e.name == "position_energy_lower" ||
          e.name == "position_energy_upper" || e.name == "normal_defect_bound" ||
          e.name == "radial_defect_bound" || e.name == "radius_function_l1_bound") {
        chain_na = chain_na && e.not_applicable;
      }
    }
    const bool verdict_ok = !r.sphere_verdict;
    const bool ok = radius_ok && genus_ok && chain_na && verdict_ok;
    return {ok,
            fmt("enclosing radius %.4f vs pi/2 (|dev| %.4f <= 0.05: %s; measured circumradius "
                "of the torus is 3*pi/4), genus %d (=1: %s), estimate chain not_applicable: %s, "
                "no sphere verdict: %s",
                r.R_enclosing, radius_dev, radius_ok ? "yes" : "NO", r.genus,
                genus_ok ? "yes" : "NO", chain_na ? "yes" : "NO", verdict_ok ? "yes" : "NO")};
  }};

  criteria[12] = {"norm_monotonicity", [&]() -> std::pair<bool, std::string> {
    const std::vector<ImmersedMesh> meshes = {
        make_geodesic_sphere(kNorth, kSphereRadius, 3),
        make_clifford_torus(1, 1, 32, 32),
        make_perturbed_sphere(kNorth, kSphereRadius, 0.05, 2, 3)};
    const double pgrid[] = {1, 1.5, 2, 3, 4, 8, 16, 64,
                            std::numeric_limits<double>::infinity()};
    std::mt19937_64 rng(opts.seed + 12);
    std::normal_distribution<double> gauss(0.0, 1.0);
    int violations = 0, checked = 0;
    double p64_vs_inf = 0;
    for (const auto& m : meshes) {
      const OperatorPair ops = assemble(m);
      for (int t = 0; t < 200; ++t) {
        ScalarField f(m.vertex_count());
        for (int v = 0; v < m.vertex_count(); ++v) f[v] = gauss(rng);
        double prev = lp_norm(ops, f, pgrid[0]);
        for (size_t k = 1; k < std::size(pgrid); ++k) {
          const double cur = lp_norm(ops, f, pgrid[k]);
          ++checked;
          if (prev > cur + 1e-12) ++violations;
          if (std::isinf(pgrid[k])) {
            p64_vs_inf = std::max(p64_vs_inf, std::abs(prev - cur) / cur);
          }
          prev = cur;
        }
      }
    }
    return {violations == 0, fmt("%d ordered-norm comparisons over 600 fields, %d violations "
                                 "beyond 1e-12 (p=64 vs inf gap %.3f)",
                                 checked, violations, p64_vs_inf)};
  }};

  std::vector<CriterionResult> results;
  for (const auto& [id, named] : criteria) {
    if (!opts.only.empty() &&
        std::find(opts.only.begin(), opts.only.end(), id) == opts.only.end()) {
      continue;
    }
    CriterionResult res;
    res.id = id;
    res.name = named.first;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      auto [pass, detail] = named.second();
      res.pass = pass;
      res.detail = detail;
    } catch (const std::exception& e) {
      res.pass = false;
      res.detail = std::string("exception: ") + e.what();
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    log << (res.pass ? "[PASS] " : "[FAIL] ") << res.id << " " << res.name << ": "
        << res.detail << fmt(" (%.1fs)", res.seconds) << "\n";
    log.flush();
    results.push_back(res);
  }
  return results;
}

}  // namespace pinchlab
