#include "pinchlab/pipeline.hpp"

#include "pinchlab/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

namespace pinchlab {

namespace {

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Least-squares slope of log(y) against log(x) over rows with positive data.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y, int& used) {
  std::vector<double> lx, ly;
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 1e-9 && y[i] > 1e-14) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  used = static_cast<int>(lx.size());
  if (used < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0, my = 0;
  for (int i = 0; i < used; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= used;
  my /= used;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < used; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  return sxx > 0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

PinchingReport analyze_mesh(const ImmersedMesh& mesh, const AnalyzeOptions& opts) {
  if (!(opts.q > mesh.dimension())) {
    throw ConfigError("analyze: q must exceed the hypersurface dimension n = 2");
  }
  if (!(opts.report_tol > 0) || !(opts.eig_tol > 0) || !(opts.gravity_tol > 0)) {
    throw ConfigError("analyze: tolerances must be positive");
  }

  const MeshTopology topo = build_topology(mesh);
  const OperatorPair ops = assemble(mesh, opts.mass);

  const bool closed_form = std::holds_alternative<GeodesicSphereTag>(mesh.family) ||
                           std::holds_alternative<CliffordTorusTag>(mesh.family);
  const CurvatureField curv =
      closed_form ? analytic_curvature(mesh) : discrete_curvature(mesh);

  EigenOptions eopts;
  eopts.tol = opts.eig_tol;
  eopts.max_iter = opts.eig_max_iter;
  eopts.seed = opts.seed;
  const EigenResult eig = first_nonzero_eigenvalue(ops, eopts);

  // Basepoint: descend from the area-weighted centroid direction; fall back to
  // a fixed axis when the centroid degenerates (balanced surfaces).
  Vec4 centroid = Vec4::Zero();
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    centroid += ops.vertex_weights[v] * mesh.vertices[v];
  }
  const Vec4 init = centroid.norm() > 1e-8 * ops.total_area
                        ? Vec4(centroid.normalized())
                        : Vec4(1, 0, 0, 0);
  const GravityResult gravity =
      center_of_gravity(ops, mesh, init, opts.gravity_tol, opts.gravity_max_iter);

  const PositionFields fields = position_fields(mesh, gravity.p0, curv);
  const PinchingScalars scal = pinching_scalars(ops, fields, curv, eig.lambda1, opts.q);

  PinchingReport rep;
  rep.family = family_name(mesh.family);
  rep.vertex_count = mesh.vertex_count();
  rep.face_count = mesh.face_count();
  rep.euler_characteristic = topo.euler_characteristic;
  rep.genus = topo.genus;
  rep.curvature_source = curv.source == CurvatureSource::Analytic ? "analytic" : "discrete";
  rep.mass_type = opts.mass == MassType::Lumped ? "lumped" : "consistent";
  rep.area = ops.total_area;
  rep.lambda1 = eig.lambda1;
  rep.eig_residual = eig.residual;
  rep.eig_iterations = eig.iterations;
  rep.H_inf = scal.H_inf;
  rep.H_2 = scal.H_2;
  rep.B_q = scal.B_q;
  rep.q = opts.q;
  rep.h = scal.h;
  rep.beta = scal.beta;
  rep.eps = scal.eps;
  rep.eps_clamped = scal.eps_clamped;
  rep.R_enclosing = scal.R_enclosing;
  rep.R0 = scal.R0;
  rep.A = scal.A;
  rep.reilly_rhs = scal.reilly_rhs;
  rep.p0 = gravity.p0;
  rep.gravity_energy_value = gravity.energy;
  rep.moment_residual_norm = gravity.moment_residual;
  rep.gravity_iterations = gravity.iterations;
  rep.flat_flag = gravity.flat_flag;
  rep.report_tol = opts.report_tol;

  rep.heintze_max_residual = heintze_identity_check(mesh, fields).maxCoeff();

  const WeakDivergenceResult wd =
      weak_divergence_check(mesh, ops, fields, curv, opts.weak_div_count, opts.seed + 1);
  rep.weak_div_max_rel = wd.max_relative;
  rep.weak_div_global_rel = wd.global_relative;

  rep.lemma_entries = inequality_chain(ops, fields, curv, scal, opts.report_tol);
  {
    LemmaEntry jx;
    jx.name = "jorge_xavier";
    jx.lhs = scal.beta;
    jx.rhs = scal.H_inf;
    if (scal.beta > 0) {
      jx.pass = scal.H_inf >= scal.beta - opts.report_tol * std::abs(scal.beta) - 1e-12;
    } else {
      jx.not_applicable = true;
      jx.reason = "enclosing radius >= pi/2 (beta <= 0)";
    }
    rep.lemma_entries.push_back(jx);
  }

  const ProjectedMesh proj = project_F(mesh, topo, gravity.p0, scal.R0);
  rep.max_edge_distortion = proj.max_distortion;
  rep.jacobian_ok_fraction =
      mesh.face_count() ? static_cast<double>(proj.faces_ok) / mesh.face_count() : 0.0;
  rep.local_diffeo = proj.faces_ok == mesh.face_count();

  const DfBracketResult df = df_bracket_check(mesh, topo, proj, fields, scal.h);
  rep.df_bracket_fraction = df.fraction_ok;
  rep.grad_r_inf = df.grad_r_inf;

  const int samples =
      opts.sphere_samples > 0 ? opts.sphere_samples : 10 * mesh.vertex_count();
  const HausdorffResult hd = hausdorff_distance(mesh, topo, gravity.p0, scal.R0, samples);
  rep.hausdorff = hd.d_h;
  rep.hausdorff_mesh_to_model = hd.mesh_to_model;
  rep.hausdorff_model_to_mesh = hd.model_to_mesh;
  rep.resolution_bound = hd.resolution_bound;
  rep.sphere_samples = hd.samples;

  const StarshapedResult star = starshaped_check(fields);
  rep.min_X_normal = star.min_X_normal;
  rep.starshaped = star.pass;

  const RadiusPinchResult rp = radius_pinching_check(fields, scal.h, scal.R0);
  rep.max_abs_X_dev = rp.max_X_dev;
  rep.max_r_dev = rp.max_r_dev;
  rep.chi_inf = chi_infinity(fields);

  rep.ratio_Xinf_over_X2 =
      scal.X2sq > 0 ? scal.X_inf / std::sqrt(scal.X2sq) : 0.0;
  rep.psi_l1 = scal.psi_1;
  rep.psi_inf = scal.psi_inf;
  rep.psi_inf_h32 = scal.psi_inf * std::pow(scal.h, 1.5);

  rep.theorem_applicable = scal.beta > 0 && scal.eps <= scal.beta * scal.beta;
  rep.sphere_verdict =
      rep.theorem_applicable && rep.genus == 0 && rep.local_diffeo && rep.starshaped;
  return rep;
}

std::string report_to_json(const PinchingReport& r, bool with_timestamp) {
  nlohmann::ordered_json j;
  j["family"] = r.family;
  j["vertices"] = r.vertex_count;
  j["faces"] = r.face_count;
  j["euler_characteristic"] = r.euler_characteristic;
  j["genus"] = r.genus;
  j["curvature_source"] = r.curvature_source;
  j["mass_type"] = r.mass_type;
  j["area"] = r.area;
  j["lambda1"] = r.lambda1;
  j["eig_residual"] = r.eig_residual;
  j["eig_iterations"] = r.eig_iterations;
  j["H_inf"] = r.H_inf;
  j["H_2"] = r.H_2;
  j["B_q"] = r.B_q;
  j["q"] = r.q;
  j["h"] = r.h;
  j["beta"] = r.beta;
  j["eps"] = r.eps;
  j["eps_clamped"] = r.eps_clamped;
  j["R_enclosing"] = r.R_enclosing;
  j["R0"] = r.R0;
  j["A"] = r.A;
  j["reilly_rhs"] = r.reilly_rhs;
  j["p0"] = {r.p0[0], r.p0[1], r.p0[2], r.p0[3]};
  j["gravity_energy"] = r.gravity_energy_value;
  j["moment_residual"] = r.moment_residual_norm;
  j["gravity_iterations"] = r.gravity_iterations;
  j["flat_flag"] = r.flat_flag;
  j["hausdorff"] = r.hausdorff;
  j["hausdorff_mesh_to_model"] = r.hausdorff_mesh_to_model;
  j["hausdorff_model_to_mesh"] = r.hausdorff_model_to_mesh;
  j["resolution_bound"] = r.resolution_bound;
  j["sphere_samples"] = r.sphere_samples;
  j["max_edge_distortion"] = r.max_edge_distortion;
  j["min_X_normal"] = r.min_X_normal;
  j["starshaped"] = r.starshaped;
  j["local_diffeo"] = r.local_diffeo;
  j["jacobian_ok_fraction"] = r.jacobian_ok_fraction;
  j["df_bracket_fraction"] = r.df_bracket_fraction;
  j["grad_r_inf"] = r.grad_r_inf;
  j["max_abs_X_dev"] = r.max_abs_X_dev;
  j["max_r_dev"] = r.max_r_dev;
  j["chi_inf"] = r.chi_inf;
  j["heintze_max_residual"] = r.heintze_max_residual;
  j["weak_div_max_rel"] = r.weak_div_max_rel;
  j["weak_div_global_rel"] = r.weak_div_global_rel;
  j["ratio_Xinf_over_X2"] = r.ratio_Xinf_over_X2;
  j["psi_l1"] = r.psi_l1;
  j["psi_inf"] = r.psi_inf;
  j["psi_inf_h32"] = r.psi_inf_h32;
  j["theorem_applicable"] = r.theorem_applicable;
  j["sphere_verdict"] = r.sphere_verdict;
  j["report_tol"] = r.report_tol;
  j["lemma_entries"] = nlohmann::ordered_json::array();
  for (const auto& e : r.lemma_entries) {
    nlohmann::ordered_json je;
    je["name"] = e.name;
    je["lhs"] = e.lhs;
    je["rhs"] = e.rhs;
    je["pass"] = e.pass;
    je["not_applicable"] = e.not_applicable;
    if (e.not_applicable) je["reason"] = e.reason;
    j["lemma_entries"].push_back(je);
  }
  if (with_timestamp) j["timestamp"] = iso_timestamp();
  return j.dump(2) + "\n";
}

SweepResult run_sweep(const Vec4& center, double radius, int mode, int refine,
                      std::vector<double> deltas, const AnalyzeOptions& opts) {
  if (deltas.empty()) throw ConfigError("sweep: delta list must not be empty");
  std::sort(deltas.begin(), deltas.end(), std::greater<double>());

  SweepResult out;
  out.rows.reserve(deltas.size());
  for (double delta : deltas) {
    const ImmersedMesh mesh = make_perturbed_sphere(center, radius, delta, mode, refine);
    const PinchingReport rep = analyze_mesh(mesh, opts);
    SweepRow row;
    row.delta = delta;
    row.eps = rep.eps;
    row.lambda1 = rep.lambda1;
    row.h = rep.h;
    row.beta = rep.beta;
    row.d_hausdorff = rep.hausdorff;
    row.max_r_dev = rep.max_r_dev;
    row.chi_inf = rep.chi_inf;
    row.min_X_normal = rep.min_X_normal;
    row.max_edge_distortion = rep.max_edge_distortion;
    out.rows.push_back(row);
  }

  std::vector<double> eps, dh, dist;
  for (const auto& row : out.rows) {
    eps.push_back(row.eps);
    dh.push_back(row.d_hausdorff);
    dist.push_back(row.max_edge_distortion);
  }
  out.slope_dh_vs_eps = loglog_slope(eps, dh, out.fitted_rows);
  int dummy = 0;
  out.slope_distortion_vs_eps = loglog_slope(eps, dist, dummy);
  return out;
}

std::string sweep_to_csv(const SweepResult& sweep) {
  std::ostringstream os;
  os << "delta,eps,lambda1,h,beta,d_hausdorff,max_r_dev,chi_inf,min_X_normal,"
        "max_edge_distortion\n";
  char buf[512];
  for (const auto& r : sweep.rows) {
    std::snprintf(buf, sizeof(buf),
                  "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", r.delta,
                  r.eps, r.lambda1, r.h, r.beta, r.d_hausdorff, r.max_r_dev, r.chi_inf,
                  r.min_X_normal, r.max_edge_distortion);
    os << buf;
  }
  std::snprintf(buf, sizeof(buf), "# slope_dh_vs_eps = %.6g (fit over %d rows)\n",
                sweep.slope_dh_vs_eps, sweep.fitted_rows);
  os << buf;
  std::snprintf(buf, sizeof(buf), "# slope_distortion_vs_eps = %.6g\n",
                sweep.slope_distortion_vs_eps);
  os << buf;
  // Model exponents of the implemented bounds for n = 2, q = 4:
  // eps^(1/(2(2n+1))) = eps^0.1 and eps^((q-n)/(q-n+qn)) = eps^0.2.
  os << "# reference_exponents: hausdorff 0.1, distortion 0.2\n";
  return os.str();
}

}  // namespace pinchlab
