#pragma once

#include "pinchlab/barycenter.hpp"
#include "pinchlab/pinching.hpp"
#include "pinchlab/spectral.hpp"

#include <string>
#include <vector>

namespace pinchlab {

struct AnalyzeOptions {
  MassType mass = MassType::Lumped;
  double q = 4.0;             // exponent for |B|_q; must exceed n = 2
  double report_tol = 0.05;   // relative slack for lemma pass verdicts
  double eig_tol = 1e-9;
  int eig_max_iter = 500;
  std::uint64_t seed = 4242;
  int sphere_samples = 0;     // 0 -> 10 * vertex count
  double gravity_tol = 1e-10;
  int gravity_max_iter = 300;
  int weak_div_count = 32;
};

// Everything the analysis produces, in report order.
struct PinchingReport {
  std::string family;
  int vertex_count = 0, face_count = 0;
  int euler_characteristic = 0, genus = 0;
  std::string curvature_source;
  std::string mass_type;
  double area = 0;

  double lambda1 = 0, eig_residual = 0;
  int eig_iterations = 0;

  double H_inf = 0, H_2 = 0, B_q = 0, q = 4;
  double h = 0, beta = 0, eps = 0;
  bool eps_clamped = false;
  double R_enclosing = 0, R0 = 0, A = 0, reilly_rhs = 0;

  Vec4 p0 = Vec4::Zero();
  double gravity_energy_value = 0, moment_residual_norm = 0;
  int gravity_iterations = 0;
  bool flat_flag = false;

  double hausdorff = 0, hausdorff_mesh_to_model = 0, hausdorff_model_to_mesh = 0;
  double resolution_bound = 0;
  int sphere_samples = 0;

  double max_edge_distortion = 0;
  double min_X_normal = 0;
  bool starshaped = false;
  bool local_diffeo = false;     // every face orientation-consistent under F
  double jacobian_ok_fraction = 0;
  double df_bracket_fraction = 0;
  double grad_r_inf = 0;

  double max_abs_X_dev = 0, max_r_dev = 0, chi_inf = 0;
  double heintze_max_residual = 0;
  double weak_div_max_rel = 0, weak_div_global_rel = 0;

  double ratio_Xinf_over_X2 = 0;  // trend-only diagnostics
  double psi_l1 = 0, psi_inf = 0, psi_inf_h32 = 0;

  bool theorem_applicable = false;  // beta > 0 and eps <= beta^2
  bool sphere_verdict = false;      // applicable + genus 0 + local diffeo + starshaped
  double report_tol = 0.05;

  std::vector<LemmaEntry> lemma_entries;
};

PinchingReport analyze_mesh(const ImmersedMesh& mesh, const AnalyzeOptions& opts = {});

std::string report_to_json(const PinchingReport& report, bool with_timestamp = true);

struct SweepRow {
  double delta = 0, eps = 0, lambda1 = 0, h = 0, beta = 0;
  double d_hausdorff = 0, max_r_dev = 0, chi_inf = 0, min_X_normal = 0;
  double max_edge_distortion = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // ordered by descending delta
  double slope_dh_vs_eps = std::numeric_limits<double>::quiet_NaN();
  double slope_distortion_vs_eps = std::numeric_limits<double>::quiet_NaN();
  int fitted_rows = 0;
};

SweepResult run_sweep(const Vec4& center, double radius, int mode, int refine,
                      std::vector<double> deltas, const AnalyzeOptions& opts = {});

std::string sweep_to_csv(const SweepResult& sweep);

}  // namespace pinchlab
