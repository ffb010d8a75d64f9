// pinchlab: generate hypersurface meshes in S^3, analyze their spectral and
// curvature pinching quantities, sweep perturbation families, and run the
// built-in verification suite.

#include "pinchlab/errors.hpp"
#include "pinchlab/pipeline.hpp"
#include "pinchlab/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace pinchlab;

struct CliOptions {
  std::string family;
  double radius = kPi / 4.0;
  double delta = 0.0;
  std::vector<double> deltas;
  int mode = 2;
  std::vector<int> res = {64, 64};
  int refine = 4;
  double q = 4.0;
  double tol = 0.0;  // 0 keeps per-command defaults
  std::uint64_t seed = 4242;
  std::string out;
  std::string mesh_path;
  int sphere_samples = 0;
  std::string mass = "lumped";
  std::vector<double> center = {0, 0, 0, 1};
  bool dump_matrix = false;
  std::vector<int> criteria;
};

Vec4 parse_center(const std::vector<double>& c) {
  if (c.size() != 4) throw ConfigError("center must have 4 components");
  Vec4 v(c[0], c[1], c[2], c[3]);
  if (v.norm() < 1e-12) throw ConfigError("center must be a nonzero vector");
  return v.normalized();
}

ImmersedMesh build_family(const CliOptions& opt) {
  const Vec4 center = parse_center(opt.center);
  if (opt.family == "sphere") {
    return make_geodesic_sphere(center, opt.radius, opt.refine);
  }
  if (opt.family == "clifford") {
    if (opt.res.size() != 2) throw ConfigError("clifford family needs --res A B");
    return make_clifford_torus(1, 1, opt.res[0], opt.res[1]);
  }
  if (opt.family == "perturbed") {
    return make_perturbed_sphere(center, opt.radius, opt.delta, opt.mode, opt.refine);
  }
  throw ConfigError("unknown family '" + opt.family + "' (sphere | clifford | perturbed)");
}

ImmersedMesh load_or_build(const CliOptions& opt) {
  if (!opt.mesh_path.empty()) return read_s4off_file(opt.mesh_path);
  if (opt.family.empty()) {
    throw ConfigError("provide either --mesh FILE or --family NAME");
  }
  return build_family(opt);
}

AnalyzeOptions analyze_options(const CliOptions& opt) {
  AnalyzeOptions a;
  a.q = opt.q;
  a.seed = opt.seed;
  a.sphere_samples = opt.sphere_samples;
  if (opt.tol > 0) a.report_tol = opt.tol;
  if (opt.mass == "lumped") {
    a.mass = MassType::Lumped;
  } else if (opt.mass == "consistent") {
    a.mass = MassType::Consistent;
  } else {
    throw ConfigError("--mass must be 'lumped' or 'consistent'");
  }
  return a;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os << text;
  if (!os) throw IoError("write to '" + path + "' failed");
}

int cmd_gen(const CliOptions& opt) {
  const ImmersedMesh mesh = build_family(opt);
  if (opt.out.empty()) {
    write_s4off(mesh, std::cout);
  } else {
    write_s4off_file(mesh, opt.out);
  }
  return 0;
}

int cmd_analyze(const CliOptions& opt) {
  const ImmersedMesh mesh = load_or_build(opt);
  const PinchingReport report = analyze_mesh(mesh, analyze_options(opt));
  write_output(report_to_json(report), opt.out);
  if (opt.dump_matrix) {
    const OperatorPair ops = assemble(mesh, analyze_options(opt).mass);
    std::ofstream os(opt.out.empty() ? "stiffness.coord" : opt.out + ".coord");
    if (!os) throw IoError("cannot open matrix dump file");
    write_matrix_coord(ops.stiffness, os);
  }
  return 0;
}

int cmd_sweep(const CliOptions& opt) {
  if (opt.deltas.empty()) throw ConfigError("sweep needs a nonempty --delta list");
  const Vec4 center = parse_center(opt.center);
  AnalyzeOptions a = analyze_options(opt);
  const SweepResult sweep =
      run_sweep(center, opt.radius, opt.mode, opt.refine, opt.deltas, a);
  write_output(sweep_to_csv(sweep), opt.out);
  return 0;
}

int cmd_verify(const CliOptions& opt) {
  if (!opt.mesh_path.empty()) {
    // Pre-check an externally supplied mesh before the numbered criteria.
    try {
      (void)read_s4off_file(opt.mesh_path);
    } catch (const Error& e) {
      std::cout << "[FAIL] 0 mesh_file_validation: " << e.what() << "\n";
      std::cerr << "error[io]: verify: mesh file validation failed\n";
      return 4;
    }
    std::cout << "[PASS] 0 mesh_file_validation: " << opt.mesh_path << "\n";
  }
  VerifyOptions v;
  if (opt.tol > 0) v.tol_scale = opt.tol;
  v.seed = opt.seed;
  v.only = opt.criteria;
  const auto results = run_acceptance_suite(v, std::cout);
  int failures = 0;
  for (const auto& r : results) failures += r.pass ? 0 : 1;
  std::cout << (failures == 0 ? "all criteria passed\n"
                              : std::to_string(failures) + " criteria failed\n");
  if (failures > 0) {
    std::cerr << "error[numeric]: verify: " << failures << " criteria failed\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pinchlab: spectral pinching laboratory for surfaces in S^3"};
  app.require_subcommand(1);
  CliOptions opt;

  auto add_family_flags = [&](CLI::App* cmd) {
    cmd->add_option("--family", opt.family, "sphere | clifford | perturbed");
    cmd->add_option("--center", opt.center, "ambient center direction (4 components)")
        ->expected(4);
    cmd->add_option("--radius", opt.radius, "geodesic radius in radians");
    cmd->add_option("--mode", opt.mode, "perturbation profile degree");
    cmd->add_option("--res", opt.res, "torus grid resolution A B")->expected(2);
    cmd->add_option("--refine", opt.refine, "icosahedral subdivision level");
  };

  CLI::App* gen = app.add_subcommand("gen", "generate a mesh and write S4OFF");
  add_family_flags(gen);
  gen->add_option("--delta", opt.delta, "perturbation amplitude");
  gen->add_option("--out", opt.out, "output path (stdout when omitted)");

  CLI::App* analyze = app.add_subcommand("analyze", "full pinching report as JSON");
  add_family_flags(analyze);
  analyze->add_option("--delta", opt.delta, "perturbation amplitude");
  analyze->add_option("--mesh", opt.mesh_path, "S4OFF file to analyze");
  analyze->add_option("--q", opt.q, "exponent for |B|_q (must exceed 2)");
  analyze->add_option("--tol", opt.tol, "relative slack for lemma verdicts");
  analyze->add_option("--seed", opt.seed, "solver / test-function seed");
  analyze->add_option("--sphere-samples", opt.sphere_samples,
                      "model-sphere samples for the Hausdorff distance");
  analyze->add_option("--mass", opt.mass, "lumped | consistent");
  analyze->add_option("--out", opt.out, "output path (stdout when omitted)");
  analyze->add_flag("--dump-matrix", opt.dump_matrix,
                    "also write the stiffness matrix in coordinate format");

  CLI::App* sweep = app.add_subcommand("sweep", "perturbation sweep as CSV");
  add_family_flags(sweep);
  sweep->add_option("--delta", opt.deltas, "list of perturbation amplitudes")
      ->expected(-1);
  sweep->add_option("--q", opt.q, "exponent for |B|_q");
  sweep->add_option("--tol", opt.tol, "relative slack for lemma verdicts");
  sweep->add_option("--seed", opt.seed, "solver / test-function seed");
  sweep->add_option("--mass", opt.mass, "lumped | consistent");
  sweep->add_option("--out", opt.out, "output path (stdout when omitted)");

  CLI::App* verify = app.add_subcommand("verify", "run the verification suite");
  verify->add_option("--tol", opt.tol, "threshold scale (1 = default, <1 tightens)");
  verify->add_option("--seed", opt.seed, "probe seed");
  verify->add_option("--criterion", opt.criteria, "criterion ids to run")->expected(-1);
  verify->add_option("--mesh", opt.mesh_path, "validate this mesh file first");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error[config]: " << e.what() << "\n";
    return 2;
  }

  try {
    if (gen->parsed()) return cmd_gen(opt);
    if (analyze->parsed()) return cmd_analyze(opt);
    if (sweep->parsed()) return cmd_sweep(opt);
    if (verify->parsed()) return cmd_verify(opt);
    std::cerr << "error[config]: no subcommand\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error[config]: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error[io]: " << e.what() << "\n";
    return 4;
  } catch (const NumericError& e) {
    std::cerr << "error[numeric]: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error[numeric]: " << e.what() << "\n";
    return 3;
  }
}
