#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pinchlab/mesh.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("pinchlab_cli_" + std::to_string(static_cast<long>(::getpid())));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

RunResult run(const std::string& args) {
  const fs::path log = scratch_dir() / "stdout.txt";
  const std::string cmd =
      std::string(PINCHLAB_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream is(log);
  std::stringstream ss;
  ss << is.rdbuf();
  r.out = ss.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string strip_timestamp(std::string text) {
  const size_t pos = text.find("\"timestamp\"");
  if (pos != std::string::npos) {
    const size_t end = text.find('\n', pos);
    text.erase(pos, end - pos);
  }
  return text;
}

}  // namespace

TEST_CASE("gen writes a valid, re-readable S4OFF file") {
  const fs::path out = scratch_dir() / "sphere.s4off";
  const RunResult r = run("gen --family sphere --radius 0.7853981633974483 --refine 3 --out " +
                          out.string());
  REQUIRE(r.code == 0);
  const pinchlab::ImmersedMesh mesh = pinchlab::read_s4off_file(out.string());
  CHECK(mesh.vertex_count() == 642);
  CHECK(mesh.face_count() == 1280);
}

TEST_CASE("gen torus round trip") {
  const fs::path out = scratch_dir() / "torus.s4off";
  REQUIRE(run("gen --family clifford --res 16 16 --out " + out.string()).code == 0);
  const pinchlab::ImmersedMesh mesh = pinchlab::read_s4off_file(out.string());
  CHECK(mesh.vertex_count() == 256);
}

TEST_CASE("perturbed with delta 0 emits bytes identical to the sphere") {
  const fs::path a = scratch_dir() / "a.s4off";
  const fs::path b = scratch_dir() / "b.s4off";
  REQUIRE(run("gen --family sphere --radius 0.785 --refine 2 --out " + a.string()).code == 0);
  REQUIRE(run("gen --family perturbed --radius 0.785 --delta 0 --mode 4 --refine 2 --out " +
              b.string())
              .code == 0);
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("analyze produces parseable JSON from a mesh file") {
  const fs::path mesh = scratch_dir() / "m.s4off";
  const fs::path rep = scratch_dir() / "report.json";
  REQUIRE(run("gen --family sphere --radius 0.7853981633974483 --refine 3 --out " +
              mesh.string())
              .code == 0);
  const RunResult r =
      run("analyze --mesh " + mesh.string() + " --out " + rep.string());
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(slurp(rep));
  CHECK(j["family"] == "untagged");
  CHECK(j["curvature_source"] == "discrete");  // files carry no family tag
  CHECK(j["lambda1"].get<double>() == doctest::Approx(4.0).epsilon(0.02));
  CHECK(j["genus"] == 0);
}

TEST_CASE("analyze output is deterministic apart from the timestamp") {
  const std::string args = "analyze --family sphere --radius 0.785 --refine 2 --seed 7";
  const RunResult a = run(args);
  const RunResult b = run(args);
  REQUIRE(a.code == 0);
  CHECK(strip_timestamp(a.out) == strip_timestamp(b.out));
}

TEST_CASE("missing mesh file: exit 4, no partial report") {
  const fs::path rep = scratch_dir() / "never.json";
  const RunResult r = run("analyze --mesh /nonexistent/x.s4off --out " + rep.string());
  CHECK(r.code == 4);
  CHECK(!fs::exists(rep));
  CHECK(r.out.find("error[io]") != std::string::npos);
}

TEST_CASE("config errors exit with code 2 and a parseable prefix") {
  CHECK(run("analyze --family sphere --radius 0.785 --refine 2 --q 1.5").code == 2);
  CHECK(run("gen --family sphere --radius 3.0 --refine 1").code == 2);
  CHECK(run("gen --family nosuch --refine 1").code == 2);
  CHECK(run("analyze").code == 2);
  const RunResult r = run("gen --family sphere --radius 3.0 --refine 1");
  CHECK(r.out.find("error[config]") != std::string::npos);
}

TEST_CASE("sweep emits the documented CSV with a slope footer") {
  const fs::path csv = scratch_dir() / "sweep.csv";
  const RunResult r = run(
      "sweep --family perturbed --radius 0.7853981633974483 --mode 2 --refine 2 "
      "--delta 0.1 0.05 --out " +
      csv.string());
  REQUIRE(r.code == 0);
  const std::string text = slurp(csv);
  CHECK(text.rfind("delta,eps,lambda1,h,beta,d_hausdorff,max_r_dev,chi_inf,min_X_normal,"
                   "max_edge_distortion",
                   0) == 0);
  CHECK(text.find("\n0.1,") != std::string::npos);
  CHECK(text.find("\n0.05,") != std::string::npos);
  CHECK(text.find("# slope_dh_vs_eps") != std::string::npos);
  // Sweep requires deltas.
  CHECK(run("sweep --family perturbed --radius 0.785 --refine 2").code == 2);
}

TEST_CASE("verify flags corrupted mesh files before running criteria") {
  const fs::path bad = scratch_dir() / "bad.s4off";
  std::ofstream(bad) << "S4OFF\n4 4\nnot numbers\n";
  const RunResult r = run("verify --mesh " + bad.string() + " --criterion 12");
  CHECK(r.code == 4);
  CHECK(r.out.find("mesh_file_validation") != std::string::npos);
}

TEST_CASE("verify runs a single criterion") {
  const RunResult r = run("verify --criterion 12");
  CHECK(r.code == 0);
  CHECK(r.out.find("[PASS] 12") != std::string::npos);
  CHECK(r.out.find("all criteria passed") != std::string::npos);
}
