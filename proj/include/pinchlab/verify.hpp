#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace pinchlab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

struct VerifyOptions {
  double tol_scale = 1.0;     // multiplies every threshold; < 1 tightens the suite
  std::uint64_t seed = 20240;
  std::vector<int> only;      // subset of criterion ids; empty means all
};

// Runs the built-in verification suite (12 numbered criteria) and returns one
// result per criterion. Progress lines go to `log`.
std::vector<CriterionResult> run_acceptance_suite(const VerifyOptions& opts, std::ostream& log);

}  // namespace pinchlab
