#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace chg::cli {

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitUsage = 2 };

struct CommonOptions {
  int p = 1;
  int r = 1;
  std::optional<double> K;
  bool special_K = false;
  std::optional<std::uint64_t> seed;
  int count = 1000;
  int jobs = 1;
  bool timestamp = true;
  std::string out;
};

struct VerifyOptions {
  CommonOptions common;
  std::string tol_overrides;
  bool near_boundary = false;
};

struct ScanCurvatureOptions {
  CommonOptions common;
};

struct ScanEquivalenceOptions {
  CommonOptions common;
  std::string coeffs;
  int grid = 41;
};

struct EvalOptions {
  CommonOptions common;
  std::string point;
  std::string what = "g";
  std::string tangent;
  std::string coeffs;
};

int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err);
int cmd_scan_curvature(const ScanCurvatureOptions& opts, std::ostream& out, std::ostream& err);
int cmd_scan_equivalence(const ScanEquivalenceOptions& opts, std::ostream& out, std::ostream& err);
int cmd_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err);

/// Parses argv-style arguments (without the program name) and dispatches.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chg::cli
