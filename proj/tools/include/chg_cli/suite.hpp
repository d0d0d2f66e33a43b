#pragma once

// The invariant checks run by `chg verify`. Every check samples its own
// deterministic data from the suite seed and reports the worst value seen.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "chg/domain.hpp"
#include "chg/kemetric.hpp"
#include "chg_cli/report.hpp"

namespace chg::cli {

using Tolerances = std::map<std::string, double>;

/// Check name -> tolerance (a lower bound for boundary_probe).
Tolerances default_tolerances();

struct SuiteConfig {
  DomainParams params = DomainParams::with_special_K(1, 1);
  std::uint64_t seed = 1;
  int count = 1000;
  bool near_boundary = false;
  int jobs = 1;
  Tolerances tol = default_tolerances();
};

/// Independent stream for `tag` derived from the suite seed.
std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t tag);

/// Interior sample of the suite (cap 0.95, or 1 - 1e-6 with near_boundary).
std::vector<Point> suite_points(const SuiteConfig& cfg, int count);

CheckRecord check_ma(const SuiteConfig& cfg, DetRoute route);
/// The fixed-step oracles (this and check_jacobian_fd) sample at cap 0.95
/// even with near_boundary.
CheckRecord check_oracle_hessian(const SuiteConfig& cfg);
CheckRecord check_route_agreement(const SuiteConfig& cfg);
CheckRecord check_metric_positive(const SuiteConfig& cfg);
CheckRecord check_x_invariance(const SuiteConfig& cfg);
CheckRecord check_jacobian_det(const SuiteConfig& cfg);
CheckRecord check_jacobian_fd(const SuiteConfig& cfg);
CheckRecord check_curvature_range(const SuiteConfig& cfg);
CheckRecord check_sharpness(const SuiteConfig& cfg);
CheckRecord check_lemma5(const SuiteConfig& cfg);
CheckRecord check_fd_curvature(const SuiteConfig& cfg);
/// 20 w-ward and 20 Z-ward rays; value is the smallest growth of g.
CheckRecord check_boundary_probe(const SuiteConfig& cfg);

std::vector<CheckRecord> run_verify_suite(const SuiteConfig& cfg);

/// Points used by the finite-difference checks: min(count, 50).
constexpr int kFdPoints = 50;
constexpr int kProbeRays = 20;

}  // namespace chg::cli
