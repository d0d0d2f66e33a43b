// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "chg/bergman.hpp"
#include "chg/curvature.hpp"
#include "chg/kemetric.hpp"
#include "chg/oracle.hpp"
#include "chg_cli/suite.hpp"

using namespace chg;
using namespace chg::cli;

namespace {

constexpr std::uint64_t kSeed = 7;
const std::vector<std::pair<int, int>> kConfigs = {{1, 1}, {2, 1}, {2, 2}, {3, 1}};

int jobs() { return static_cast<int>(std::max(1u, std::min(8u, std::thread::hardware_concurrency()))); }

SuiteConfig suite(int p, int r, int count = 1000) {
  SuiteConfig cfg;
  cfg.params = DomainParams::with_special_K(r, p);
  cfg.seed = kSeed;
  cfg.count = count;
  cfg.jobs = jobs();
  return cfg;
}

std::string tag(int p, int r) { return "(" + std::to_string(p) + "," + std::to_string(r) + ")"; }

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void add(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [FAIL]");
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
  void add(const CheckRecord& rec, const std::string& prefix) {
    const std::string shown = rec.error.empty() ? sci(rec.value) : "error: " + rec.error;
    add(rec.pass, prefix + " " + rec.name + " " + shown + (rec.measure == "min_growth" ? " >= " : " <= ") +
                      sci(rec.tolerance));
  }
};

Outcome criterion1() {
  Outcome o;
  for (auto [p, r] : kConfigs) {
    const SuiteConfig cfg = suite(p, r);
    o.add(check_ma(cfg, DetRoute::kClosedForm), tag(p, r));
    o.add(check_ma(cfg, DetRoute::kNumeric), tag(p, r));
  }
  return o;
}

Outcome criterion2() {
  Outcome o;
  SuiteConfig cfg = suite(2, 1);
  cfg.params = DomainParams::make(1, 2, 1.0);
  const auto pts = suite_points(cfg, 1000);
  int above = 0;
  for (const Point& pt : pts) above += ma_residual(cfg.params, pt) > 1e-3 ? 1 : 0;
  o.add(above >= 900, "K=1: " + std::to_string(above) + "/1000 points with residual > 1e-3 (need >= 900)");
  return o;
}

Outcome criterion3() {
  Outcome o;
  for (auto [p, r] : kConfigs) {
    const SuiteConfig cfg = suite(p, r);
    o.add(check_oracle_hessian(cfg), tag(p, r));
    double plain = 0.0;
    for (const Point& pt : suite_points(cfg, kFdPoints)) {
      const CMatrix t = metric_pullback(cfg.params, pt).entries;
      const CMatrix h = fd_metric(cfg.params, pt, FDConfig{});
      plain = std::max(plain, (h - t).cwiseAbs().maxCoeff() / t.cwiseAbs().maxCoeff());
    }
    o.note(tag(p, r) + " without extrapolation " + sci(plain) + " (info)");
    o.add(check_route_agreement(cfg), tag(p, r));
  }
  return o;
}

Outcome criterion4() {
  Outcome o;
  for (auto [p, r] : kConfigs) {
    const SuiteConfig cfg = suite(p, r);
    o.add(check_curvature_range(cfg), tag(p, r));
    o.add(check_sharpness(cfg), tag(p, r));
  }
  for (int r : {1, 2}) {
    const DomainParams d = DomainParams::with_special_K(r, 1);
    Rng rng(kSeed);
    double worst = 0.0;
    for (const Point& pt : sample_interior(d, kSeed, 1000)) {
      const Tangent t{random_complex(d.m(), rng), random_complex(d.r(), rng)};
      worst = std::max(worst, std::abs(hsc(d, pt, t) + 2.0));
    }
    o.add(worst <= 1e-10, tag(1, r) + " |omega + 2| " + sci(worst) + " <= 1e-10");
  }
  return o;
}

Outcome criterion5() {
  Outcome o;
  o.add(check_fd_curvature(suite(2, 1)), tag(2, 1));
  const DomainParams d = DomainParams::with_special_K(1, 2);
  Rng rng(kSeed);
  double worst_ratio = INFINITY;
  for (const Point& pt : sample_interior(d, kSeed, 5)) {
    const Tangent t{random_complex(d.m(), rng), random_complex(d.r(), rng)};
    const double exact = hsc(d, pt, t);
    FDConfig coarse = FDConfig::curvature();
    coarse.richardson = false;
    coarse.step = 0.02;
    FDConfig fine = coarse;
    fine.step = 0.01;
    const double ratio = std::abs(fd_hsc(d, pt, t, coarse) - exact) / std::abs(fd_hsc(d, pt, t, fine) - exact);
    worst_ratio = std::min(worst_ratio, ratio);
  }
  o.add(worst_ratio >= 3.0, "step 0.02 -> 0.01 min error ratio " + sci(worst_ratio) + " >= 3 over 5 pairs");
  return o;
}

Outcome criterion6() {
  Outcome o;
  for (auto [p, r] : kConfigs) {
    const SuiteConfig cfg = suite(p, r, 200);
    o.add(check_x_invariance(cfg), tag(p, r));
    o.add(check_jacobian_det(cfg), tag(p, r));
    o.add(check_jacobian_fd(cfg), tag(p, r));
  }
  return o;
}

Outcome criterion7() {
  Outcome o;
  for (int p : {2, 3}) o.add(check_lemma5(suite(p, 1)), "p=" + std::to_string(p));
  return o;
}

Outcome criterion8() {
  Outcome o;
  for (int r : {1, 2}) {
    const FitReport fit = fit_coeffs_p1_with_report(r);
    o.add(fit.residual <= 1e-10, "r=" + std::to_string(r) + " fit residual " + sci(fit.residual) + " <= 1e-10");
    const double scale = r == 1 ? 2.0 : 6.0;
    double worst_g = 0.0;
    for (double y : {1.0, 1.5, 2.0, 5.0, 10.0, 100.0}) {
      const double expected = scale * std::pow(y, r + 2);
      worst_g = std::max(worst_g, std::abs(g_series(fit.coeffs, y).G - expected) / expected);
    }
    o.add(worst_g <= 1e-10, "r=" + std::to_string(r) + " G vs " + (r == 1 ? "2Y^3 " : "6Y^4 ") + sci(worst_g) +
                                " <= 1e-10");
    const DomainParams d = DomainParams::make(r, 1, 1.0);
    double worst_m = 0.0;
    for (const Point& pt : sample_interior(d, kSeed, 500)) {
      const CMatrix b = bergman_metric(d, fit.coeffs, pt).entries;
      const CMatrix ke = metric_pullback(d, pt).entries;
      worst_m = std::max(worst_m, (b - (d.N() + 1.0) * ke).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff());
    }
    o.add(worst_m <= 1e-8, "r=" + std::to_string(r) + " Bergman vs (N+1) KE over 500 points " + sci(worst_m) +
                               " <= 1e-8");
  }
  const EquivalenceBounds eb = equivalence_bounds_scan(DomainParams::make(1, 1, 1.0), fit_coeffs_p1(1), 41);
  const double dev = std::max(std::abs(eb.a - 3.0), std::abs(eb.b - 3.0));
  o.add(dev <= 1e-10, "r=1 scan a=" + sci(eb.a) + " b=" + sci(eb.b) + ", |dev| " + sci(dev) + " <= 1e-10");
  return o;
}

Outcome criterion9() {
  Outcome o;
  struct Case {
    DomainParams params;
    BergmanCoeffs coeffs;
    std::string name;
  };
  std::vector<Case> cases;
  for (int r : {1, 2}) {
    cases.push_back({DomainParams::with_special_K(r, 1), fit_coeffs_p1(r), "p=1 r=" + std::to_string(r) + " fit"});
  }
  const std::vector<std::vector<double>> synthetic = {{1, 1, 1, 1, 8}, {0, 0, 0, 0, 1}, {5, 0.5, 2, 0.1, 3}};
  for (int r : {1, 2}) {
    for (std::size_t i = 0; i < synthetic.size(); ++i) {
      cases.push_back({DomainParams::with_special_K(r, 2), BergmanCoeffs(r, 2, synthetic[i]),
                       "p=2 r=" + std::to_string(r) + " synthetic#" + std::to_string(i + 1)});
    }
  }
  for (const Case& c : cases) {
    const double target = c.params.N() + 1.0;
    double worst = 0.0;
    for (double lambda : {0.0, 1.0, 10.0, 1000.0}) {
      const RatioTriple t = equivalence_ratios(c.params, c.coeffs, 1.0 - 1e-6, lambda);
      for (double v : {t.phi, t.psi, t.upsilon}) worst = std::max(worst, std::abs(v - target) / target);
    }
    const EquivalenceBounds eb = equivalence_bounds_scan(c.params, c.coeffs, 41);
    const bool ordered = eb.b > 0.0 && eb.b <= eb.a;
    o.add(worst <= 1e-3 && ordered, c.name + " limit dev " + sci(worst) + " <= 1e-3, b=" + sci(eb.b) +
                                        " a=" + sci(eb.a));
  }
  return o;
}

Outcome criterion10() {
  Outcome o;
  for (auto [p, r] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {2, 1}, {2, 2}, {3, 1}, {3, 2}}) {
    o.add(check_boundary_probe(suite(p, r)), tag(p, r));
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"Monge-Ampere identity at special K", criterion1},
      {"negative control off special K", criterion2},
      {"finite-difference Hessian oracle and metric routes", criterion3},
      {"curvature range and sharpness", criterion4},
      {"finite-difference curvature and convergence", criterion5},
      {"automorphism laws", criterion6},
      {"trace inequality chain", criterion7},
      {"Bergman kernel exactness on the ball", criterion8},
      {"ratio limits and scanned bounds", criterion9},
      {"boundary blow-up", criterion10},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += o.pass ? 0 : 1;
    std::printf("criterion %zu: %s - %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
