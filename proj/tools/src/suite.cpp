#include "chg_cli/suite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "chg/autgroup.hpp"
#include "chg/curvature.hpp"
#include "chg/error.hpp"
#include "chg/oracle.hpp"
#include "chg_cli/parallel.hpp"

namespace chg::cli {
namespace {

enum Tag : std::uint64_t {
  kTagPoints = 0,
  kTagBases,
  kTagTangents,
  kTagLemma,
  kTagProbe,
  kTagFdTangents,
};

double tol(const SuiteConfig& cfg, const std::string& name) {
  const auto it = cfg.tol.find(name);
  if (it == cfg.tol.end()) throw Error(ErrorCode::kInvalidParams, "no tolerance for check " + name);
  return it->second;
}

// Runs body(); an exception turns into a failed record.
CheckRecord guarded(const std::string& name, double tolerance, const std::function<CheckRecord()>& body) {
  try {
    CheckRecord rec = body();
    rec.name = name;
    rec.tolerance = tolerance;
    return rec;
  } catch (const Error& e) {
    CheckRecord rec;
    rec.name = name;
    rec.tolerance = tolerance;
    rec.error = e.what();
    return rec;
  }
}

// Upper-bounded check: value is the maximum of per-item residuals.
CheckRecord max_check(const std::vector<double>& residuals, double tolerance) {
  CheckRecord rec;
  rec.points = static_cast<long>(residuals.size());
  rec.value = 0.0;
  bool finite = true;
  for (double r : residuals) {
    finite = finite && std::isfinite(r);
    rec.value = std::max(rec.value, r);
  }
  rec.pass = finite && rec.value <= tolerance;
  return rec;
}

double rel_max_diff(const CMatrix& a, const CMatrix& b) {
  const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() / std::max(scale, 1e-300);
}

std::vector<Tangent> random_tangents(const DomainParams& params, std::uint64_t seed, int count) {
  Rng rng(seed);
  std::vector<Tangent> out;
  out.reserve(static_cast<std::size_t>(count));
  while (static_cast<int>(out.size()) < count) {
    Tangent t{random_complex(params.m(), rng), random_complex(params.r(), rng)};
    if (!t.is_zero()) out.push_back(std::move(t));
  }
  return out;
}

// Jacobian of the normalizing map at its base point by central differences
// of the map itself; rows follow source coordinates.
CMatrix fd_jacobian(const DomainParams& params, const Point& point, double h) {
  const Automorphism f = normalizing_map(params, point.Z);
  const CVector x0 = to_flat(point);
  const int n = params.N();
  CMatrix out(n, n);
  for (int a = 0; a < n; ++a) {
    CVector dx = CVector::Zero(n);
    dx(a) = h;
    const CVector fp = to_flat(f.apply(point_from_flat(params, x0 + dx)));
    const CVector fm = to_flat(f.apply(point_from_flat(params, x0 - dx)));
    out.row(a) = ((fp - fm) / (2.0 * h)).transpose();
  }
  return out;
}

}  // namespace

Tolerances default_tolerances() {
  return {
      {"ma_closed", 1e-8},       {"ma_numeric", 1e-6},     {"oracle_hessian", 1e-5}, {"route_agreement", 1e-8},
      {"metric_positive", 0.0},  {"x_invariance", 1e-12},  {"jacobian_det", 1e-8},   {"jacobian_fd", 1e-5},
      {"curvature_range", 1e-6}, {"sharpness", 1e-10},     {"lemma5", 1e-12},        {"fd_curvature", 1e-4},
      {"boundary_probe", 10.0},
  };
}

std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t tag) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<Point> suite_points(const SuiteConfig& cfg, int count) {
  SampleOptions opts;
  if (cfg.near_boundary) opts.cap = SampleOptions::kNearBoundaryCap;
  return sample_interior(cfg.params, derived_seed(cfg.seed, kTagPoints), count, opts);
}

namespace {

std::vector<Point> standard_points(const SuiteConfig& cfg, int count) {
  SuiteConfig standard = cfg;
  standard.near_boundary = false;
  return suite_points(standard, count);
}

}  // namespace

CheckRecord check_ma(const SuiteConfig& cfg, DetRoute route) {
  const std::string name = route == DetRoute::kClosedForm ? "ma_closed" : "ma_numeric";
  return guarded(name, tol(cfg, name), [&] {
    const auto pts = suite_points(cfg, cfg.count);
    const auto res = parallel_map(cfg.count, cfg.jobs, [&](int i) {
      return ma_residual(cfg.params, pts[static_cast<std::size_t>(i)], route);
    });
    return max_check(res, tol(cfg, name));
  });
}

CheckRecord check_oracle_hessian(const SuiteConfig& cfg) {
  return guarded("oracle_hessian", tol(cfg, "oracle_hessian"), [&] {
    const int n = std::min(cfg.count, kFdPoints);
    const auto pts = standard_points(cfg, n);
    FDConfig fd;
    fd.richardson = true;
    const auto res = parallel_map(n, cfg.jobs, [&](int i) {
      const Point& pt = pts[static_cast<std::size_t>(i)];
      return rel_max_diff(fd_metric(cfg.params, pt, fd), metric_pullback(cfg.params, pt).entries);
    });
    return max_check(res, tol(cfg, "oracle_hessian"));
  });
}

CheckRecord check_route_agreement(const SuiteConfig& cfg) {
  return guarded("route_agreement", tol(cfg, "route_agreement"), [&] {
    const auto pts = suite_points(cfg, cfg.count);
    const auto res = parallel_map(cfg.count, cfg.jobs, [&](int i) {
      const Point& pt = pts[static_cast<std::size_t>(i)];
      return rel_max_diff(metric_blocks_closed(cfg.params, pt).assemble().entries,
                          metric_pullback(cfg.params, pt).entries);
    });
    return max_check(res, tol(cfg, "route_agreement"));
  });
}

CheckRecord check_metric_positive(const SuiteConfig& cfg) {
  return guarded("metric_positive", tol(cfg, "metric_positive"), [&] {
    const auto pts = suite_points(cfg, cfg.count);
    const auto eig = parallel_map(cfg.count, cfg.jobs, [&](int i) {
      return metric_pullback(cfg.params, pts[static_cast<std::size_t>(i)]).min_eigenvalue();
    });
    CheckRecord rec;
    rec.points = cfg.count;
    rec.measure = "min_eigenvalue";
    rec.value = *std::min_element(eig.begin(), eig.end());
    rec.pass = rec.value > tol(cfg, "metric_positive");
    return rec;
  });
}

CheckRecord check_x_invariance(const SuiteConfig& cfg) {
  return guarded("x_invariance", tol(cfg, "x_invariance"), [&] {
    const auto pts = suite_points(cfg, cfg.count);
    const auto bases = sample_interior(cfg.params, derived_seed(cfg.seed, kTagBases), cfg.count);
    const auto res = parallel_map(cfg.count, cfg.jobs, [&](int i) {
      const Point& pt = pts[static_cast<std::size_t>(i)];
      const Automorphism f(cfg.params, bases[static_cast<std::size_t>(i)].Z);
      return std::abs(aux_xy(cfg.params, f.apply(pt)).X - aux_xy(cfg.params, pt).X);
    });
    return max_check(res, tol(cfg, "x_invariance"));
  });
}

CheckRecord check_jacobian_det(const SuiteConfig& cfg) {
  return guarded("jacobian_det", tol(cfg, "jacobian_det"), [&] {
    const auto pts = suite_points(cfg, cfg.count);
    const auto res = parallel_map(cfg.count, cfg.jobs, [&](int i) {
      const Point& pt = pts[static_cast<std::size_t>(i)];
      const LogDet ld = log_det(jacobian_at_base(cfg.params, pt).assembled);
      const double expected = std::log(jacobian_det_sq(cfg.params, pt.Z));
      return std::abs(std::expm1(2.0 * ld.log_abs - expected));
    });
    return max_check(res, tol(cfg, "jacobian_det"));
  });
}

CheckRecord check_jacobian_fd(const SuiteConfig& cfg) {
  return guarded("jacobian_fd", tol(cfg, "jacobian_fd"), [&] {
    const auto pts = standard_points(cfg, cfg.count);
    const auto res = parallel_map(cfg.count, cfg.jobs, [&](int i) {
      const Point& pt = pts[static_cast<std::size_t>(i)];
      return rel_max_diff(fd_jacobian(cfg.params, pt, 1e-5), jacobian_at_base(cfg.params, pt).assembled);
    });
    return max_check(res, tol(cfg, "jacobian_fd"));
  });
}

CheckRecord check_curvature_range(const SuiteConfig& cfg) {
  return guarded("curvature_range", tol(cfg, "curvature_range"), [&] {
    const auto pts = suite_points(cfg, cfg.count);
    const auto tangents = random_tangents(cfg.params, derived_seed(cfg.seed, kTagTangents), cfg.count);
    const CurvatureBounds bounds = curvature_bounds(cfg.params);
    const auto res = parallel_map(cfg.count, cfg.jobs, [&](int i) {
      const double w = hsc(cfg.params, pts[static_cast<std::size_t>(i)], tangents[static_cast<std::size_t>(i)]);
      return std::max({0.0, bounds.lower - w, w - bounds.upper});
    });
    CheckRecord rec = max_check(res, tol(cfg, "curvature_range"));
    rec.measure = "max_excess";
    return rec;
  });
}

CheckRecord check_sharpness(const SuiteConfig& cfg) {
  return guarded("sharpness", tol(cfg, "sharpness"), [&] {
    const auto [rank_one, scalar] = sharp_directions(cfg.params.p(), cfg.params.r());
    const CVector origin_w = CVector::Zero(cfg.params.r());
    const CurvatureBounds bounds = curvature_bounds(cfg.params);
    return max_check({std::abs(hsc_origin(cfg.params, origin_w, rank_one) - bounds.lower),
                      std::abs(hsc_origin(cfg.params, origin_w, scalar) - bounds.upper)},
                     tol(cfg, "sharpness"));
  });
}

CheckRecord check_lemma5(const SuiteConfig& cfg) {
  return guarded("lemma5", tol(cfg, "lemma5"), [&] {
    const int p = cfg.params.p();
    Rng rng(derived_seed(cfg.seed, kTagLemma));
    std::vector<double> res;
    res.reserve(static_cast<std::size_t>(cfg.count) + 2);
    for (int i = 0; i < cfg.count; ++i) {
      const Lemma5Terms t = lemma5_terms(random_symmetric(p, rng));
      res.push_back(std::max({0.0, (t.quartic - t.squared) / t.squared, (t.squared - t.scaled) / t.squared}));
    }
    // Equality witnesses: u u^T attains quartic == squared, c I attains squared == scaled.
    const CVector u = random_complex(p, rng);
    const Lemma5Terms r1 = lemma5_terms(SymMatrix::from_matrix(u * u.transpose()));
    res.push_back(std::abs(r1.quartic - r1.squared) / r1.squared);
    const Complex c = random_complex(1, rng)(0);
    const Lemma5Terms sc = lemma5_terms(SymMatrix::identity(p) * c);
    res.push_back(std::abs(sc.squared - sc.scaled) / sc.squared);
    return max_check(res, tol(cfg, "lemma5"));
  });
}

CheckRecord check_fd_curvature(const SuiteConfig& cfg) {
  return guarded("fd_curvature", tol(cfg, "fd_curvature"), [&] {
    const int n = std::min(cfg.count, kFdPoints);
    const auto pts = suite_points(cfg, n);
    const auto tangents = random_tangents(cfg.params, derived_seed(cfg.seed, kTagFdTangents), n);
    const auto res = parallel_map(n, cfg.jobs, [&](int i) {
      const Point& pt = pts[static_cast<std::size_t>(i)];
      const Tangent& t = tangents[static_cast<std::size_t>(i)];
      return std::abs(fd_hsc(cfg.params, pt, t) - hsc(cfg.params, pt, t));
    });
    return max_check(res, tol(cfg, "fd_curvature"));
  });
}

CheckRecord check_boundary_probe(const SuiteConfig& cfg) {
  return guarded("boundary_probe", tol(cfg, "boundary_probe"), [&] {
    const DomainParams& params = cfg.params;
    const int m = params.m();
    const int r = params.r();
    const auto starts_w = sample_interior(params, derived_seed(cfg.seed, kTagProbe), kProbeRays);
    SampleOptions moderate;
    moderate.cap = 0.5;
    const auto starts_z = sample_interior(params, derived_seed(cfg.seed, kTagProbe + 1), kProbeRays, moderate);
    Rng rng(derived_seed(cfg.seed, kTagProbe + 2));
    std::vector<Point> starts;
    std::vector<CVector> dirs;
    for (int i = 0; i < kProbeRays; ++i) {
      CVector d = CVector::Zero(params.N());
      d.tail(r) = random_complex(r, rng);
      starts.push_back(starts_w[static_cast<std::size_t>(i)]);
      dirs.push_back(d);
    }
    for (int i = 0; i < kProbeRays; ++i) {
      CVector d = CVector::Zero(params.N());
      d.head(m) = random_complex(m, rng);
      starts.push_back({starts_z[static_cast<std::size_t>(i)].Z, CVector::Zero(r)});
      dirs.push_back(d);
    }
    ProbeConfig pc;
    pc.min_growth = tol(cfg, "boundary_probe");
    const int rays = static_cast<int>(starts.size());
    const auto traces = parallel_map(rays, cfg.jobs, [&](int i) {
      return boundary_blowup_probe(params, starts[static_cast<std::size_t>(i)], dirs[static_cast<std::size_t>(i)],
                                   50, pc);
    });
    CheckRecord rec;
    rec.points = rays;
    rec.measure = "min_growth";
    rec.value = traces.front().growth();
    rec.pass = true;
    for (const auto& t : traces) {
      rec.value = std::min(rec.value, t.growth());
      rec.pass = rec.pass && t.diverged(pc);
    }
    return rec;
  });
}

std::vector<CheckRecord> run_verify_suite(const SuiteConfig& cfg) {
  return {
      check_ma(cfg, DetRoute::kClosedForm),
      check_ma(cfg, DetRoute::kNumeric),
      check_oracle_hessian(cfg),
      check_route_agreement(cfg),
      check_metric_positive(cfg),
      check_x_invariance(cfg),
      check_jacobian_det(cfg),
      check_jacobian_fd(cfg),
      check_curvature_range(cfg),
      check_sharpness(cfg),
      check_lemma5(cfg),
      check_fd_curvature(cfg),
      check_boundary_probe(cfg),
  };
}

}  // namespace chg::cli
