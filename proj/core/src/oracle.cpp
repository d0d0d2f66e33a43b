#include "chg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "chg/error.hpp"
#include "chg/kemetric.hpp"

namespace chg {
namespace {

constexpr int kMaxShrinks = 3;

void assert_hermitian(const CMatrix& h, double step) {
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if (hermitian_defect(h) > 10.0 * step * step * scale) {
    throw Error(ErrorCode::kConditioning, "finite-difference Hessian is not Hermitian to O(step^2)");
  }
}

void check_cfg(const FDConfig& cfg) {
  if (!(cfg.step > 0.0) || !std::isfinite(cfg.step)) throw Error(ErrorCode::kInvalidParams, "step must be > 0");
  if (cfg.order != 2) throw Error(ErrorCode::kInvalidParams, "only second-order central differences are supported");
}

using FlatFunction = std::function<long double(const CVectorLD&)>;

// Real direction j of C^N: j < N moves Re x_j, j >= N moves Im x_{j-N}.
CVectorLD real_dir(int n, int j) {
  CVectorLD e = CVectorLD::Zero(n);
  if (j < n) {
    e(j) = 1.0L;
  } else {
    e(j - n) = ComplexLD(0.0L, 1.0L);
  }
  return e;
}

FlatFunction from_point_function(const DomainParams& params, const RealFunction& f) {
  return [&params, &f](const CVectorLD& x) -> long double {
    const Point pt = point_from_flat(params, x.cast<Complex>());
    if (!contains(params, pt)) throw Error(ErrorCode::kDomainMembership, "stencil point outside");
    return f(pt);
  };
}

FlatFunction potential(const DomainParams& params) {
  return [&params](const CVectorLD& x) { return generating_function_ext(params, x); };
}

// Evaluates f at x0 + offset; false when the stencil point is outside.
class Stencil {
 public:
  Stencil(const FlatFunction& f, CVectorLD x0) : f_(f), x0_(std::move(x0)) {}

  bool eval(const CVectorLD& offset, long double& out) const {
    try {
      out = f_(x0_ + offset);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kDomainMembership) return false;
      throw;
    }
    return std::isfinite(out);
  }

 private:
  const FlatFunction& f_;
  CVectorLD x0_;
};

// Real Hessian of f over the 2N real coordinates at step h; false if any
// stencil point leaves the domain.
bool real_hessian(const Stencil& s, int n, long double h, Eigen::MatrixXd& out) {
  const int d = 2 * n;
  out.resize(d, d);
  long double f0 = 0.0L;
  if (!s.eval(CVectorLD::Zero(n), f0)) return false;
  std::vector<CVectorLD> dirs;
  dirs.reserve(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) dirs.push_back(real_dir(n, j));
  for (int a = 0; a < d; ++a) {
    const CVectorLD& ea = dirs[static_cast<std::size_t>(a)];
    long double fp = 0.0L, fm = 0.0L;
    if (!s.eval(h * ea, fp) || !s.eval(-h * ea, fm)) return false;
    out(a, a) = static_cast<double>((fp - 2.0L * f0 + fm) / (h * h));
    for (int b = a + 1; b < d; ++b) {
      const CVectorLD& eb = dirs[static_cast<std::size_t>(b)];
      long double fpp = 0.0L, fpm = 0.0L, fmp = 0.0L, fmm = 0.0L;
      if (!s.eval(h * (ea + eb), fpp) || !s.eval(h * (ea - eb), fpm) || !s.eval(h * (eb - ea), fmp) ||
          !s.eval(-h * (ea + eb), fmm)) {
        return false;
      }
      out(a, b) = out(b, a) = static_cast<double>((fpp - fpm - fmp + fmm) / (4.0L * h * h));
    }
  }
  return true;
}

CMatrix mixed_from_real(const Eigen::MatrixXd& hr, int n) {
  CMatrix out(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      out(a, b) = 0.25 * Complex(hr(a, b) + hr(n + a, n + b), hr(a, n + b) - hr(n + a, b));
    }
  }
  return out;
}

CMatrix mixed_at_step(const Stencil& s, int n, long double h) {
  Eigen::MatrixXd hr;
  if (!real_hessian(s, n, h, hr)) return {};
  return mixed_from_real(hr, n);
}

// Mixed Hessian with the shrink rule; `used_step` receives the final step.
// Returns an empty matrix if x0 itself is outside.
CMatrix hessian_with_shrink(const FlatFunction& f, const CVectorLD& x0, int n, double step, bool richardson,
                            double& used_step) {
  const Stencil s(f, x0);
  long double f0 = 0.0L;
  if (!s.eval(CVectorLD::Zero(n), f0)) return {};
  double h = step;
  for (int attempt = 0; attempt <= kMaxShrinks; ++attempt, h /= 10.0) {
    CMatrix coarse = mixed_at_step(s, n, h);
    if (coarse.size() == 0) continue;
    used_step = h;
    if (!richardson) return coarse;
    const CMatrix fine = mixed_at_step(s, n, 0.5L * h);
    if (fine.size() == 0) continue;
    return (4.0 * fine - coarse) / 3.0;
  }
  throw Error(ErrorCode::kStencil, "stencil leaves the domain after " + std::to_string(kMaxShrinks) + " shrinks");
}

CMatrix checked_hessian(const DomainParams& params, const FlatFunction& f, const Point& point, const FDConfig& cfg) {
  check_cfg(cfg);
  if (!contains(params, point)) throw Error(ErrorCode::kDomainMembership, "point is outside the domain");
  double used = cfg.step;
  CMatrix h = hessian_with_shrink(f, to_flat(point).cast<ComplexLD>(), params.N(), cfg.step, cfg.richardson, used);
  assert_hermitian(h, used);
  return h;
}

}  // namespace

FDConfig FDConfig::curvature() {
  FDConfig cfg;
  cfg.step = 1e-2;
  cfg.richardson = true;
  cfg.inner_step = 3e-3;
  return cfg;
}

CMatrix wirtinger_hessian_mixed(const DomainParams& params, const RealFunction& f, const Point& point,
                                const FDConfig& cfg) {
  const FlatFunction flat = from_point_function(params, f);
  return checked_hessian(params, flat, point, cfg);
}

CVector wirtinger_gradient(const DomainParams& params, const RealFunction& f, const Point& point,
                           const FDConfig& cfg) {
  check_cfg(cfg);
  if (!contains(params, point)) throw Error(ErrorCode::kDomainMembership, "point is outside the domain");
  const int n = params.N();
  const FlatFunction flat = from_point_function(params, f);
  const Stencil s(flat, to_flat(point).cast<ComplexLD>());
  long double h = cfg.step;
  for (int attempt = 0; attempt <= kMaxShrinks; ++attempt, h /= 10.0L) {
    CVector g(n);
    bool ok = true;
    for (int a = 0; a < n && ok; ++a) {
      long double xp = 0.0L, xm = 0.0L, yp = 0.0L, ym = 0.0L;
      const CVectorLD ex = real_dir(n, a);
      const CVectorLD ey = real_dir(n, n + a);
      ok = s.eval(h * ex, xp) && s.eval(-h * ex, xm) && s.eval(h * ey, yp) && s.eval(-h * ey, ym);
      if (ok) {
        g(a) = Complex(static_cast<double>((xp - xm) / (4.0L * h)), static_cast<double>((ym - yp) / (4.0L * h)));
      }
    }
    if (ok) return g;
  }
  throw Error(ErrorCode::kStencil, "stencil leaves the domain after " + std::to_string(kMaxShrinks) + " shrinks");
}

CMatrix fd_metric(const DomainParams& params, const Point& point, const FDConfig& cfg) {
  return checked_hessian(params, potential(params), point, cfg);
}

double fd_hsc(const DomainParams& params, const Point& point, const Tangent& tangent, const FDConfig& cfg) {
  check_cfg(cfg);
  if (!(cfg.inner_step > 0.0)) throw Error(ErrorCode::kInvalidParams, "inner_step must be > 0");
  if (tangent.dz.size() != params.m() || tangent.dw.size() != params.r()) {
    throw Error(ErrorCode::kInvalidShape, "tangent shape does not match the domain");
  }
  if (tangent.is_zero()) throw Error(ErrorCode::kDegenerateDirection, "zero tangent");
  if (!contains(params, point)) throw Error(ErrorCode::kDomainMembership, "point is outside the domain");

  const FlatFunction potential_x = potential(params);
  const CVectorLD base = to_flat(point).cast<ComplexLD>();
  const int n = params.N();

  // Work in coordinates x = base + L u with L^T H0 conj(L) = I, H0 a first
  // finite-difference metric at the base point. omega is unchanged by this
  // linear change of variables, with the tangent mapped to L^-1 v.
  double used0 = cfg.inner_step;
  const CMatrix h0 = hessian_with_shrink(potential_x, base, n, cfg.inner_step, true, used0);
  const CMatrix h0_sym = 0.5 * (h0 + h0.adjoint());
  const CMatrixLD lift = hermitian_inv_sqrt(h0_sym).transpose().cast<ComplexLD>();
  const FlatFunction g = [&](const CVectorLD& u) { return potential_x(base + lift * u); };
  const CVectorLD x0 = CVectorLD::Zero(n);
  const CVector vu = hermitian_sqrt(h0_sym).conjugate() * tangent.flat();
  const CVector v = vu / vu.norm();
  const CVectorLD v_ext = v.cast<ComplexLD>();

  auto metric_at = [&](ComplexLD t) {
    double used = cfg.inner_step;
    return hessian_with_shrink(g, x0 + t * v_ext, n, cfg.inner_step, true, used);
  };

  const CMatrix t0 = metric_at(0.0L);
  struct LineDerivs {
    CMatrix d;     // dT/dt
    CMatrix ddb;   // d^2 T / dt dtbar
  };
  auto line_derivs = [&](double s) -> LineDerivs {
    const long double ss = s;
    const CMatrix tp = metric_at(ss), tm = metric_at(-ss);
    const CMatrix ip = metric_at(ComplexLD(0.0L, ss)), im = metric_at(ComplexLD(0.0L, -ss));
    if (tp.size() == 0 || tm.size() == 0 || ip.size() == 0 || im.size() == 0) return {};
    const Complex i(0.0, 1.0);
    LineDerivs out;
    out.d = 0.5 * ((tp - tm) / (2.0 * s) - i * (ip - im) / (2.0 * s));
    out.ddb = (tp + tm + ip + im - 4.0 * t0) / (4.0 * s * s);
    return out;
  };

  LineDerivs ld;
  double s = cfg.step;
  for (int attempt = 0; attempt <= kMaxShrinks; ++attempt, s /= 10.0) {
    ld = line_derivs(s);
    if (ld.d.size() == 0) continue;
    if (cfg.richardson) {
      const LineDerivs fine = line_derivs(0.5 * s);
      if (fine.d.size() == 0) continue;
      ld.d = (4.0 * fine.d - ld.d) / 3.0;
      ld.ddb = (4.0 * fine.ddb - ld.ddb) / 3.0;
    }
    break;
  }
  if (ld.d.size() == 0) {
    throw Error(ErrorCode::kStencil, "curvature stencil leaves the domain after " + std::to_string(kMaxShrinks) +
                                         " shrinks");
  }

  Eigen::LLT<CMatrix> llt(0.5 * (t0 + t0.adjoint()));
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::kConditioning, "metric is not positive definite");

  const auto row = v.transpose();
  const Complex numer =
      (row * (-ld.ddb + ld.d * llt.solve(CMatrix(ld.d.adjoint()))) * v.conjugate())(0, 0);
  const double denom = (row * t0 * v.conjugate())(0, 0).real();
  return numer.real() / (denom * denom);
}

}  // namespace chg
