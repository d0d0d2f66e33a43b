#include "chg/kemetric.hpp"

#include <cmath>
#include <string>

#include "chg/autgroup.hpp"
#include "chg/error.hpp"

namespace chg {

double MetricMatrix::quadratic_form(const CVector& v) const {
  if (v.size() != entries.rows()) throw Error(ErrorCode::kInvalidShape, "tangent length mismatch");
  return (v.transpose() * entries * v.conjugate())(0, 0).real();
}

double MetricMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (entries + entries.adjoint()), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

MetricMatrix MetricBlocks::assemble() const {
  const auto m = T11.rows();
  const auto r = T22.rows();
  MetricMatrix out{CMatrix(m + r, m + r)};
  out.entries << T11, T12, T21, T22;
  return out;
}

double generating_function(const DomainParams& params, const Point& point) {
  const AuxXY aux = aux_xy(params, point);
  const double n = params.N();
  return -std::log1p(-aux.X) - std::log(defining_det(point.Z)) / params.K() +
         (params.r() - n) / (1.0 + n) * std::log(params.K());
}

long double generating_function_ext(const DomainParams& params, const CVectorLD& flat) {
  if (flat.size() != params.N()) throw Error(ErrorCode::kInvalidShape, "flat point must have length N");
  const int p = params.p();
  const long double inv_sqrt2 = 1.0L / std::sqrt(2.0L);
  CMatrixLD z(p, p);
  for (int k = 0; k < p; ++k) {
    for (int l = k; l < p; ++l) {
      const ComplexLD v = flat(coord_index(k, l, p));
      z(k, l) = z(l, k) = (k == l) ? v : v * inv_sqrt2;
    }
  }
  const CMatrixLD defining = CMatrixLD::Identity(p, p) - z * z.conjugate();
  const Eigen::LLT<CMatrixLD> llt(defining);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::kDomainMembership, "Z is outside R_II(p)");
  long double log_det = 0.0L;
  for (int i = 0; i < p; ++i) log_det += 2.0L * std::log(std::real(llt.matrixLLT()(i, i)));
  const long double k = params.K();
  const long double x = flat.tail(params.r()).squaredNorm() * std::exp(-log_det / k);
  if (!(x < 1.0L)) throw Error(ErrorCode::kDomainMembership, "|w|^2 exceeds det(I - Z conj(Z))^(1/K)");
  const long double n = params.N();
  return -std::log1p(-x) - log_det / k + (params.r() - n) / (1.0L + n) * std::log(k);
}

MetricMatrix metric_origin(const DomainParams& params, const CVector& wstar) {
  if (wstar.size() != params.r()) throw Error(ErrorCode::kInvalidShape, "w* must have length r");
  const double x = wstar.squaredNorm();
  if (!(x < 1.0)) throw Error(ErrorCode::kDomainMembership, "|w*| must be < 1 on the origin slice");
  const double y = 1.0 / (1.0 - x);
  const int m = params.m();
  const int r = params.r();
  MetricMatrix out{CMatrix::Zero(m + r, m + r)};
  out.entries.topLeftCorner(m, m).diagonal().setConstant(y / params.K());
  out.entries.bottomRightCorner(r, r) =
      y * CMatrix::Identity(r, r) + (y * y) * (wstar.conjugate() * wstar.transpose());
  return out;
}

MetricMatrix metric_pullback(const DomainParams& params, const Point& point) {
  const JacobianBlocks jac = jacobian_at_base(params, point);
  const MetricMatrix origin = metric_origin(params, normalized_fiber(params, point));
  MetricMatrix out{jac.assembled * origin.entries * jac.assembled.adjoint()};
  out.entries = 0.5 * (out.entries + out.entries.adjoint());
  return out;
}

MetricBlocks metric_blocks_closed(const DomainParams& params, const Point& point) {
  const AuxXY aux = aux_xy(params, point);
  const double k = params.K();
  const double d = defining_det(point.Z);
  const double dk = std::pow(d, -1.0 / k);
  const double x = aux.X;
  const double y = aux.Y;
  const int p = params.p();
  const int r = params.r();

  const CMatrix& z = point.Z.matrix();
  // A^T conj(A) = (I - conj(Z) Z)^-1 for the normalizing A at Z0 = Z
  const CMatrix q = (CMatrix::Identity(p, p) - z.conjugate() * z).inverse();
  const CVector e = e_vector(point.Z);
  const CVector& w = point.w;

  MetricBlocks out;
  out.T11 = (y / k) * sym_kron(q) + (x * y * y / (k * k)) * (e * e.adjoint());
  out.T12 = (y * y / k * dk) * (e * w.transpose());
  out.T21 = out.T12.adjoint();
  out.T22 = (y * y * dk * dk) * (w.conjugate() * w.transpose()) + (y * dk) * CMatrix::Identity(r, r);
  return out;
}

double log_det_metric_closed(const DomainParams& params, const Point& point) {
  const AuxXY aux = aux_xy(params, point);
  const double n = params.N();
  const double exponent = params.p() + 1.0 + params.r() / params.K();
  return (params.r() - n) * std::log(params.K()) - (n + 1.0) * std::log1p(-aux.X) -
         exponent * std::log(defining_det(point.Z));
}

double ma_residual(const DomainParams& params, const Point& point, DetRoute route) {
  const double rhs_log = (params.N() + 1.0) * generating_function(params, point);
  double lhs_log = 0.0;
  if (route == DetRoute::kClosedForm) {
    lhs_log = log_det_metric_closed(params, point);
  } else {
    const LogDet ld = log_det(metric_pullback(params, point).entries);
    if (std::abs(ld.phase - Complex(1.0, 0.0)) > 1e-8) {
      throw Error(ErrorCode::kConditioning, "numeric metric determinant is not real positive");
    }
    lhs_log = ld.log_abs;
  }
  return std::abs(std::expm1(lhs_log - rhs_log));
}

namespace {

CVector along(const CVector& x0, const CVector& d, double t) { return x0 + t * d; }

}  // namespace

ProbeTrace boundary_blowup_probe(const DomainParams& params, const Point& interior, const CVector& direction,
                                 int steps, const ProbeConfig& config) {
  if (steps < 2) throw Error(ErrorCode::kInvalidParams, "probe needs at least 2 steps");
  if (direction.size() != params.N()) throw Error(ErrorCode::kInvalidShape, "direction must have length N");
  if (!contains(params, interior)) throw Error(ErrorCode::kDomainMembership, "probe start is outside the domain");

  ProbeTrace trace;
  const double g0 = generating_function(params, interior);
  const double norm = direction.norm();
  if (norm == 0.0) {
    trace.values.assign(static_cast<std::size_t>(steps), g0);
    const AuxXY aux = aux_xy(params, interior);
    trace.final_X = aux.X;
    trace.final_det = defining_det(interior.Z);
    return trace;
  }

  const CVector x0 = to_flat(interior);
  const CVector d = direction / norm;
  auto inside = [&](double t) { return contains(params, point_from_flat(params, along(x0, d, t))); };

  // First sign change of membership on a coarse grid, then bisection.
  double hi = 1.0;
  int doublings = 0;
  while (inside(hi)) {
    hi *= 2.0;
    if (++doublings > 60) throw Error(ErrorCode::kProbe, "ray does not leave the domain");
  }
  constexpr int kScan = 256;
  double lo = 0.0;
  for (int i = 1; i <= kScan; ++i) {
    const double t = hi * i / kScan;
    if (!inside(t)) {
      hi = t;
      break;
    }
    lo = t;
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (inside(mid) ? lo : hi) = mid;
  }
  const double t_exit = lo;

  auto threshold_reached = [&](const Point& pt) {
    return aux_xy(params, pt).X >= config.x_threshold || defining_det(pt.Z) <= config.det_threshold;
  };

  double final_gap = t_exit;
  for (;;) {
    final_gap *= 0.5;
    if (final_gap < t_exit * 1e-15) throw Error(ErrorCode::kProbe, "threshold not reached at probe resolution");
    const Point pt = point_from_flat(params, along(x0, d, t_exit - final_gap));
    if (!contains(params, pt)) throw Error(ErrorCode::kProbe, "membership lost before probe resolution");
    if (threshold_reached(pt)) break;
  }

  const double ratio = std::pow(final_gap / t_exit, 1.0 / (steps - 1));
  trace.values.reserve(static_cast<std::size_t>(steps));
  Point last = interior;
  for (int k = 0; k < steps; ++k) {
    const double gap = (k == steps - 1) ? final_gap : t_exit * std::pow(ratio, k);
    Point pt = k == 0 ? interior : point_from_flat(params, along(x0, d, t_exit - gap));
    if (!contains(params, pt)) {
      throw Error(ErrorCode::kProbe, "probe point " + std::to_string(k) + " left the domain");
    }
    trace.values.push_back(generating_function(params, pt));
    last = std::move(pt);
  }
  trace.final_X = aux_xy(params, last).X;
  trace.final_det = defining_det(last.Z);
  trace.reached_threshold = threshold_reached(last);
  return trace;
}

}  // namespace chg
