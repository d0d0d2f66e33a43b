#include "chg/domain.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "chg/error.hpp"

namespace chg {

double special_K(int p) {
  if (p < 1) throw Error(ErrorCode::kInvalidParams, "p must be >= 1");
  return p / 2.0 + 1.0 / (p + 1.0);
}

DomainParams::DomainParams(int r, int p, double K) : r_(r), p_(p), K_(K) {
  const double target = special_K(p);
  special_ = (K == target) || std::abs(K - target) <= 1e-15;
}

DomainParams DomainParams::make(int r, int p, double K) {
  if (r < 1) throw Error(ErrorCode::kInvalidParams, "r must be >= 1, got " + std::to_string(r));
  if (p < 1) throw Error(ErrorCode::kInvalidParams, "p must be >= 1, got " + std::to_string(p));
  if (!(K > 0.0) || !std::isfinite(K)) {
    throw Error(ErrorCode::kInvalidParams, "K must be positive and finite");
  }
  return DomainParams(r, p, K);
}

DomainParams DomainParams::with_special_K(int r, int p) {
  if (p < 1) throw Error(ErrorCode::kInvalidParams, "p must be >= 1, got " + std::to_string(p));
  return make(r, p, special_K(p));
}

CVector to_flat(const Point& point) {
  const CVector z = mat_to_vec(point.Z);
  CVector flat(z.size() + point.w.size());
  flat << z, point.w;
  return flat;
}

Point point_from_flat(const DomainParams& params, const CVector& flat) {
  if (flat.size() != params.N()) {
    throw Error(ErrorCode::kInvalidShape, "flat point has length " + std::to_string(flat.size()) +
                                              ", expected N=" + std::to_string(params.N()));
  }
  return {vec_to_mat(flat.head(params.m())), flat.tail(params.r())};
}

Point origin_point(const DomainParams& params, const CVector& w) {
  if (w.size() != params.r()) throw Error(ErrorCode::kInvalidShape, "fibre vector must have length r");
  return {SymMatrix(params.p()), w};
}

namespace {

CMatrix defect_matrix(const SymMatrix& z) {
  const CMatrix& m = z.matrix();
  return CMatrix::Identity(z.p(), z.p()) - m * m.conjugate();
}

void check_shapes(const DomainParams& params, const SymMatrix& z, const CVector& w) {
  if (z.p() != params.p() || w.size() != params.r()) {
    throw Error(ErrorCode::kInvalidShape, "point shape does not match (r=" + std::to_string(params.r()) +
                                              ", p=" + std::to_string(params.p()) + ")");
  }
}

}  // namespace

double defining_det(const SymMatrix& z) {
  const Complex det = defect_matrix(z).determinant();
  if (std::abs(det.imag()) > 1e-12 * std::max(1.0, std::abs(det))) {
    throw Error(ErrorCode::kConditioning, "det(I - Z conj(Z)) has a non-negligible imaginary part");
  }
  return det.real();
}

bool in_matrix_domain(const SymMatrix& z) {
  const CMatrix h = defect_matrix(z);
  Eigen::LLT<CMatrix> llt(0.5 * (h + h.adjoint()));
  return llt.info() == Eigen::Success && defining_det(z) > 0.0;
}

bool contains(const DomainParams& params, const SymMatrix& z, const CVector& w) {
  check_shapes(params, z, w);
  if (!in_matrix_domain(z)) return false;
  return w.squaredNorm() < std::pow(defining_det(z), 1.0 / params.K());
}

bool contains(const DomainParams& params, const Point& point) {
  return contains(params, point.Z, point.w);
}

AuxXY aux_xy(const DomainParams& params, const Point& point) {
  if (!contains(params, point)) throw Error(ErrorCode::kDomainMembership, "point is outside the domain");
  const double d = defining_det(point.Z);
  const double x = point.w.squaredNorm() * std::pow(d, -1.0 / params.K());
  return {x, 1.0 / (1.0 - x)};
}

CVector e_vector(const SymMatrix& z) {
  const int p = z.p();
  Eigen::PartialPivLU<CMatrix> lu(defect_matrix(z));
  if (!(std::abs(lu.determinant()) > 1e-300) || lu.rcond() < 1e-14) {
    throw Error(ErrorCode::kSingularity, "I - Z conj(Z) is singular");
  }
  // tr(P I*_{kl} conj(Z)) = tr(I*_{kl} M) with M = conj(Z) P
  const CMatrix m = z.matrix().conjugate() * lu.inverse();
  CVector out(coord_dim(p));
  int idx = 0;
  for (int k = 0; k < p; ++k) {
    out(idx++) = m(k, k);
    for (int l = k + 1; l < p; ++l) out(idx++) = (m(k, l) + m(l, k)) / std::numbers::sqrt2;
  }
  return out;
}

SymMatrix random_symmetric(int p, Rng& rng) {
  std::normal_distribution<double> gauss;
  CMatrix m(p, p);
  for (int k = 0; k < p; ++k) {
    for (int l = k; l < p; ++l) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      m(k, l) = m(l, k) = Complex(re, im);
    }
  }
  return SymMatrix::from_matrix(m, 0.0);
}

CVector random_complex(int n, Rng& rng) {
  std::normal_distribution<double> gauss;
  CVector v(n);
  for (int i = 0; i < n; ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    v(i) = Complex(re, im);
  }
  return v;
}

double random_unit(Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double u = 0.0;
  while (u == 0.0) u = unit(rng);
  return u;
}

std::vector<Point> sample_interior(const DomainParams& params, std::uint64_t seed, int count,
                                   const SampleOptions& options) {
  if (count < 1) throw Error(ErrorCode::kInvalidParams, "sample count must be >= 1");
  if (!(options.cap > 0.0 && options.cap < 1.0)) {
    throw Error(ErrorCode::kInvalidParams, "sampling cap must lie in (0, 1)");
  }
  Rng rng(seed);
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(count));
  while (static_cast<int>(out.size()) < count) {
    const SymMatrix raw = random_symmetric(params.p(), rng);
    const double sigma_max = Eigen::JacobiSVD<CMatrix>(raw.matrix()).singularValues()(0);
    const double target = options.cap * random_unit(rng);
    const SymMatrix z = raw * Complex(target / sigma_max, 0.0);

    CVector dir = random_complex(params.r(), rng);
    dir /= dir.norm();
    const double radius = std::pow(defining_det(z), 1.0 / (2.0 * params.K()));
    const CVector w = dir * (options.cap * random_unit(rng) * radius);

    Point pt{z, w};
    // Rounding can push the near-boundary cap onto the boundary; redraw then.
    if (contains(params, pt)) out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace chg
