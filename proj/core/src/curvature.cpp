#include "chg/curvature.hpp"

#include <cmath>

#include "chg/autgroup.hpp"
#include "chg/error.hpp"

namespace chg {
namespace {

void check_tangent(const DomainParams& params, const Tangent& t) {
  if (t.dz.size() != params.m() || t.dw.size() != params.r()) {
    throw Error(ErrorCode::kInvalidShape, "tangent shape does not match the domain");
  }
  if (t.is_zero()) throw Error(ErrorCode::kDegenerateDirection, "zero tangent");
}

struct OriginScalars {
  double x, y;
  double dz2, dw2;
  double wdw2;  // |conj(w*) . dw|^2
};

OriginScalars origin_scalars(const DomainParams& params, const CVector& wstar, const Tangent& t) {
  if (wstar.size() != params.r()) throw Error(ErrorCode::kInvalidShape, "w* must have length r");
  const double x = wstar.squaredNorm();
  if (!(x < 1.0)) throw Error(ErrorCode::kDomainMembership, "|w*| must be < 1 on the origin slice");
  return {x, 1.0 / (1.0 - x), t.dz.squaredNorm(), t.dw.squaredNorm(), std::norm(wstar.dot(t.dw))};
}

// tr(dZ conj(dZ) dZ conj(dZ)); real because dZ conj(dZ) = dZ dZ^H.
double quartic_trace(const SymMatrix& z) {
  const CMatrix& m = z.matrix();
  const CMatrix h = m * m.conjugate();
  const Complex tr = (h * h).trace();
  if (std::abs(tr.imag()) > 1e-10 * std::max(1e-300, std::abs(tr))) {
    throw Error(ErrorCode::kConditioning, "quartic trace has a non-negligible imaginary part");
  }
  return tr.real();
}

}  // namespace

CVector Tangent::flat() const {
  CVector v(dz.size() + dw.size());
  v << dz, dw;
  return v;
}

Tangent Tangent::from_flat(const DomainParams& params, const CVector& v) {
  if (v.size() != params.N()) throw Error(ErrorCode::kInvalidShape, "tangent must have length N");
  return {v.head(params.m()), v.tail(params.r())};
}

CMatrix CurvatureBlocks::assemble() const {
  CMatrix out(R11.rows() + R22.rows(), R11.cols() + R22.cols());
  out << R11, R12, R21, R22;
  return out;
}

CurvatureBlocks curvature_blocks_origin(const DomainParams& params, const CVector& wstar, const Tangent& tangent) {
  check_tangent(params, tangent);
  const OriginScalars s = origin_scalars(params, wstar, tangent);
  const double k = params.K();
  const int m = params.m();
  const int r = params.r();
  const CVector& dz = tangent.dz;
  const CVector& dw = tangent.dw;
  const CVector& w = wstar;
  const CMatrix im = CMatrix::Identity(m, m);
  const CMatrix ir = CMatrix::Identity(r, r);

  // dbar d of sym_kron((I - conj(Z) Z)^-1) at Z = 0: M -> conj(dZ) dZ M + M dZ conj(dZ)
  const CMatrix dzm = vec_to_mat(dz).matrix();
  const CMatrix second = sym_lie(dzm.conjugate() * dzm, dzm * dzm.conjugate());

  const Complex wbar_dw = w.dot(dw);                        // sum conj(w_i) dw_i
  const Complex w_dwbar = std::conj(wbar_dw);               // sum w_i conj(dw_i)
  const CMatrix wbar_w = w.conjugate() * w.transpose();      // conj(w)^T w

  CurvatureBlocks out;
  out.R11 = -(s.y / k) * (s.y * s.y * s.wdw2 * im +
                          (s.x * s.y / k) * (dz.conjugate() * dz.transpose() + s.dz2 * im) +
                          s.y * s.dw2 * im + second);
  out.R12 = -(s.y * s.y / k) * (s.y * wbar_dw * (dz.conjugate() * w.transpose()) + dz.conjugate() * dw.transpose());
  out.R21 = out.R12.adjoint();
  out.R22 = -(s.y * s.y) *
            ((s.y / k) * s.dz2 * wbar_w + (s.dz2 / k) * ir + s.dw2 * ir + dw.conjugate() * dw.transpose() +
             s.y * (s.wdw2 * ir + w_dwbar * (w.conjugate() * dw.transpose()) +
                    wbar_dw * (dw.conjugate() * w.transpose()) + s.dw2 * wbar_w) +
             2.0 * s.y * s.y * s.wdw2 * wbar_w);
  return out;
}

double hsc_origin(const DomainParams& params, const CVector& wstar, const Tangent& tangent) {
  check_tangent(params, tangent);
  const OriginScalars s = origin_scalars(params, wstar, tangent);
  const double k = params.K();
  const double quartic = quartic_trace(vec_to_mat(tangent.dz));
  const double denom = s.y / k * s.dz2 + s.y * s.y * s.wdw2 + s.y * s.dw2;
  const double numer = 2.0 * s.y / (k * k) * s.dz2 * s.dz2 - 2.0 * s.y / k * quartic;
  return -2.0 + numer / (denom * denom);
}

Tangent transport_tangent(const DomainParams& params, const Point& point, const Tangent& tangent) {
  if (tangent.dz.size() != params.m() || tangent.dw.size() != params.r()) {
    throw Error(ErrorCode::kInvalidShape, "tangent shape does not match the domain");
  }
  const CMatrix j = jacobian_at_base(params, point).assembled;
  return Tangent::from_flat(params, j.transpose() * tangent.flat());
}

double hsc(const DomainParams& params, const Point& point, const Tangent& tangent) {
  check_tangent(params, tangent);
  return hsc_origin(params, normalized_fiber(params, point), transport_tangent(params, point, tangent));
}

CurvatureBounds curvature_bounds(const DomainParams& params) {
  return {-2.0 * params.K(), -2.0 * params.K() / params.p()};
}

std::pair<Tangent, Tangent> sharp_directions(int p, int r) {
  if (p < 1 || r < 1) throw Error(ErrorCode::kInvalidParams, "p and r must be >= 1");
  const CVector zero_w = CVector::Zero(r);
  Tangent rank_one{mat_to_vec(basis_sym(0, 0, p).matrix), zero_w};
  Tangent scalar{mat_to_vec(SymMatrix::identity(p)), zero_w};
  return {rank_one, scalar};
}

Lemma5Terms lemma5_terms(const SymMatrix& z) {
  const CMatrix& m = z.matrix();
  const double quad = (m * m.conjugate()).trace().real();
  const double quartic = quartic_trace(z);
  return {quartic, quad * quad, z.p() * quartic};
}

}  // namespace chg
