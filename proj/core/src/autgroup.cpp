#include "chg/autgroup.hpp"

#include <cmath>

#include "chg/error.hpp"

namespace chg {
namespace {

CMatrix defect(const SymMatrix& z) {
  const CMatrix& m = z.matrix();
  return CMatrix::Identity(z.p(), z.p()) - m * m.conjugate();
}

}  // namespace

Automorphism::Automorphism(const DomainParams& params, const SymMatrix& z0) : params_(params), z0_(z0) {
  if (z0.p() != params.p()) throw Error(ErrorCode::kInvalidShape, "base point has the wrong order");
  if (!in_matrix_domain(z0)) throw Error(ErrorCode::kDomainMembership, "base point is outside R_II(p)");
  const CMatrix h = defect(z0);
  a_ = hermitian_inv_sqrt(h);
  a_conj_inv_ = a_.conjugate().inverse();
  base_det_ = defining_det(z0);
}

Complex log_det_cross(const SymMatrix& z, const SymMatrix& z0) {
  if (z.p() != z0.p()) throw Error(ErrorCode::kInvalidShape, "order mismatch");
  const CMatrix prod = z.matrix() * z0.matrix().conjugate();
  Eigen::ComplexEigenSolver<CMatrix> eig(prod, /*computeEigenvectors=*/false);
  if (eig.info() != Eigen::Success) throw Error(ErrorCode::kConditioning, "eigenvalues of Z conj(Z0) failed");
  Complex sum(0.0, 0.0);
  for (Eigen::Index i = 0; i < prod.rows(); ++i) {
    const Complex factor = 1.0 - eig.eigenvalues()(i);
    if (!(factor.real() > 0.0)) {
      throw Error(ErrorCode::kSingularity, "1 - eigenvalue of Z conj(Z0) left the right half-plane");
    }
    sum += std::log(factor);
  }
  return sum;
}

Point Automorphism::apply(const Point& point) const {
  if (!contains(params_, point)) throw Error(ErrorCode::kDomainMembership, "point is outside the domain");
  const int p = params_.p();
  const CMatrix& z = point.Z.matrix();
  const CMatrix& z0 = z0_.matrix();

  Eigen::PartialPivLU<CMatrix> lu(CMatrix::Identity(p, p) - z0.conjugate() * z);
  if (lu.rcond() < 1e-14) throw Error(ErrorCode::kSingularity, "I - conj(Z0) Z is singular");
  const CMatrix zstar = a_ * (z - z0) * lu.inverse() * a_conj_inv_;

  const double inv_k = 1.0 / params_.K();
  const Complex log_scale = 0.5 * inv_k * std::log(base_det_) - inv_k * log_det_cross(point.Z, z0_);
  return {SymMatrix::from_matrix(zstar, 1e-10), point.w * std::exp(log_scale)};
}

Automorphism normalizing_map(const DomainParams& params, const SymMatrix& z0) {
  return Automorphism(params, z0);
}

JacobianBlocks jacobian_at_base(const DomainParams& params, const Point& point) {
  if (!contains(params, point)) throw Error(ErrorCode::kDomainMembership, "point is outside the domain");
  const int m = params.m();
  const int r = params.r();
  const double d = defining_det(point.Z);
  const double fibre_scale = std::pow(d, -0.5 / params.K());

  // dZ* = A dZ A^T at Z0 = Z; in row-per-source layout that is sym_kron(A)^T.
  const CMatrix a = hermitian_inv_sqrt(defect(point.Z));

  JacobianBlocks out;
  out.dzstar_dz = sym_kron(a).transpose();
  out.dwstar_dz = (fibre_scale / params.K()) * (e_vector(point.Z) * point.w.transpose());
  out.dwstar_dw = fibre_scale * CMatrix::Identity(r, r);
  out.assembled = CMatrix::Zero(m + r, m + r);
  out.assembled.topLeftCorner(m, m) = out.dzstar_dz;
  out.assembled.topRightCorner(m, r) = out.dwstar_dz;
  out.assembled.bottomRightCorner(r, r) = out.dwstar_dw;
  return out;
}

double jacobian_det_sq(const DomainParams& params, const SymMatrix& z) {
  if (z.p() != params.p()) throw Error(ErrorCode::kInvalidShape, "matrix has the wrong order");
  if (!in_matrix_domain(z)) throw Error(ErrorCode::kDomainMembership, "Z is outside R_II(p)");
  const double exponent = params.p() + 1.0 + params.r() / params.K();
  return std::pow(defining_det(z), -exponent);
}

CVector normalized_fiber(const DomainParams& params, const Point& point) {
  if (!contains(params, point)) throw Error(ErrorCode::kDomainMembership, "point is outside the domain");
  return point.w * std::pow(defining_det(point.Z), -0.5 / params.K());
}

}  // namespace chg
