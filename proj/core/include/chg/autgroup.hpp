#pragma once

// Holomorphic automorphisms of Y_II(r, p; K) that move a base point Z0 of the
// matrix factor to the origin:
//
//   Z* = A (Z - Z0) (I - conj(Z0) Z)^-1 conj(A)^-1
//   w* = w det(I - Z0 conj(Z0))^(1/(2K)) det(I - Z conj(Z0))^(-1/K)
//
// with A^H A = (I - Z0 conj(Z0))^-1. A is fixed as the principal Hermitian root.

#include "chg/domain.hpp"

namespace chg {

class Automorphism {
 public:
  /// Throws kDomainMembership when z0 is not in R_II(p).
  Automorphism(const DomainParams& params, const SymMatrix& z0);

  const DomainParams& params() const noexcept { return params_; }
  const SymMatrix& base() const noexcept { return z0_; }
  const CMatrix& A() const noexcept { return a_; }

  /// Image of a domain point. Throws kDomainMembership for points outside the
  /// domain and kSingularity if I - conj(Z0) Z is singular.
  Point apply(const Point& point) const;

 private:
  DomainParams params_;
  SymMatrix z0_;
  CMatrix a_;
  CMatrix a_conj_inv_;
  double base_det_ = 1.0;
};

/// The automorphism sending (Z0, w) to (0, w*) for every w.
Automorphism normalizing_map(const DomainParams& params, const SymMatrix& z0);

/// log det(I - Z conj(Z0)) on the branch that is real at Z = Z0, computed as
/// sum_i Log(1 - nu_i) over the eigenvalues nu_i of Z conj(Z0). Every factor
/// has positive real part because the spectral radius of Z conj(Z0) is below 1
/// on R_II(p) x R_II(p), so this is the continuous branch on the whole domain.
Complex log_det_cross(const SymMatrix& z, const SymMatrix& z0);

/// Jacobian of the normalizing automorphism F0 (base Z0 = Z) at its base
/// point, rows indexed by source coordinates (z, w) and columns by target
/// coordinates (z*, w*):
///
///   J = [ dz*/dz  dw*/dz ]
///       [   0     dw*/dw ]
struct JacobianBlocks {
  CMatrix dzstar_dz;   ///< m x m, sym_kron(A)^T
  CMatrix dwstar_dz;   ///< m x r, (1/K) det^(-1/(2K)) E(Z)^T w
  CMatrix dwstar_dw;   ///< r x r, det^(-1/(2K)) I
  CMatrix assembled;   ///< N x N
};

JacobianBlocks jacobian_at_base(const DomainParams& params, const Point& point);

/// det(I - Z conj(Z))^-(p + 1 + r/K), which equals |det J_{F0}|^2.
double jacobian_det_sq(const DomainParams& params, const SymMatrix& z);

/// w* = w det(I - Z conj(Z))^(-1/(2K)), the fibre coordinate of F0(Z, w).
CVector normalized_fiber(const DomainParams& params, const Point& point);

}  // namespace chg
