#pragma once

// Complex symmetric matrix toolkit.
//
// A symmetric p x p matrix Z is identified with its coordinate vector
// z in C^m, m = p(p+1)/2, ordered row-major over the upper triangle
// (z11, z12, ..., z1p, z22, ..., zpp). Diagonal entries are taken as is and
// off-diagonal entries carry a sqrt(2) factor, Z_kl = z_kl / sqrt(2), so that
// |z|^2 == tr(Z conj(Z)).

#include "chg/types.hpp"

namespace chg {

/// Number of coordinates of a symmetric p x p matrix.
constexpr int coord_dim(int p) noexcept { return p * (p + 1) / 2; }

/// Recovers p from m = p(p+1)/2; throws kInvalidShape when m has no such form.
int order_from_coord_dim(Eigen::Index m);

/// Position of the (k, l) entry, 0 <= k <= l < p, in the coordinate vector.
int coord_index(int k, int l, int p);

/// Complex p x p matrix that is exactly symmetric.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int p) : m_(CMatrix::Zero(p, p)) {}

  /// Accepts M when |M - M^T| <= tol * max(1, |M|) entrywise and stores the
  /// symmetric part; otherwise throws kAsymmetry.
  static SymMatrix from_matrix(const CMatrix& m, double tol = 1e-12);
  static SymMatrix identity(int p);

  int p() const noexcept { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const noexcept { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

  SymMatrix operator*(Complex c) const;
  SymMatrix operator+(const SymMatrix& other) const;

 private:
  CMatrix m_;
};

SymMatrix vec_to_mat(const CVector& z);
CVector mat_to_vec(const SymMatrix& z);
/// Throws kAsymmetry when `z` is not symmetric to 1e-12.
CVector mat_to_vec(const CMatrix& z);

struct SymBasisElement {
  int k = 0;
  int l = 0;
  SymMatrix matrix;
};

/// I*_{kl}: E_kk when k == l, (E_kl + E_lk)/sqrt(2) when k < l. Indices are
/// zero-based; requires 0 <= k <= l < p.
SymBasisElement basis_sym(int k, int l, int p);

/// Matrix of the linear map Z -> B Z B^T on symmetric matrices, acting on
/// coordinate column vectors: column (k,l) is mat_to_vec(B I*_{kl} B^T).
/// sym_kron(B1 B2) == sym_kron(B1) sym_kron(B2).
CMatrix sym_kron(const CMatrix& b);

/// Matrix of M -> L M + M R on symmetric matrices in coordinates. Requires the
/// map to preserve symmetry (R == L^T), which is checked.
CMatrix sym_lie(const CMatrix& left, const CMatrix& right);

/// Principal Hermitian positive-definite square root.
CMatrix hermitian_sqrt(const CMatrix& h);

/// Hermitian inverse square root, the same eigendecomposition as hermitian_sqrt.
CMatrix hermitian_inv_sqrt(const CMatrix& h);

/// max |M_ij - conj(M_ji)|.
double hermitian_defect(const CMatrix& m);

/// log|det M| and the unit phase det/|det| from a pivoted LU.
struct LogDet {
  double log_abs = 0.0;
  Complex phase{1.0, 0.0};
};
LogDet log_det(const CMatrix& m);

}  // namespace chg
