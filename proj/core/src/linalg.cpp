#include "chg/linalg.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "chg/error.hpp"

namespace chg {
namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

double entry_scale(const CMatrix& m) { return std::max(1.0, m.cwiseAbs().maxCoeff()); }

// Coordinates of a matrix known to be symmetric up to rounding.
CVector coords_of(const CMatrix& z) {
  const int p = static_cast<int>(z.rows());
  CVector out(coord_dim(p));
  int idx = 0;
  for (int k = 0; k < p; ++k) {
    out(idx++) = z(k, k);
    for (int l = k + 1; l < p; ++l) out(idx++) = 0.5 * (z(k, l) + z(l, k)) * kSqrt2;
  }
  return out;
}

void require_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorCode::kInvalidShape, std::string(what) + " must be a non-empty square matrix");
  }
}

}  // namespace

int order_from_coord_dim(Eigen::Index m) {
  if (m <= 0) throw Error(ErrorCode::kInvalidShape, "empty coordinate vector");
  const int p = static_cast<int>(std::lround((std::sqrt(8.0 * static_cast<double>(m) + 1.0) - 1.0) / 2.0));
  if (coord_dim(p) != m) {
    throw Error(ErrorCode::kInvalidShape,
                "length " + std::to_string(m) + " is not of the form p(p+1)/2");
  }
  return p;
}

int coord_index(int k, int l, int p) {
  if (k < 0 || l < k || l >= p) {
    throw Error(ErrorCode::kIndex, "need 0 <= k <= l < p, got k=" + std::to_string(k) +
                                       " l=" + std::to_string(l) + " p=" + std::to_string(p));
  }
  // rows 0..k-1 contribute p, p-1, ..., p-k+1 entries
  return k * p - k * (k - 1) / 2 + (l - k);
}

SymMatrix SymMatrix::from_matrix(const CMatrix& m, double tol) {
  require_square(m, "symmetric matrix");
  const double defect = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (defect > tol * entry_scale(m)) {
    throw Error(ErrorCode::kAsymmetry, "matrix is not symmetric (defect " + std::to_string(defect) + ")");
  }
  SymMatrix out;
  out.m_ = 0.5 * (m + m.transpose());
  return out;
}

SymMatrix SymMatrix::identity(int p) {
  SymMatrix out(p);
  out.m_.setIdentity();
  return out;
}

SymMatrix SymMatrix::operator*(Complex c) const {
  SymMatrix out;
  out.m_ = m_ * c;
  return out;
}

SymMatrix SymMatrix::operator+(const SymMatrix& other) const {
  if (other.p() != p()) throw Error(ErrorCode::kInvalidShape, "order mismatch in SymMatrix sum");
  SymMatrix out;
  out.m_ = m_ + other.m_;
  return out;
}

SymMatrix vec_to_mat(const CVector& z) {
  const int p = order_from_coord_dim(z.size());
  CMatrix m(p, p);
  int idx = 0;
  for (int k = 0; k < p; ++k) {
    m(k, k) = z(idx++);
    for (int l = k + 1; l < p; ++l) {
      m(k, l) = m(l, k) = z(idx++) / kSqrt2;
    }
  }
  return SymMatrix::from_matrix(m, 0.0);
}

CVector mat_to_vec(const SymMatrix& z) {
  const int p = z.p();
  CVector out(coord_dim(p));
  int idx = 0;
  for (int k = 0; k < p; ++k) {
    out(idx++) = z(k, k);
    for (int l = k + 1; l < p; ++l) out(idx++) = z(k, l) * kSqrt2;
  }
  return out;
}

CVector mat_to_vec(const CMatrix& z) { return mat_to_vec(SymMatrix::from_matrix(z)); }

SymBasisElement basis_sym(int k, int l, int p) {
  if (p < 1) throw Error(ErrorCode::kIndex, "p must be positive");
  coord_index(k, l, p);  // range check
  CMatrix m = CMatrix::Zero(p, p);
  if (k == l) {
    m(k, k) = 1.0;
  } else {
    m(k, l) = m(l, k) = 1.0 / kSqrt2;
  }
  return {k, l, SymMatrix::from_matrix(m, 0.0)};
}

CMatrix sym_kron(const CMatrix& b) {
  require_square(b, "sym_kron argument");
  const int p = static_cast<int>(b.rows());
  const int m = coord_dim(p);
  CMatrix out(m, m);
  for (int k = 0; k < p; ++k) {
    for (int l = k; l < p; ++l) {
      const CMatrix image = b * basis_sym(k, l, p).matrix.matrix() * b.transpose();
      out.col(coord_index(k, l, p)) = coords_of(image);
    }
  }
  return out;
}

CMatrix sym_lie(const CMatrix& left, const CMatrix& right) {
  require_square(left, "sym_lie left factor");
  if (right.rows() != left.rows() || right.cols() != left.cols()) {
    throw Error(ErrorCode::kInvalidShape, "sym_lie factors differ in shape");
  }
  if ((right - left.transpose()).cwiseAbs().maxCoeff() > 1e-12 * entry_scale(left)) {
    throw Error(ErrorCode::kAsymmetry, "sym_lie requires right == left^T");
  }
  const int p = static_cast<int>(left.rows());
  const int m = coord_dim(p);
  CMatrix out(m, m);
  for (int k = 0; k < p; ++k) {
    for (int l = k; l < p; ++l) {
      const CMatrix e = basis_sym(k, l, p).matrix.matrix();
      out.col(coord_index(k, l, p)) = coords_of(left * e + e * right);
    }
  }
  return out;
}

namespace {

Eigen::SelfAdjointEigenSolver<CMatrix> checked_hermitian_eig(const CMatrix& h) {
  require_square(h, "Hermitian matrix");
  if (hermitian_defect(h) > 1e-12 * entry_scale(h)) {
    throw Error(ErrorCode::kAsymmetry, "matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (h + h.adjoint()));
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::kConditioning, "Hermitian eigendecomposition failed");
  }
  if (!(eig.eigenvalues().minCoeff() > 0.0)) {
    throw Error(ErrorCode::kNotPositiveDefinite,
                "smallest eigenvalue " + std::to_string(eig.eigenvalues().minCoeff()));
  }
  return eig;
}

}  // namespace

CMatrix hermitian_sqrt(const CMatrix& h) {
  const auto eig = checked_hermitian_eig(h);
  const CMatrix& v = eig.eigenvectors();
  const CMatrix root = v * eig.eigenvalues().cwiseSqrt().cast<Complex>().asDiagonal() * v.adjoint();
  return 0.5 * (root + root.adjoint());
}

CMatrix hermitian_inv_sqrt(const CMatrix& h) {
  const auto eig = checked_hermitian_eig(h);
  const CMatrix& v = eig.eigenvectors();
  const CMatrix root =
      v * eig.eigenvalues().cwiseSqrt().cwiseInverse().cast<Complex>().asDiagonal() * v.adjoint();
  return 0.5 * (root + root.adjoint());
}

double hermitian_defect(const CMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::kInvalidShape, "Hermitian check needs a square matrix");
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

LogDet log_det(const CMatrix& m) {
  require_square(m, "determinant argument");
  Eigen::PartialPivLU<CMatrix> lu(m);
  const CMatrix& u = lu.matrixLU();
  LogDet out;
  out.phase = Complex(lu.permutationP().determinant(), 0.0);
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const double mag = std::abs(u(i, i));
    if (mag == 0.0 || !std::isfinite(mag)) {
      throw Error(ErrorCode::kSingularity, "singular matrix in determinant");
    }
    out.log_abs += std::log(mag);
    out.phase *= u(i, i) / mag;
  }
  return out;
}

}  // namespace chg
