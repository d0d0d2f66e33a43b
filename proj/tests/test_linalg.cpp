#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "chg/domain.hpp"
#include "chg/error.hpp"
#include "chg/linalg.hpp"

using namespace chg;

namespace {

const double kSqrt2 = std::sqrt(2.0);

CVector vec(std::initializer_list<Complex> v) {
  CVector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (Complex c : v) out(i++) = c;
  return out;
}

CMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

void expect_code(ErrorCode code, const std::function<void()>& fn) {
  try {
    fn();
    FAIL() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace

TEST(CoordDim, Values) {
  EXPECT_EQ(coord_dim(1), 1);
  EXPECT_EQ(coord_dim(2), 3);
  EXPECT_EQ(coord_dim(3), 6);
  EXPECT_EQ(order_from_coord_dim(6), 3);
  expect_code(ErrorCode::kInvalidShape, [] { order_from_coord_dim(4); });
}

TEST(CoordIndex, RowMajorUpperTriangle) {
  EXPECT_EQ(coord_index(0, 0, 3), 0);
  EXPECT_EQ(coord_index(0, 2, 3), 2);
  EXPECT_EQ(coord_index(1, 1, 3), 3);
  EXPECT_EQ(coord_index(2, 2, 3), 5);
  expect_code(ErrorCode::kIndex, [] { coord_index(1, 0, 3); });
  expect_code(ErrorCode::kIndex, [] { coord_index(0, 3, 3); });
}

TEST(VecToMat, Scalar) {
  const SymMatrix z = vec_to_mat(vec({0.3}));
  ASSERT_EQ(z.p(), 1);
  EXPECT_EQ(z(0, 0), Complex(0.3));
}

TEST(VecToMat, SqrtTwoConvention) {
  const SymMatrix z = vec_to_mat(vec({1.0, kSqrt2, 2.0}));
  EXPECT_NEAR(std::abs(z(0, 0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(z(0, 1) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(z(1, 0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(z(1, 1) - 2.0), 0.0, 1e-15);
}

TEST(VecToMat, BadLength) {
  expect_code(ErrorCode::kInvalidShape, [] { vec_to_mat(CVector::Zero(2)); });
}

TEST(VecToMat, NormMatchesTrace) {
  Rng rng(11);
  for (int p = 1; p <= 4; ++p) {
    for (int i = 0; i < 20; ++i) {
      const CVector z = random_complex(coord_dim(p), rng);
      const CMatrix m = vec_to_mat(z).matrix();
      EXPECT_NEAR((m * m.conjugate()).trace().real(), z.squaredNorm(), 1e-12 * z.squaredNorm());
    }
  }
}

TEST(MatToVec, Inverse) {
  EXPECT_NEAR(std::abs(mat_to_vec(vec_to_mat(vec({0.3})))(0) - 0.3), 0.0, 1e-16);
  const CVector z = mat_to_vec(SymMatrix::from_matrix(mat2(1, 1, 1, 2)));
  EXPECT_NEAR((z - vec({1.0, kSqrt2, 2.0})).norm(), 0.0, 1e-15);
}

TEST(MatToVec, RoundTrip) {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const int p = 1 + i % 4;
    const SymMatrix z = random_symmetric(p, rng);
    EXPECT_NEAR((vec_to_mat(mat_to_vec(z)).matrix() - z.matrix()).cwiseAbs().maxCoeff(), 0.0, 1e-15);
  }
}

TEST(MatToVec, RejectsAsymmetry) {
  expect_code(ErrorCode::kAsymmetry, [] { mat_to_vec(mat2(1, 0.5, 0.4, 2)); });
  expect_code(ErrorCode::kAsymmetry, [] { SymMatrix::from_matrix(mat2(1, 0.5, 0.4, 2)); });
}

TEST(BasisSym, Elements) {
  const SymBasisElement e11 = basis_sym(0, 0, 2);
  EXPECT_EQ(e11.matrix.matrix(), mat2(1, 0, 0, 0));
  const SymBasisElement e12 = basis_sym(0, 1, 2);
  EXPECT_NEAR((e12.matrix.matrix() - mat2(0, 1 / kSqrt2, 1 / kSqrt2, 0)).norm(), 0.0, 1e-16);
  expect_code(ErrorCode::kIndex, [] { basis_sym(1, 0, 2); });
  expect_code(ErrorCode::kIndex, [] { basis_sym(0, 2, 2); });
}

TEST(BasisSym, TraceOrthonormal) {
  for (int p = 1; p <= 4; ++p) {
    std::vector<SymBasisElement> basis;
    for (int k = 0; k < p; ++k) {
      for (int l = k; l < p; ++l) basis.push_back(basis_sym(k, l, p));
    }
    for (const auto& a : basis) {
      for (const auto& b : basis) {
        const Complex ip = (a.matrix.matrix() * b.matrix.matrix().adjoint()).trace();
        const double expected = (a.k == b.k && a.l == b.l) ? 1.0 : 0.0;
        EXPECT_NEAR(std::abs(ip - expected), 0.0, 1e-15);
      }
    }
  }
}

TEST(SymKron, Identity) {
  for (int p = 1; p <= 4; ++p) {
    EXPECT_NEAR((sym_kron(CMatrix::Identity(p, p)) - CMatrix::Identity(coord_dim(p), coord_dim(p))).norm(), 0.0,
                1e-15);
  }
}

TEST(SymKron, ScalarAndDiagonal) {
  const Complex a(0.3, 0.4), b(-1.1, 0.2);
  CMatrix s(1, 1);
  s << a;
  EXPECT_NEAR(std::abs(sym_kron(s)(0, 0) - a * a), 0.0, 1e-15);
  const CMatrix d = sym_kron(mat2(a, 0, 0, b));
  CMatrix expected = CMatrix::Zero(3, 3);
  expected.diagonal() << a * a, a * b, b * b;
  EXPECT_NEAR((d - expected).norm(), 0.0, 1e-15);
}

TEST(SymKron, ActsAsCongruence) {
  Rng rng(9);
  for (int p = 1; p <= 4; ++p) {
    CMatrix b(p, p);
    for (int j = 0; j < p; ++j) b.col(j) = random_complex(p, rng);
    const SymMatrix z = random_symmetric(p, rng);
    const CVector lhs = sym_kron(b) * mat_to_vec(z);
    const CVector rhs = mat_to_vec(SymMatrix::from_matrix(b * z.matrix() * b.transpose(), 1e-10));
    EXPECT_NEAR((lhs - rhs).norm(), 0.0, 1e-12 * rhs.norm());
    CMatrix c(p, p);
    for (int j = 0; j < p; ++j) c.col(j) = random_complex(p, rng);
    EXPECT_NEAR((sym_kron(b * c) - sym_kron(b) * sym_kron(c)).norm(), 0.0, 1e-11 * sym_kron(b * c).norm());
  }
}

TEST(SymLie, MatchesMap) {
  Rng rng(21);
  const int p = 3;
  CMatrix l(p, p);
  for (int j = 0; j < p; ++j) l.col(j) = random_complex(p, rng);
  const SymMatrix z = random_symmetric(p, rng);
  const CVector lhs = sym_lie(l, l.transpose()) * mat_to_vec(z);
  const CVector rhs = mat_to_vec(SymMatrix::from_matrix(l * z.matrix() + z.matrix() * l.transpose(), 1e-10));
  EXPECT_NEAR((lhs - rhs).norm(), 0.0, 1e-12 * rhs.norm());
  expect_code(ErrorCode::kAsymmetry, [&] { sym_lie(l, l); });
}

TEST(HermitianSqrt, Examples) {
  EXPECT_NEAR((hermitian_sqrt(CMatrix::Identity(3, 3)) - CMatrix::Identity(3, 3)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((hermitian_sqrt(mat2(4, 0, 0, 1)) - mat2(2, 0, 0, 1)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((hermitian_inv_sqrt(mat2(4, 0, 0, 1)) - mat2(0.5, 0, 0, 1)).norm(), 0.0, 1e-15);
}

TEST(HermitianSqrt, Reconstruction) {
  Rng rng(3);
  std::uniform_real_distribution<double> eig(0.1, 10.0);
  for (int i = 0; i < 50; ++i) {
    const int p = 1 + i % 4;
    CMatrix g(p, p);
    for (int j = 0; j < p; ++j) g.col(j) = random_complex(p, rng);
    const Eigen::HouseholderQR<CMatrix> qr(g);
    const CMatrix q = qr.householderQ();
    RVector lambda(p);
    for (int j = 0; j < p; ++j) lambda(j) = eig(rng);
    const CMatrix h = q * lambda.cast<Complex>().asDiagonal() * q.adjoint();
    const CMatrix a = hermitian_sqrt(h);
    EXPECT_NEAR((a * a - h).cwiseAbs().maxCoeff(), 0.0, 1e-10);
    EXPECT_LE(hermitian_defect(a), 1e-12);
    EXPECT_NEAR((hermitian_inv_sqrt(h) * a - CMatrix::Identity(p, p)).cwiseAbs().maxCoeff(), 0.0, 1e-10);
  }
}

TEST(HermitianSqrt, RejectsIndefinite) {
  expect_code(ErrorCode::kNotPositiveDefinite, [] { hermitian_sqrt(mat2(1, 0, 0, -1)); });
  expect_code(ErrorCode::kNotPositiveDefinite, [] { hermitian_inv_sqrt(mat2(1, 0, 0, 0)); });
}

TEST(LogDet, MatchesDeterminant) {
  Rng rng(17);
  for (int p = 1; p <= 5; ++p) {
    CMatrix m(p, p);
    for (int j = 0; j < p; ++j) m.col(j) = random_complex(p, rng);
    const Complex det = m.determinant();
    const LogDet ld = log_det(m);
    EXPECT_NEAR(ld.log_abs, std::log(std::abs(det)), 1e-12);
    EXPECT_NEAR(std::abs(ld.phase - det / std::abs(det)), 0.0, 1e-12);
  }
}
