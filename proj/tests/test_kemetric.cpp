#include <gtest/gtest.h>

#include <cmath>

#include "chg/error.hpp"
#include "chg/kemetric.hpp"

using namespace chg;

namespace {

SymMatrix scalar(Complex v) {
  CMatrix m(1, 1);
  m << v;
  return SymMatrix::from_matrix(m);
}

CVector vec1(Complex v) {
  CVector out(1);
  out << v;
  return out;
}

double rel_diff(const CMatrix& a, const CMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
}

const std::vector<std::pair<int, int>> kConfigs = {{1, 1}, {2, 1}, {2, 2}, {3, 1}};

}  // namespace

TEST(GeneratingFunction, OriginValues) {
  EXPECT_NEAR(generating_function(DomainParams::make(1, 1, 1.0), {scalar(0.0), vec1(0.0)}), 0.0, 1e-16);
  const DomainParams d = DomainParams::with_special_K(1, 2);
  EXPECT_NEAR(generating_function(d, origin_point(d, vec1(0.0))), -0.172609, 1e-6);
  EXPECT_NEAR(generating_function(d, origin_point(d, vec1(0.0))), -0.6 * std::log(4.0 / 3.0), 1e-15);
}

TEST(GeneratingFunction, BallCase) {
  const DomainParams d = DomainParams::make(1, 1, 1.0);
  for (const Point& pt : sample_interior(d, 3, 100)) {
    const double norm = std::norm(pt.Z(0, 0)) + pt.w.squaredNorm();
    EXPECT_NEAR(generating_function(d, pt), -std::log1p(-norm), 1e-12);
  }
}

TEST(GeneratingFunction, ExtendedPrecisionAgrees) {
  for (auto [p, r] : kConfigs) {
    const DomainParams d = DomainParams::with_special_K(r, p);
    for (const Point& pt : sample_interior(d, 4, 50)) {
      const double ext = static_cast<double>(generating_function_ext(d, to_flat(pt).cast<ComplexLD>()));
      EXPECT_NEAR(ext, generating_function(d, pt), 1e-12 * std::max(1.0, std::abs(ext)));
    }
  }
  const DomainParams d = DomainParams::make(1, 1, 1.0);
  CVectorLD outside(2);
  outside << ComplexLD(0.0L), ComplexLD(1.0L);
  EXPECT_THROW(generating_function_ext(d, outside), Error);
}

TEST(MetricOrigin, Values) {
  const DomainParams d = DomainParams::with_special_K(1, 2);
  const MetricMatrix t = metric_origin(d, vec1(0.0));
  CMatrix expected = CMatrix::Zero(4, 4);
  expected.diagonal() << 0.75, 0.75, 0.75, 1.0;
  EXPECT_NEAR((t.entries - expected).norm(), 0.0, 1e-15);
  const MetricMatrix half = metric_origin(d, vec1(std::sqrt(0.5)));
  EXPECT_NEAR(std::abs(half.entries(3, 3) - 4.0), 0.0, 1e-14);
  try {
    metric_origin(d, vec1(1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDomainMembership);
  }
}

TEST(MetricOrigin, Determinant) {
  for (auto [p, r] : kConfigs) {
    const DomainParams d = DomainParams::with_special_K(r, p);
    for (const Point& pt : sample_interior(d, 5, 50)) {
      const double x = pt.w.squaredNorm() < 1.0 ? pt.w.squaredNorm() : 0.0;
      const CVector w = pt.w.squaredNorm() < 1.0 ? pt.w : CVector::Zero(r);
      const LogDet ld = log_det(metric_origin(d, w).entries);
      const double expected = (r - d.N()) * std::log(d.K()) - (d.N() + 1.0) * std::log1p(-x);
      EXPECT_NEAR(ld.log_abs, expected, 1e-12);
    }
  }
}

TEST(MetricPullback, EqualsOriginAtZero) {
  const DomainParams d = DomainParams::with_special_K(2, 2);
  CVector w(2);
  w << Complex(0.3, 0.1), Complex(-0.2, 0.4);
  EXPECT_LE(rel_diff(metric_pullback(d, origin_point(d, w)).entries, metric_origin(d, w).entries), 1e-15);
}

TEST(MetricPullback, HermitianPositiveDefinite) {
  for (auto [p, r] : kConfigs) {
    const DomainParams d = DomainParams::with_special_K(r, p);
    for (const Point& pt : sample_interior(d, 6, 200)) {
      const MetricMatrix t = metric_pullback(d, pt);
      EXPECT_LE(hermitian_defect(t.entries), 1e-12 * t.entries.cwiseAbs().maxCoeff());
      EXPECT_GT(t.min_eigenvalue(), 0.0);
    }
  }
}

TEST(MetricBlocksClosed, Examples) {
  const DomainParams d = DomainParams::with_special_K(1, 2);
  const Point origin = origin_point(d, vec1(Complex(0.2, 0.3)));
  const MetricBlocks b = metric_blocks_closed(d, origin);
  const double y = aux_xy(d, origin).Y;
  EXPECT_NEAR((b.T11 - (y / d.K()) * CMatrix::Identity(3, 3)).norm(), 0.0, 1e-15);
  EXPECT_EQ(b.T12.norm(), 0.0);

  const DomainParams ball = DomainParams::make(1, 1, 1.0);
  const MetricBlocks bb = metric_blocks_closed(ball, {scalar(0.5), vec1(0.5)});
  EXPECT_NEAR(std::abs(bb.T22(0, 0) - 3.0), 0.0, 1e-14);
}

TEST(MetricBlocksClosed, AgreesWithPullback) {
  for (auto [p, r] : kConfigs) {
    const DomainParams d = DomainParams::with_special_K(r, p);
    for (const Point& pt : sample_interior(d, 7, 200)) {
      const MetricBlocks b = metric_blocks_closed(d, pt);
      EXPECT_NEAR((b.T21 - b.T12.adjoint()).norm(), 0.0, 1e-12);
      EXPECT_LE(rel_diff(b.assemble().entries, metric_pullback(d, pt).entries), 1e-8);
    }
  }
}

TEST(MetricBlocksClosed, AgreesOffSpecialK) {
  const DomainParams d = DomainParams::make(2, 2, 0.7);
  for (const Point& pt : sample_interior(d, 8, 100)) {
    EXPECT_LE(rel_diff(metric_blocks_closed(d, pt).assemble().entries, metric_pullback(d, pt).entries), 1e-8);
  }
}

TEST(MongeAmpere, SpecialK) {
  for (auto [p, r] : kConfigs) {
    const DomainParams d = DomainParams::with_special_K(r, p);
    for (const Point& pt : sample_interior(d, 9, 300)) {
      EXPECT_LE(ma_residual(d, pt, DetRoute::kClosedForm), 1e-8);
      EXPECT_LE(ma_residual(d, pt, DetRoute::kNumeric), 1e-6);
    }
  }
}

TEST(MongeAmpere, ZeroResidualAtOriginForAnyK) {
  for (double k : {0.5, 1.0, 2.5}) {
    const DomainParams d = DomainParams::make(1, 2, k);
    EXPECT_NEAR(ma_residual(d, origin_point(d, vec1(0.3))), 0.0, 1e-14);
  }
}

TEST(MongeAmpere, NegativeControl) {
  const DomainParams d = DomainParams::make(1, 2, 1.0);
  CMatrix z = CMatrix::Zero(2, 2);
  z(0, 0) = 0.5;
  EXPECT_GT(ma_residual(d, {SymMatrix::from_matrix(z), vec1(0.0)}), 1e-3);
}

TEST(BoundaryProbe, FibreDirection) {
  const DomainParams d = DomainParams::with_special_K(1, 2);
  const Point start = sample_interior(d, 10, 1)[0];
  CVector dir = CVector::Zero(d.N());
  dir(3) = Complex(0.6, 0.8);
  const ProbeTrace t = boundary_blowup_probe(d, start, dir, 40);
  ASSERT_EQ(t.values.size(), 40u);
  EXPECT_TRUE(t.reached_threshold);
  EXPECT_GE(t.final_X, 1.0 - 1e-9);
  EXPECT_GT(t.values.back(), t.values.front() + 10.0);
  EXPECT_TRUE(t.diverged(ProbeConfig{}));
}

TEST(BoundaryProbe, MatrixDirection) {
  const DomainParams d = DomainParams::with_special_K(1, 3);
  CVector dir = CVector::Zero(d.N());
  Rng rng(4);
  dir.head(d.m()) = random_complex(d.m(), rng);
  const ProbeTrace t = boundary_blowup_probe(d, origin_point(d, vec1(0.0)), dir, 30);
  EXPECT_TRUE(t.reached_threshold);
  EXPECT_LE(t.final_det, 1e-9);
  EXPECT_GT(t.values.back(), t.values.front() + 10.0);
}

TEST(BoundaryProbe, Stationary) {
  const DomainParams d = DomainParams::with_special_K(1, 2);
  const Point start = sample_interior(d, 11, 1)[0];
  const ProbeTrace t = boundary_blowup_probe(d, start, CVector::Zero(d.N()), 5);
  ASSERT_EQ(t.values.size(), 5u);
  for (double v : t.values) {
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_EQ(v, t.values.front());
  }
  EXPECT_FALSE(t.reached_threshold);
}

TEST(BoundaryProbe, RejectsBadInput) {
  const DomainParams d = DomainParams::with_special_K(1, 2);
  EXPECT_THROW(boundary_blowup_probe(d, origin_point(d, vec1(2.0)), CVector::Ones(4), 5), Error);
  EXPECT_THROW(boundary_blowup_probe(d, origin_point(d, vec1(0.0)), CVector::Ones(3), 5), Error);
  EXPECT_THROW(boundary_blowup_probe(d, origin_point(d, vec1(0.0)), CVector::Ones(4), 1), Error);
}
