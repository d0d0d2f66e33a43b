#pragma once

// The Cartan-Hartogs domain
//
//   Y_II(r, p; K) = { (Z, w) : Z in R_II(p), w in C^r, |w|^2 < det(I - Z conj(Z))^(1/K) }
//
// where R_II(p) is the set of complex symmetric p x p matrices with
// I - Z conj(Z) positive definite. Points are also handled as flat vectors
// (z, w) in C^N, N = p(p+1)/2 + r, with z the coordinate vector of Z.

#include <cstdint>
#include <random>
#include <vector>

#include "chg/linalg.hpp"

namespace chg {

/// p/2 + 1/(p+1), the parameter value for which the closed-form potential
/// solves the Monge-Ampere equation.
double special_K(int p);

class DomainParams {
 public:
  /// Throws kInvalidParams unless r >= 1, p >= 1 and K > 0 (finite).
  static DomainParams make(int r, int p, double K);
  static DomainParams with_special_K(int r, int p);

  int r() const noexcept { return r_; }
  int p() const noexcept { return p_; }
  double K() const noexcept { return K_; }
  int m() const noexcept { return coord_dim(p_); }
  int N() const noexcept { return m() + r_; }
  /// K equals special_K(p), exactly or to 1e-15.
  bool special() const noexcept { return special_; }

 private:
  DomainParams(int r, int p, double K);

  int r_ = 1;
  int p_ = 1;
  double K_ = 1.0;
  bool special_ = true;
};

struct Point {
  SymMatrix Z;
  CVector w;
};

struct AuxXY {
  double X = 0.0;
  double Y = 1.0;
};

/// Flat coordinates (z, w) in C^N.
CVector to_flat(const Point& point);
Point point_from_flat(const DomainParams& params, const CVector& flat);

/// Origin of the Z factor with the given fibre coordinate.
Point origin_point(const DomainParams& params, const CVector& w);

/// det(I - Z conj(Z)), real because Z conj(Z) = Z Z^H is Hermitian.
double defining_det(const SymMatrix& z);

/// I - Z conj(Z) is positive definite.
bool in_matrix_domain(const SymMatrix& z);

bool contains(const DomainParams& params, const SymMatrix& z, const CVector& w);
bool contains(const DomainParams& params, const Point& point);

/// X = |w|^2 det(I - Z conj(Z))^(-1/K) and Y = 1/(1 - X). Throws
/// kDomainMembership outside the domain.
AuxXY aux_xy(const DomainParams& params, const Point& point);

/// Entry (k,l) is tr[(I - Z conj(Z))^-1 I*_{kl} conj(Z)].
CVector e_vector(const SymMatrix& z);

struct SampleOptions {
  /// Upper limit of the largest singular value of Z and of the fraction of
  /// the admissible fibre radius used for w.
  double cap = 0.95;

  static constexpr double kNearBoundaryCap = 1.0 - 1e-6;
};

/// Deterministic interior sample. The largest singular value of Z is uniform
/// in (0, cap); w is uniform in direction with radius u * det(I - Z conj(Z))^(1/(2K)),
/// u uniform in (0, cap).
std::vector<Point> sample_interior(const DomainParams& params, std::uint64_t seed, int count,
                                   const SampleOptions& options = {});

using Rng = std::mt19937_64;

/// Complex symmetric matrix with independent standard Gaussian real and
/// imaginary parts on and above the diagonal.
SymMatrix random_symmetric(int p, Rng& rng);
/// Complex vector with independent standard Gaussian parts.
CVector random_complex(int n, Rng& rng);
/// Uniform in the open unit interval.
double random_unit(Rng& rng);

}  // namespace chg
