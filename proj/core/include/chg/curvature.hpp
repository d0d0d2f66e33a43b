#pragma once

// Holomorphic sectional curvature of the Kahler-Einstein metric,
//
//   omega(x, v) = v [-dbar d T + dT T^-1 dbar T] v^H / (v T v^H)^2,
//
// evaluated in closed form on the origin slice (0, w*) and transported to a
// general point through the normalizing automorphism (omega is invariant).

#include <utility>

#include "chg/domain.hpp"

namespace chg {

struct Tangent {
  CVector dz;  ///< m coordinates of dZ
  CVector dw;  ///< r coordinates

  CVector flat() const;
  static Tangent from_flat(const DomainParams& params, const CVector& v);
  bool is_zero() const { return dz.squaredNorm() + dw.squaredNorm() == 0.0; }
};

/// Blocks of -dbar d T + dT T^-1 dbar T at (0, w*) along the tangent.
struct CurvatureBlocks {
  CMatrix R11;
  CMatrix R12;
  CMatrix R21;
  CMatrix R22;

  CMatrix assemble() const;
};

CurvatureBlocks curvature_blocks_origin(const DomainParams& params, const CVector& wstar, const Tangent& tangent);

/// Closed form on the origin slice:
///   -2 + [2 K^-2 Y |dz|^4 - 2 K^-1 Y tr(dZ dZ* dZ dZ*)] / (K^-1 Y |dz|^2 + Y^2 |conj(w*).dw|^2 + Y |dw|^2)^2
/// Throws kDegenerateDirection for a zero tangent.
double hsc_origin(const DomainParams& params, const CVector& wstar, const Tangent& tangent);

/// Image of a tangent at `point` under the normalizing automorphism: v J_{F0}.
Tangent transport_tangent(const DomainParams& params, const Point& point, const Tangent& tangent);

double hsc(const DomainParams& params, const Point& point, const Tangent& tangent);

struct CurvatureBounds {
  double lower = 0.0;  ///< -2K
  double upper = 0.0;  ///< -2K/p
};

CurvatureBounds curvature_bounds(const DomainParams& params);

/// (rank-one direction I*_{11}, identity direction), both with dw = 0. The
/// first attains -2K and the second -2K/p at the origin slice with w* = 0.
std::pair<Tangent, Tangent> sharp_directions(int p, int r);

struct Lemma5Terms {
  double quartic = 0.0;  ///< tr(Z conj(Z) Z conj(Z))
  double squared = 0.0;  ///< tr(Z conj(Z))^2
  double scaled = 0.0;   ///< p tr(Z conj(Z) Z conj(Z))
};

/// quartic <= squared <= scaled for every symmetric Z.
Lemma5Terms lemma5_terms(const SymMatrix& z);

}  // namespace chg
