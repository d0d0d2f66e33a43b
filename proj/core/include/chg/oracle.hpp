#pragma once

// Finite-difference Wirtinger calculus on Y_II(r, p; K). Everything here is
// built from values of a real function and domain membership only, so it can
// serve as an independent check of the closed forms.
//
//   d/dz    = (d/dx - i d/dy) / 2
//   d/dzbar = (d/dx + i d/dy) / 2
//   d^2 f / dz_a dzbar_b = [f_xa,xb + f_ya,yb + i (f_xa,yb - f_ya,xb)] / 4

#include <functional>

#include "chg/curvature.hpp"
#include "chg/domain.hpp"

namespace chg {

struct FDConfig {
  double step = 1e-4;
  int order = 2;  ///< central differences; only 2 is implemented
  bool richardson = false;
  /// Step of the inner mixed Hessian when fd_hsc differentiates T along a
  /// complex line; the inner Hessian is always Richardson-extrapolated there.
  double inner_step = 3e-3;

  /// Defaults for fd_hsc: outer step 1e-2, inner step 3e-3, one Richardson level.
  static FDConfig curvature();
};

using RealFunction = std::function<double(const Point&)>;

/// Mixed Hessian d^2 f / dz_a dzbar_b in flat coordinates (N x N). The step is
/// divided by 10 up to 3 times while the stencil leaves the domain, then
/// kStencil is thrown. Throws kConditioning if |H - H^H| exceeds
/// 10 step^2 max(1, max|H|).
CMatrix wirtinger_hessian_mixed(const DomainParams& params, const RealFunction& f, const Point& point,
                                const FDConfig& cfg = {});

/// df/dz_a by central differences, same stencil rules.
CVector wirtinger_gradient(const DomainParams& params, const RealFunction& f, const Point& point,
                           const FDConfig& cfg = {});

/// Mixed Hessian of generating_function.
CMatrix fd_metric(const DomainParams& params, const Point& point, const FDConfig& cfg = {});

/// Holomorphic sectional curvature from T(t) = fd_metric(point + t v):
///   v [-dT/dt dbar + (dT/dt) T^-1 (dT/dt)^H] v^H / (v T v^H)^2
/// with the t-derivatives taken by central differences of step cfg.step.
/// Steps are measured in coordinates where a first finite-difference metric
/// at the point is the identity, and v is unit length there. Throws kDegenerateDirection for a zero
/// tangent and kConditioning when T(0) is not positive definite.
double fd_hsc(const DomainParams& params, const Point& point, const Tangent& tangent,
              const FDConfig& cfg = FDConfig::curvature());

}  // namespace chg
