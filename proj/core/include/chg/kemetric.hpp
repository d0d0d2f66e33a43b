#pragma once

// Kahler-Einstein potential and metric on Y_II(r, p; K).
//
// The potential is
//
//   g = log Y - (1/K) log det(I - Z conj(Z)) + ((r - N)/(1 + N)) log K
//
// and the metric tensor is T_{a b} = d^2 g / dz_a d conj(z_b) in the flat
// coordinates (z, w). Two independent routes evaluate T at a general point:
// transport of the origin-slice matrix through the normalizing automorphism,
// and the closed-form blocks T11, T12, T21, T22.

#include <vector>

#include "chg/domain.hpp"

namespace chg {

struct MetricMatrix {
  CMatrix entries;

  /// v T v^H for a row tangent v.
  double quadratic_form(const CVector& v) const;
  double min_eigenvalue() const;
};

struct MetricBlocks {
  CMatrix T11;  ///< m x m
  CMatrix T12;  ///< m x r
  CMatrix T21;  ///< r x m
  CMatrix T22;  ///< r x r

  MetricMatrix assemble() const;
};

double generating_function(const DomainParams& params, const Point& point);

/// The same potential evaluated in long double on flat coordinates, for
/// finite-difference stencils. Throws kDomainMembership outside the domain.
long double generating_function_ext(const DomainParams& params, const CVectorLD& flat);

/// Metric on the origin slice (0, w*): diag((Y/K) I_m, Y I_r + Y^2 conj(w*)^T w*)
/// with X = |w*|^2. Throws kDomainMembership when |w*| >= 1.
MetricMatrix metric_origin(const DomainParams& params, const CVector& wstar);

/// J_{F0} metric_origin(w*) J_{F0}^H.
MetricMatrix metric_pullback(const DomainParams& params, const Point& point);

MetricBlocks metric_blocks_closed(const DomainParams& params, const Point& point);

/// log det T from the closed form K^(r-N) (1-X)^-(N+1) det(I - Z conj(Z))^-(p+1+r/K).
double log_det_metric_closed(const DomainParams& params, const Point& point);

enum class DetRoute { kClosedForm, kNumeric };

/// |det T - exp((N+1) g)| / exp((N+1) g), evaluated in log space.
double ma_residual(const DomainParams& params, const Point& point, DetRoute route = DetRoute::kClosedForm);

struct ProbeConfig {
  double x_threshold = 1.0 - 1e-9;
  double det_threshold = 1e-9;
  double min_growth = 10.0;
};

struct ProbeTrace {
  std::vector<double> values;
  double final_X = 0.0;
  double final_det = 1.0;
  bool reached_threshold = false;

  double growth() const { return values.empty() ? 0.0 : values.back() - values.front(); }
  /// Threshold reached and growth at least min_growth.
  bool diverged(const ProbeConfig& config) const {
    return reached_threshold && growth() >= config.min_growth;
  }
};

/// Evaluates g at `steps` points x0 + t_k d approaching the first boundary
/// crossing t_exit of the ray, with gaps t_exit - t_k decreasing geometrically
/// from t_exit (k = 0, the interior point) down to the first gap at which
/// X >= x_threshold or det(I - Z conj(Z)) <= det_threshold. A zero direction
/// gives a stationary probe. Throws kProbe when a probe point falls outside the
/// domain before that resolution is reached.
ProbeTrace boundary_blowup_probe(const DomainParams& params, const Point& interior, const CVector& direction,
                                 int steps, const ProbeConfig& config = {});

}  // namespace chg
