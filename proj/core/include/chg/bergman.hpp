#pragma once

// Bergman kernel and Bergman metric of Y_II(r, p; K), and their comparison
// with the Kahler-Einstein metric.
//
// The kernel on the diagonal is
//
//   K_II = K^-m pi^-(m+r) G(Y) det(I - Z conj(Z))^-(p+1+r/K),
//   G(Y) = sum_{j=0..h} b_j Gamma(r+j) Y^(r+j),   h = m + 1,
//
// where the coefficients b_j are external input (fitted from the unit ball
// kernel when p = 1). Derivatives of G are taken with respect to X, using
// dY/dX = Y^2.

#include <iosfwd>
#include <string>
#include <vector>

#include "chg/domain.hpp"
#include "chg/kemetric.hpp"

namespace chg {

class BergmanCoeffs {
 public:
  /// Throws kInvalidCoefficients unless b has h + 1 = p(p+1)/2 + 2 finite
  /// entries with b_h != 0.
  BergmanCoeffs(int r, int p, std::vector<double> b);

  int r() const noexcept { return r_; }
  int p() const noexcept { return p_; }
  int h() const noexcept { return coord_dim(p_) + 1; }
  const std::vector<double>& b() const noexcept { return b_; }

  /// Key-value text: lines `r = 1`, `p = 2`, `b = 0.5, 1, 8` ('#' starts a
  /// comment, b entries separated by commas or blanks).
  static BergmanCoeffs parse(std::istream& in);
  static BergmanCoeffs load(const std::string& path);
  std::string to_text() const;

 private:
  int r_;
  int p_;
  std::vector<double> b_;
};

/// Leading coefficient 2^(p(p+1)/2 + 1) as printed for the general kernel
/// formula. It does not match the unit ball normalization at p = 1 (the ball
/// forces b_h = 1 in the Gamma-weighted basis).
double literal_leading_coefficient(int p);

/// Gamma(n) = (n-1)! as an exact integer product, n >= 1.
double gamma_int(int n);

struct GSeries {
  double G = 0.0;
  double dG = 0.0;   ///< dG/dX
  double d2G = 0.0;  ///< d^2G/dX^2
};

/// Throws kInvalidParams for Y < 1.
GSeries g_series(const BergmanCoeffs& coeffs, double Y);

/// H = log G: H' = G'/G and H'' = G''/G - (G'/G)^2, evaluated with powers of
/// Y scaled out so that Y near 1e6 and beyond does not overflow.
struct LogDerivatives {
  double H1 = 0.0;
  double H2 = 0.0;
};
LogDerivatives log_derivatives(const BergmanCoeffs& coeffs, double Y);

double bergman_kernel(const DomainParams& params, const BergmanCoeffs& coeffs, const Point& point);
double log_bergman_kernel(const DomainParams& params, const BergmanCoeffs& coeffs, const Point& point);

/// Origin-slice Bergman metric:
///   diag(((1/K) H' X + p + 1 + r/K) I_m, H' I_r + H'' conj(w*)^T w*).
MetricMatrix bergman_metric_origin(const DomainParams& params, const BergmanCoeffs& coeffs, const CVector& wstar);

/// J_{F0} bergman_metric_origin(w*) J_{F0}^H.
MetricMatrix bergman_metric(const DomainParams& params, const BergmanCoeffs& coeffs, const Point& point);

struct RatioTriple {
  double phi = 0.0;
  double psi = 0.0;
  double upsilon = 0.0;
  double lambda = 0.0;
};

/// Phi = (H' X + K(p+1) + r) / Y, Psi = (H' + H'' l^2) / (Y + Y^2 l^2),
/// Upsilon = H' / Y at auxiliary value X and fibre modulus l.
RatioTriple equivalence_ratios(const DomainParams& params, const BergmanCoeffs& coeffs, double X, double lambda);

struct EquivalenceBounds {
  double a = 0.0;  ///< max of the three ratios over the grid
  double b = 0.0;  ///< min of the three ratios over the grid
  int grid_size = 0;
  double x_max = 0.0;
  std::string grid;  ///< human-readable grid description
};

struct RatioRow {
  double X = 0.0;
  RatioTriple ratios;
};

/// X_i = 1 - 10^(-6 i / (n-1)), i = 0..n-1 (clustered toward 1, ending at
/// 1 - 1e-6); lambda_j = (j / (n-1)) sqrt(X_i Y_i), j = 0..n-1.
std::vector<RatioRow> equivalence_grid(const DomainParams& params, const BergmanCoeffs& coeffs, int grid_size);

EquivalenceBounds equivalence_bounds_scan(const DomainParams& params, const BergmanCoeffs& coeffs, int grid_size);

/// Unit ball kernel in C^n on the diagonal, n! / pi^n (1 - |x|^2)^-(n+1).
double ball_kernel(int n, double norm_sq);

/// Fits b_0..b_h for p = 1 (K = 1, the unit ball in C^(r+1)) from the ball
/// kernel sampled at h + 1 interior points with distinct Y, then checks the fit
/// residual against 1e-10. Throws kFit if no sampling succeeds.
BergmanCoeffs fit_coeffs_p1(int r);

struct FitReport {
  BergmanCoeffs coeffs;
  double residual = 0.0;  ///< max relative mismatch at the fit nodes
};
FitReport fit_coeffs_p1_with_report(int r);

}  // namespace chg
