#include "chg/bergman.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "chg/autgroup.hpp"
#include "chg/error.hpp"

namespace chg {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

int parse_int(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(text, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::kParse, "field '" + key + "' is not an integer: " + text);
  }
  if (trim(text.substr(used)).size() != 0) throw Error(ErrorCode::kParse, "trailing text in field '" + key + "'");
  return value;
}

std::vector<double> parse_list(const std::string& text) {
  std::string normalized = text;
  std::replace(normalized.begin(), normalized.end(), ',', ' ');
  std::istringstream in(normalized);
  std::vector<double> out;
  std::string token;
  while (in >> token) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kParse, "coefficient is not a number: " + token);
    }
    if (used != token.size()) throw Error(ErrorCode::kParse, "coefficient is not a number: " + token);
    out.push_back(v);
  }
  return out;
}

}  // namespace

BergmanCoeffs::BergmanCoeffs(int r, int p, std::vector<double> b) : r_(r), p_(p), b_(std::move(b)) {
  if (r < 1 || p < 1) throw Error(ErrorCode::kInvalidCoefficients, "r and p must be >= 1");
  const auto expected = static_cast<std::size_t>(h() + 1);
  if (b_.size() != expected) {
    throw Error(ErrorCode::kInvalidCoefficients, "expected " + std::to_string(expected) + " coefficients for p=" +
                                                     std::to_string(p) + ", got " + std::to_string(b_.size()));
  }
  for (double v : b_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidCoefficients, "coefficients must be finite");
  }
  if (b_.back() == 0.0) throw Error(ErrorCode::kInvalidCoefficients, "leading coefficient b_h must be nonzero");
}

BergmanCoeffs BergmanCoeffs::parse(std::istream& in) {
  int r = -1;
  int p = -1;
  std::vector<double> b;
  bool have_b = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "r") {
      r = parse_int(key, value);
    } else if (key == "p") {
      p = parse_int(key, value);
    } else if (key == "b") {
      b = parse_list(value);
      have_b = true;
    } else {
      throw Error(ErrorCode::kParse, "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (r < 0 || p < 0 || !have_b) throw Error(ErrorCode::kParse, "coefficient file needs r, p and b");
  return BergmanCoeffs(r, p, std::move(b));
}

BergmanCoeffs BergmanCoeffs::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParse, "cannot open coefficient file " + path);
  return parse(in);
}

std::string BergmanCoeffs::to_text() const {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "r = " << r_ << "\np = " << p_ << "\nb = ";
  for (std::size_t i = 0; i < b_.size(); ++i) out << (i ? ", " : "") << b_[i];
  out << '\n';
  return out.str();
}

double literal_leading_coefficient(int p) { return std::ldexp(1.0, coord_dim(p) + 1); }

double gamma_int(int n) {
  if (n < 1 || n > 21) throw Error(ErrorCode::kInvalidParams, "gamma_int supports 1 <= n <= 21");
  std::uint64_t f = 1;
  for (int i = 2; i < n; ++i) f *= static_cast<std::uint64_t>(i);
  return static_cast<double>(f);
}

GSeries g_series(const BergmanCoeffs& coeffs, double Y) {
  if (!(Y >= 1.0)) throw Error(ErrorCode::kInvalidParams, "Y must be >= 1");
  GSeries s;
  const int r = coeffs.r();
  for (int j = 0; j <= coeffs.h(); ++j) {
    const double bj = coeffs.b()[static_cast<std::size_t>(j)];
    s.G += bj * gamma_int(r + j) * std::pow(Y, r + j);
    s.dG += bj * gamma_int(r + j + 1) * std::pow(Y, r + j + 1);
    s.d2G += bj * gamma_int(r + j + 2) * std::pow(Y, r + j + 2);
  }
  return s;
}

LogDerivatives log_derivatives(const BergmanCoeffs& coeffs, double Y) {
  if (!(Y >= 1.0)) throw Error(ErrorCode::kInvalidParams, "Y must be >= 1");
  // Factor Y^(r+h) out of G, Y^(r+h+1) out of G' and Y^(r+h+2) out of G''.
  const int r = coeffs.r();
  const int h = coeffs.h();
  double g0 = 0.0, g1 = 0.0, g2 = 0.0;
  for (int j = 0; j <= h; ++j) {
    const double bj = coeffs.b()[static_cast<std::size_t>(j)];
    const double scale = std::pow(Y, j - h);
    g0 += bj * gamma_int(r + j) * scale;
    g1 += bj * gamma_int(r + j + 1) * scale;
    g2 += bj * gamma_int(r + j + 2) * scale;
  }
  if (g0 == 0.0) throw Error(ErrorCode::kInvalidCoefficients, "G(Y) vanishes");
  const double q1 = g1 / g0;
  const double q2 = g2 / g0;
  return {Y * q1, Y * Y * (q2 - q1 * q1)};
}

double log_bergman_kernel(const DomainParams& params, const BergmanCoeffs& coeffs, const Point& point) {
  if (coeffs.r() != params.r() || coeffs.p() != params.p()) {
    throw Error(ErrorCode::kInvalidCoefficients, "coefficients were built for a different (r, p)");
  }
  const AuxXY aux = aux_xy(params, point);
  const double m = params.m();
  const GSeries s = g_series(coeffs, aux.Y);
  if (!(s.G > 0.0)) throw Error(ErrorCode::kInvalidCoefficients, "G(Y) must be positive");
  const double exponent = params.p() + 1.0 + params.r() / params.K();
  return -m * std::log(params.K()) - (m + params.r()) * std::log(std::numbers::pi) + std::log(s.G) -
         exponent * std::log(defining_det(point.Z));
}

double bergman_kernel(const DomainParams& params, const BergmanCoeffs& coeffs, const Point& point) {
  return std::exp(log_bergman_kernel(params, coeffs, point));
}

MetricMatrix bergman_metric_origin(const DomainParams& params, const BergmanCoeffs& coeffs, const CVector& wstar) {
  if (coeffs.r() != params.r() || coeffs.p() != params.p()) {
    throw Error(ErrorCode::kInvalidCoefficients, "coefficients were built for a different (r, p)");
  }
  if (wstar.size() != params.r()) throw Error(ErrorCode::kInvalidShape, "w* must have length r");
  const double x = wstar.squaredNorm();
  if (!(x < 1.0)) throw Error(ErrorCode::kDomainMembership, "|w*| must be < 1 on the origin slice");
  const LogDerivatives hd = log_derivatives(coeffs, 1.0 / (1.0 - x));
  const double k = params.K();
  const int m = params.m();
  const int r = params.r();
  MetricMatrix out{CMatrix::Zero(m + r, m + r)};
  out.entries.topLeftCorner(m, m).diagonal().setConstant(hd.H1 * x / k + params.p() + 1.0 + r / k);
  out.entries.bottomRightCorner(r, r) =
      hd.H1 * CMatrix::Identity(r, r) + hd.H2 * (wstar.conjugate() * wstar.transpose());
  return out;
}

MetricMatrix bergman_metric(const DomainParams& params, const BergmanCoeffs& coeffs, const Point& point) {
  const JacobianBlocks jac = jacobian_at_base(params, point);
  const MetricMatrix origin = bergman_metric_origin(params, coeffs, normalized_fiber(params, point));
  MetricMatrix out{jac.assembled * origin.entries * jac.assembled.adjoint()};
  out.entries = 0.5 * (out.entries + out.entries.adjoint());
  return out;
}

RatioTriple equivalence_ratios(const DomainParams& params, const BergmanCoeffs& coeffs, double X, double lambda) {
  if (!(X >= 0.0 && X < 1.0)) throw Error(ErrorCode::kInvalidParams, "X must lie in [0, 1)");
  if (!(lambda >= 0.0)) throw Error(ErrorCode::kInvalidParams, "lambda must be >= 0");
  const double y = 1.0 / (1.0 - X);
  const LogDerivatives hd = log_derivatives(coeffs, y);
  const double k = params.K();
  const double l2 = lambda * lambda;
  RatioTriple out;
  out.phi = (hd.H1 * X / k + params.p() + 1.0 + params.r() / k) / (y / k);
  out.psi = (hd.H1 + hd.H2 * l2) / (y + y * y * l2);
  out.upsilon = hd.H1 / y;
  out.lambda = lambda;
  return out;
}

std::vector<RatioRow> equivalence_grid(const DomainParams& params, const BergmanCoeffs& coeffs, int grid_size) {
  if (grid_size < 2) throw Error(ErrorCode::kInvalidParams, "grid_size must be >= 2");
  std::vector<RatioRow> rows;
  rows.reserve(static_cast<std::size_t>(grid_size) * static_cast<std::size_t>(grid_size));
  const double last = grid_size - 1.0;
  for (int i = 0; i < grid_size; ++i) {
    const double x = -std::expm1(-6.0 * std::numbers::ln10 * i / last);
    const double lambda_max = std::sqrt(x / (1.0 - x));
    for (int j = 0; j < grid_size; ++j) {
      rows.push_back({x, equivalence_ratios(params, coeffs, x, lambda_max * j / last)});
    }
  }
  return rows;
}

EquivalenceBounds equivalence_bounds_scan(const DomainParams& params, const BergmanCoeffs& coeffs, int grid_size) {
  const auto rows = equivalence_grid(params, coeffs, grid_size);
  EquivalenceBounds out;
  out.a = -std::numeric_limits<double>::infinity();
  out.b = std::numeric_limits<double>::infinity();
  for (const auto& row : rows) {
    for (double v : {row.ratios.phi, row.ratios.psi, row.ratios.upsilon}) {
      out.a = std::max(out.a, v);
      out.b = std::min(out.b, v);
    }
    out.x_max = std::max(out.x_max, row.X);
  }
  out.grid_size = grid_size;
  std::ostringstream desc;
  desc << grid_size << "x" << grid_size << " (X = 1 - 10^(-6 i/(n-1)), lambda in [0, sqrt(XY)])";
  out.grid = desc.str();
  if (!(out.b > 0.0)) throw Error(ErrorCode::kInvalidCoefficients, "ratio scan produced a non-positive ratio");
  return out;
}

double ball_kernel(int n, double norm_sq) {
  if (n < 1) throw Error(ErrorCode::kInvalidParams, "ball dimension must be >= 1");
  if (!(norm_sq >= 0.0 && norm_sq < 1.0)) throw Error(ErrorCode::kDomainMembership, "point outside the unit ball");
  return gamma_int(n + 1) * std::pow(std::numbers::pi, -n) * std::pow(1.0 - norm_sq, -(n + 1.0));
}

FitReport fit_coeffs_p1_with_report(int r) {
  if (r < 1) throw Error(ErrorCode::kInvalidParams, "r must be >= 1");
  constexpr int h = 2;  // coord_dim(1) + 1
  const double z_sq = 0.09;
  // Node sets tried in order; each spreads Y over a decade.
  const std::vector<std::vector<double>> node_sets = {
      {1.25, 2.5, 5.0}, {1.1, 3.0, 9.0}, {1.5, 2.0, 3.0}};

  double best_residual = std::numeric_limits<double>::infinity();
  std::vector<double> best;
  for (const auto& nodes : node_sets) {
    Eigen::MatrixXd vander(h + 1, h + 1);
    Eigen::VectorXd rhs(h + 1);
    for (int i = 0; i <= h; ++i) {
      const double y = nodes[static_cast<std::size_t>(i)];
      const double x = 1.0 - 1.0 / y;
      const double w_sq = x * (1.0 - z_sq);  // X = |w|^2 / (1 - |z|^2) when p = 1, K = 1
      const double kernel = ball_kernel(r + 1, z_sq + w_sq);
      const double g = kernel / (std::pow(std::numbers::pi, -1.0 - r) * std::pow(1.0 - z_sq, -(2.0 + r)));
      // Row-scaled by g so that each equation is O(1).
      for (int j = 0; j <= h; ++j) vander(i, j) = gamma_int(r + j) * std::pow(y, r + j) / g;
      rhs(i) = 1.0;
    }
    const Eigen::VectorXd sol = vander.colPivHouseholderQr().solve(rhs);
    const double residual = (vander * sol - rhs).cwiseAbs().maxCoeff();
    if (residual < best_residual) {
      best_residual = residual;
      best.assign(sol.data(), sol.data() + sol.size());
    }
    if (residual <= 1e-10) break;
  }
  if (!(best_residual <= 1e-10)) {
    throw Error(ErrorCode::kFit, "ball-kernel fit residual " + std::to_string(best_residual) + " exceeds 1e-10");
  }
  return {BergmanCoeffs(r, 1, std::move(best)), best_residual};
}

BergmanCoeffs fit_coeffs_p1(int r) { return fit_coeffs_p1_with_report(r).coeffs; }

}  // namespace chg
