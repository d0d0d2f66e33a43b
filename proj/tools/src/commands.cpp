#include "chg_cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "chg/bergman.hpp"
#include "chg/curvature.hpp"
#include "chg/error.hpp"
#include "chg/kemetric.hpp"
#include "chg_cli/input.hpp"
#include "chg_cli/parallel.hpp"
#include "chg_cli/report.hpp"
#include "chg_cli/suite.hpp"

namespace chg::cli {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

DomainParams resolve_params(const CommonOptions& o) {
  if (o.K && o.special_K) throw UsageError("--K and --special-K are mutually exclusive");
  try {
    return o.K ? DomainParams::make(o.r, o.p, *o.K) : DomainParams::with_special_K(o.r, o.p);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

std::uint64_t resolve_seed(const CommonOptions& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("CHG_SEED"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("CHG_SEED is not a non-negative integer: ") + env);
  }
  return 1;
}

void check_counts(const CommonOptions& o) {
  if (o.count < 1) throw UsageError("--count must be >= 1");
  if (o.jobs < 1) throw UsageError("--jobs must be >= 1");
}

Tolerances parse_overrides(const std::string& text) {
  Tolerances tol = default_tolerances();
  if (text.empty()) return tol;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("tolerance override needs name=value: " + item);
    const std::string name = item.substr(0, eq);
    if (!tol.count(name)) throw UsageError("unknown check in --tol-overrides: " + name);
    try {
      std::size_t used = 0;
      const std::string value = item.substr(eq + 1);
      tol[name] = std::stod(value, &used);
      if (used != value.size() || !std::isfinite(tol[name])) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw UsageError("bad tolerance value in --tol-overrides: " + item);
    }
  }
  return tol;
}

void echo_params(RunReport& report, const DomainParams& params) {
  report.set("r", params.r());
  report.set("p", params.p());
  report.set("K", params.K());
  report.set("special_K", params.special());
  report.set("N", params.N());
}

// Writes `body` to the --out file, or to `out` when no file is given.
void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& body) {
  if (path.empty()) {
    body(out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw UsageError("cannot open output file " + path);
  body(file);
}

template <class Fn>
int with_errors(std::ostream& err, Fn fn) {
  try {
    return fn();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::kParse || e.code() == ErrorCode::kInvalidParams ||
                   e.code() == ErrorCode::kInvalidCoefficients
               ? kExitUsage
               : kExitFail;
  }
}

std::optional<BergmanCoeffs> load_coeffs(const std::string& path, const DomainParams& params, double* fit_residual) {
  if (!path.empty()) {
    BergmanCoeffs c = [&] {
      try {
        return BergmanCoeffs::load(path);
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
    }();
    if (c.r() != params.r() || c.p() != params.p()) {
      throw UsageError("coefficient file is for (r, p) = (" + std::to_string(c.r()) + ", " + std::to_string(c.p()) +
                       ")");
    }
    return c;
  }
  if (params.p() == 1) {
    FitReport fit = fit_coeffs_p1_with_report(params.r());
    if (fit_residual) *fit_residual = fit.residual;
    return fit.coeffs;
  }
  return std::nullopt;
}

}  // namespace

int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err) {
  return with_errors(err, [&] {
    check_counts(opts.common);
    SuiteConfig cfg;
    cfg.params = resolve_params(opts.common);
    cfg.seed = resolve_seed(opts.common);
    cfg.count = opts.common.count;
    cfg.jobs = opts.common.jobs;
    cfg.near_boundary = opts.near_boundary;
    cfg.tol = parse_overrides(opts.tol_overrides);

    RunReport report("verify");
    report.include_timestamp(opts.common.timestamp);
    echo_params(report, cfg.params);
    report.set("seed", std::to_string(cfg.seed));
    report.set("count", cfg.count);
    report.set("near_boundary", cfg.near_boundary);
    for (auto& rec : run_verify_suite(cfg)) report.add_check(std::move(rec));
    emit(opts.common.out, out, [&](std::ostream& os) { report.write(os); });
    return report.passed() ? kExitPass : kExitFail;
  });
}

int cmd_scan_curvature(const ScanCurvatureOptions& opts, std::ostream& out, std::ostream& err) {
  return with_errors(err, [&] {
    const CommonOptions& c = opts.common;
    check_counts(c);
    const DomainParams params = resolve_params(c);
    const std::uint64_t seed = resolve_seed(c);
    const CurvatureBounds bounds = curvature_bounds(params);

    SuiteConfig cfg;
    cfg.params = params;
    cfg.seed = seed;
    const auto pts = suite_points(cfg, c.count);
    Rng rng(derived_seed(seed, 2));
    std::vector<Tangent> tangents;
    while (static_cast<int>(tangents.size()) < c.count) {
      Tangent t{random_complex(params.m(), rng), random_complex(params.r(), rng)};
      if (!t.is_zero()) tangents.push_back(std::move(t));
    }
    struct Row {
      double x, dz2, dw2, omega;
    };
    std::vector<Row> rows = parallel_map(c.count, c.jobs, [&](int i) {
      const Point& pt = pts[static_cast<std::size_t>(i)];
      const Tangent& t = tangents[static_cast<std::size_t>(i)];
      return Row{aux_xy(params, pt).X, t.dz.squaredNorm(), t.dw.squaredNorm(), hsc(params, pt, t)};
    });
    const auto [rank_one, scalar] = sharp_directions(params.p(), params.r());
    const CVector w0 = CVector::Zero(params.r());
    for (const Tangent& t : {rank_one, scalar}) {
      rows.push_back({0.0, t.dz.squaredNorm(), t.dw.squaredNorm(), hsc_origin(params, w0, t)});
    }

    double lo = rows.front().omega, hi = rows.front().omega, excess = 0.0;
    for (const Row& row : rows) {
      lo = std::min(lo, row.omega);
      hi = std::max(hi, row.omega);
      excess = std::max({excess, bounds.lower - row.omega, row.omega - bounds.upper});
    }

    auto write_table = [&](std::ostream& os) {
      os << "X,abs_dz_sq,abs_dw_sq,omega,lower_bound,upper_bound\n";
      for (const Row& row : rows) {
        os << format_number(row.x) << ',' << format_number(row.dz2) << ',' << format_number(row.dw2) << ','
           << format_number(row.omega) << ',' << format_number(bounds.lower) << ',' << format_number(bounds.upper)
           << '\n';
      }
      os << "# min = " << format_number(lo) << "\n# max = " << format_number(hi) << '\n';
    };

    RunReport report("scan-curvature");
    report.include_timestamp(c.timestamp);
    echo_params(report, params);
    report.set("seed", std::to_string(seed));
    report.set("count", c.count);
    report.add_section("summary", {{"rows", std::to_string(rows.size())},
                                   {"min_omega", format_number(lo)},
                                   {"max_omega", format_number(hi)},
                                   {"lower_bound", format_number(bounds.lower)},
                                   {"upper_bound", format_number(bounds.upper)}});
    CheckRecord rec;
    rec.name = "curvature_range";
    rec.points = static_cast<long>(rows.size());
    rec.measure = "max_excess";
    rec.value = excess;
    rec.tolerance = 1e-6;
    rec.pass = excess <= rec.tolerance;
    report.add_check(rec);

    if (c.out.empty()) {
      report.write(out);
      out << "\n[table]\n";
      write_table(out);
    } else {
      emit(c.out, out, write_table);
      report.write(out);
    }
    return report.passed() ? kExitPass : kExitFail;
  });
}

int cmd_scan_equivalence(const ScanEquivalenceOptions& opts, std::ostream& out, std::ostream& err) {
  return with_errors(err, [&] {
    const CommonOptions& c = opts.common;
    if (opts.grid < 2) throw UsageError("--grid must be >= 2");
    const DomainParams params = resolve_params(c);
    double fit_residual = -1.0;
    const auto coeffs = load_coeffs(opts.coeffs, params, &fit_residual);
    if (!coeffs) throw UsageError("--coeffs is required for p > 1");

    const auto rows = equivalence_grid(params, *coeffs, opts.grid);
    double a = -INFINITY, b = INFINITY, limit_dev = 0.0;
    const double target = params.N() + 1.0;
    double x_last = 0.0;
    for (const auto& row : rows) x_last = std::max(x_last, row.X);
    for (const auto& row : rows) {
      for (double v : {row.ratios.phi, row.ratios.psi, row.ratios.upsilon}) {
        a = std::max(a, v);
        b = std::min(b, v);
        if (row.X == x_last) limit_dev = std::max(limit_dev, std::abs(v - target) / target);
      }
    }

    RunReport report("scan-equivalence");
    report.include_timestamp(c.timestamp);
    echo_params(report, params);
    report.set("coeffs", opts.coeffs.empty() ? std::string("ball-fit") : opts.coeffs);
    report.set("grid", opts.grid);
    std::vector<std::pair<std::string, std::string>> summary = {
        {"a", format_number(a)}, {"b", format_number(b)}, {"N_plus_1", format_number(target)},
        {"x_max", format_number(x_last)}};
    if (fit_residual >= 0.0) summary.emplace_back("fit_residual", format_number(fit_residual));
    report.add_section("summary", summary);

    CheckRecord pos;
    pos.name = "positive_bounds";
    pos.points = static_cast<long>(rows.size());
    pos.measure = "b";
    pos.value = b;
    pos.tolerance = 0.0;
    pos.pass = b > 0.0 && b <= a;
    report.add_check(pos);
    CheckRecord lim;
    lim.name = "limit_ratio";
    lim.points = opts.grid;
    lim.value = limit_dev;
    lim.tolerance = 1e-3;
    lim.pass = limit_dev <= lim.tolerance;
    report.add_check(lim);

    auto write_table = [&](std::ostream& os) {
      os << "X,lambda,Phi,Psi,Upsilon\n";
      for (const auto& row : rows) {
        os << format_number(row.X) << ',' << format_number(row.ratios.lambda) << ',' << format_number(row.ratios.phi)
           << ',' << format_number(row.ratios.psi) << ',' << format_number(row.ratios.upsilon) << '\n';
      }
      os << "# a = " << format_number(a) << "\n# b = " << format_number(b) << '\n';
    };
    if (c.out.empty()) {
      report.write(out);
      out << "\n[table]\n";
      write_table(out);
    } else {
      emit(c.out, out, write_table);
      report.write(out);
    }
    return report.passed() ? kExitPass : kExitFail;
  });
}

int cmd_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err) {
  return with_errors(err, [&] {
    const CommonOptions& c = opts.common;
    const DomainParams params = resolve_params(c);
    static const std::vector<std::string> kWhat = {"g", "metric", "kernel", "curvature"};
    if (std::find(kWhat.begin(), kWhat.end(), opts.what) == kWhat.end()) {
      throw UsageError("--what must be one of g, metric, kernel, curvature");
    }
    if (opts.point.empty()) throw UsageError("--point is required");
    if (opts.what == "curvature" && opts.tangent.empty()) throw UsageError("--what curvature needs --tangent");
    const Point point = parse_point(params, opts.point);

    RunReport report("eval");
    report.include_timestamp(c.timestamp);
    echo_params(report, params);
    report.set("what", opts.what);

    if (!contains(params, point)) {
      report.add_section("domain-violation", {{"message", "point is outside Y_II(r, p; K)"}});
      CheckRecord rec;
      rec.name = "domain";
      rec.points = 1;
      rec.error = "domain-membership: point is outside the domain";
      report.add_check(rec);
      emit(c.out, out, [&](std::ostream& os) { report.write(os); });
      return static_cast<int>(kExitFail);
    }

    const AuxXY aux = aux_xy(params, point);
    std::vector<std::pair<std::string, std::string>> values = {{"X", format_number(aux.X)},
                                                               {"Y", format_number(aux.Y)}};
    if (opts.what == "g") {
      values.emplace_back("g", format_number(generating_function(params, point)));
    } else if (opts.what == "metric") {
      const CMatrix t = metric_pullback(params, point).entries;
      for (Eigen::Index i = 0; i < t.rows(); ++i) {
        std::string row;
        for (Eigen::Index j = 0; j < t.cols(); ++j) row += (j ? " " : "") + format_complex(t(i, j));
        values.emplace_back("T[" + std::to_string(i) + "]", row);
      }
    } else if (opts.what == "kernel") {
      const auto coeffs = load_coeffs(opts.coeffs, params, nullptr);
      if (!coeffs) throw UsageError("--what kernel needs --coeffs for p > 1");
      values.emplace_back("log_kernel", format_number(log_bergman_kernel(params, *coeffs, point)));
      values.emplace_back("kernel", format_number(bergman_kernel(params, *coeffs, point)));
    } else {
      const Tangent t = parse_tangent(params, opts.tangent);
      if (t.is_zero()) throw UsageError("tangent must be nonzero");
      values.emplace_back("omega", format_number(hsc(params, point, t)));
    }
    report.add_section("value", values);
    emit(c.out, out, [&](std::ostream& os) { report.write(os); });
    return static_cast<int>(kExitPass);
  });
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cartan-Hartogs domain metrics: verification, scans and evaluation", "chg"};
  app.require_subcommand(1);

  auto add_common = [](CLI::App* sub, CommonOptions& o, bool sampling) {
    sub->add_option("--p", o.p, "order of the symmetric matrix factor")->check(CLI::Range(1, 64));
    sub->add_option("--r", o.r, "fibre dimension")->check(CLI::Range(1, 64));
    auto* k = sub->add_option("--K", o.K, "fibre exponent K > 0");
    auto* sk = sub->add_flag("--special-K", o.special_K, "use K = p/2 + 1/(p+1) (the default)");
    k->excludes(sk);
    if (sampling) {
      sub->add_option("--seed", o.seed, "sampling seed (falls back to CHG_SEED, then 1)");
      sub->add_option("--count", o.count, "number of sampled points");
      sub->add_option("--jobs", o.jobs, "worker threads");
    }
    sub->add_flag("!--no-timestamp", o.timestamp, "omit the timestamp line");
    sub->add_option("--out", o.out, "output file");
  };

  VerifyOptions verify;
  auto* v = app.add_subcommand("verify", "run the invariant suite");
  add_common(v, verify.common, true);
  v->add_option("--tol-overrides", verify.tol_overrides, "name=value,... tolerance overrides");
  v->add_flag("--near-boundary", verify.near_boundary, "sample up to 1 - 1e-6 of the boundary limits");

  ScanCurvatureOptions scan_c;
  auto* sc = app.add_subcommand("scan-curvature", "tabulate holomorphic sectional curvature");
  add_common(sc, scan_c.common, true);

  ScanEquivalenceOptions scan_e;
  auto* se = app.add_subcommand("scan-equivalence", "Bergman / Kahler-Einstein ratio scan");
  add_common(se, scan_e.common, false);
  se->add_option("--coeffs", scan_e.coeffs, "Bergman coefficient file (optional for p = 1)");
  se->add_option("--grid", scan_e.grid, "grid points per axis");

  EvalOptions eval;
  auto* ev = app.add_subcommand("eval", "evaluate a quantity at one point");
  add_common(ev, eval.common, false);
  ev->add_option("--point", eval.point, "point file or inline text")->required();
  ev->add_option("--what", eval.what, "g | metric | kernel | curvature");
  ev->add_option("--tangent", eval.tangent, "tangent file or inline text");
  ev->add_option("--coeffs", eval.coeffs, "Bergman coefficient file (for --what kernel)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  if (v->parsed()) return cmd_verify(verify, out, err);
  if (sc->parsed()) return cmd_scan_curvature(scan_c, out, err);
  if (se->parsed()) return cmd_scan_equivalence(scan_e, out, err);
  return cmd_eval(eval, out, err);
}

}  // namespace chg::cli
