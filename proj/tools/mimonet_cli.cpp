// Command-line front end: simulate, analytic, compare, sweep, scaling.
//
// Exit codes: 0 success, 1 compare tolerance failure, 2 usage or config parse
// error, 3 invalid configuration / hypothesis violation, 4 quadrature did not
// converge.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mimonet/analytic.hpp"
#include "mimonet/bounds.hpp"
#include "mimonet/config_io.hpp"
#include "mimonet/montecarlo.hpp"
#include "mimonet/scaling.hpp"

namespace {

using namespace mimonet;
using io::format_number;

constexpr int exit_tolerance_failed = 1;
constexpr int exit_usage = 2;
constexpr int exit_invalid = 3;
constexpr int exit_quadrature = 4;

struct Flags {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 1;
  std::size_t realizations = 20000;
  unsigned workers = 1;
  double tolerance = 0.05;
  bool interference_limited = false;
  bool verbatim_theorem = false;
  double epsilon = default_epsilon;
  std::vector<std::string> sweeps;
  std::string engine = "analytic";
  bool progress = false;
};

const std::vector<std::string> result_header = {
    "lambda", "n_t", "n_r", "alpha", "L", "csir", "detector", "engine", "per_link_se", "per_area_se",
    "std_error_or_quad_error", "seed", "r_d", "power_dbm", "noise_dbm", "interference_limited", "window_radius",
    "n_realizations"};

const std::vector<std::string> compare_header = {
    "lambda", "n_t", "n_r", "alpha", "L", "csir", "detector", "mc_per_link", "mc_std_error", "analytic_per_link",
    "rel_error", "pass", "seed", "r_d", "power_dbm", "noise_dbm", "interference_limited", "window_radius",
    "n_realizations"};

const std::vector<std::string> scaling_header = {
    "beta1", "beta2", "alpha", "detector", "csir", "bound_type", "per_link_exponent", "log_factor", "bound",
    "fitted_per_area_slope", "expected_per_area_slope", "pass", "knee_log10", "fit_lo_log10", "fit_hi_log10"};

std::string n_t_cell(const SystemConfig& c) {
  const auto n_t = c.fixed_n_t();
  return n_t ? std::to_string(*n_t) : "mixed";
}

std::vector<std::string> leading_cells(const SystemConfig& c, Detector d) {
  return {format_number(c.lambda), n_t_cell(c), std::to_string(c.n_r), format_number(c.alpha),
          std::to_string(c.effective_l()), to_string(c.csir), to_string(d)};
}

std::vector<std::string> trailing_cells(const SystemConfig& c, double window, std::size_t realizations) {
  return {format_number(c.r_d), format_number(c.power_dbm), format_number(c.noise_dbm),
          c.interference_limited ? "true" : "false", format_number(window), std::to_string(realizations)};
}

std::vector<std::string> result_row(const SystemConfig& c, Detector d, const std::string& engine, double per_link,
                                    double per_area, double error, const std::string& seed, double window,
                                    std::size_t realizations) {
  auto row = leading_cells(c, d);
  row.insert(row.end(), {engine, format_number(per_link), format_number(per_area), format_number(error), seed});
  const auto tail = trailing_cells(c, window, realizations);
  row.insert(row.end(), tail.begin(), tail.end());
  return row;
}

io::RunFile load(const Flags& f) {
  io::RunFile run = f.config_path.empty() ? io::RunFile{} : io::load_run_file(f.config_path);
  if (f.interference_limited) run.interference_limited = true;
  return run;
}

AnalyticOptions analytic_options(const Flags& f) {
  AnalyticOptions o;
  o.verbatim_theorem = f.verbatim_theorem;
  return o;
}

QuadratureResult analytic_value(const SystemConfig& c, Detector d, const AnalyticOptions& o) {
  if (c.csir == CsirMode::local) return sum_se_lcsir(c, c.l_cancel, d, o);
  return sum_se_dcsir(c, d, o);
}

SpectralEfficiencyEstimate simulate_point(const SystemConfig& c, Detector d, const io::RunFile& run,
                                          const Flags& f) {
  MonteCarloOptions o;
  o.window_radius = run.window_radius;
  o.workers = f.workers;
  if (f.progress) {
    o.progress = [](const PartialEstimate& p) {
      std::fprintf(stderr, "\r%zu / %zu realizations", p.completed, p.total);
      if (p.completed == p.total) std::fputc('\n', stderr);
    };
  }
  return estimate(c, d, f.realizations, f.seed, o);
}

int run_simulate(const Flags& f) {
  const io::RunFile run = load(f);
  io::CsvSink sink(f.out_path, result_header);
  for (const auto& c : run.expand()) {
    for (Detector d : run.detectors) {
      const auto est = simulate_point(c, d, run, f);
      sink.write(result_row(c, d, "montecarlo", est.per_link_mean, est.per_area_mean, est.std_error,
                            std::to_string(f.seed), run.window_radius, f.realizations));
    }
  }
  return 0;
}

void write_analytic_rows(io::CsvSink& sink, const SystemConfig& c, Detector d, const io::RunFile& run,
                         const Flags& f) {
  const auto q = analytic_value(c, d, analytic_options(f));
  sink.write(result_row(c, d, "analytic", q.value / c.lambda, q.value, q.error_estimate, "", run.window_radius, 0));
  const auto n_t = c.fixed_n_t();
  if (!n_t) return;
  // Bounds describe the interference-limited network.
  if (c.interference_limited) {
    if (c.csir == CsirMode::direct) {
      const BoundPair b = bounds_dcsir(c, d, f.epsilon);
      sink.write(result_row(c, d, "bound_lower", b.lower / c.lambda, b.lower, 0.0, "", run.window_radius, 0));
      sink.write(result_row(c, d, "bound_upper", b.upper / c.lambda, b.upper, 0.0, "", run.window_radius, 0));
    } else if (c.l_cancel > c.alpha / 2.0) {
      const double lb = lower_bound_lcsir(c, d, c.l_cancel, f.epsilon);
      sink.write(result_row(c, d, "bound_lower", lb / c.lambda, lb, 0.0, "", run.window_radius, 0));
    }
  }
  if (c.csir == CsirMode::direct || c.l_cancel > c.alpha / 2.0) {
    // per_link column carries the Aloha probability, per_area the optimal density.
    const OptimalDensity od = optimal_density(c, d, c.csir);
    sink.write(result_row(c, d, "optimal_density", od.aloha_probability, od.lambda_star, 0.0, "",
                          run.window_radius, 0));
  }
  if (c.csir == CsirMode::direct) {
    const double n_star = optimal_stream_count(c);
    sink.write(result_row(c, d, "optimal_n_t", n_star, n_star, 0.0, "", run.window_radius, 0));
  }
}

int run_analytic(const Flags& f) {
  const io::RunFile run = load(f);
  io::CsvSink sink(f.out_path, result_header);
  for (const auto& c : run.expand()) {
    for (Detector d : run.detectors) write_analytic_rows(sink, c, d, run, f);
  }
  return 0;
}

int run_compare(const Flags& f) {
  const io::RunFile run = load(f);
  io::CsvSink sink(f.out_path, compare_header);
  bool all_pass = true;
  for (const auto& c : run.expand()) {
    for (Detector d : run.detectors) {
      const auto est = simulate_point(c, d, run, f);
      const auto q = analytic_value(c, d, analytic_options(f));
      const double analytic_link = q.value / c.lambda;
      const double rel = std::abs(est.per_link_mean - analytic_link) / analytic_link;
      const bool pass = rel <= f.tolerance;
      all_pass = all_pass && pass;
      auto row = leading_cells(c, d);
      row.insert(row.end(), {format_number(est.per_link_mean), format_number(est.std_error),
                             format_number(analytic_link), format_number(rel), pass ? "true" : "false",
                             std::to_string(f.seed)});
      const auto tail = trailing_cells(c, run.window_radius, f.realizations);
      row.insert(row.end(), tail.begin(), tail.end());
      sink.write(row);
    }
  }
  return all_pass ? 0 : exit_tolerance_failed;
}

int run_sweep(const Flags& f) {
  const io::RunFile run = load(f);
  std::optional<io::SweepSpec> spec = run.sweep;
  if (!f.sweeps.empty()) {
    require(f.sweeps.size() == 1, ErrorKind::config_parse, "give one --sweep axis");
    spec = io::parse_sweep_argument(f.sweeps.front());
  }
  require(spec.has_value(), ErrorKind::config_parse, "sweep needs --sweep name=v1,v2,... or sweep_axis in the config");
  require(!spec->axis.empty(), ErrorKind::config_parse, "sweep axis name is empty");
  require(!spec->values.empty(), ErrorKind::config_parse, "sweep value list is empty");
  require(f.engine == "analytic" || f.engine == "montecarlo" || f.engine == "both", ErrorKind::config_parse,
          "--engine must be analytic, montecarlo or both");
  io::CsvSink sink(f.out_path, result_header);
  for (double v : spec->values) {
    const io::RunFile point = run.with(spec->axis, v);
    for (const auto& c : point.expand()) {
      for (Detector d : point.detectors) {
        if (f.engine != "montecarlo") {
          const auto q = analytic_value(c, d, analytic_options(f));
          sink.write(result_row(c, d, "analytic", q.value / c.lambda, q.value, q.error_estimate, "",
                                point.window_radius, 0));
        }
        if (f.engine != "analytic") {
          const auto est = simulate_point(c, d, point, f);
          sink.write(result_row(c, d, "montecarlo", est.per_link_mean, est.per_area_mean, est.std_error,
                                std::to_string(f.seed), point.window_radius, f.realizations));
        }
      }
    }
  }
  return 0;
}

int run_scaling(const Flags& f, std::optional<double> beta1, std::optional<double> beta2) {
  const io::RunFile run = load(f);
  io::ScalingSpec s = run.scaling;
  if (beta1) s.beta1 = *beta1;
  if (beta2) s.beta2 = *beta2;
  io::CsvSink sink(f.out_path, scaling_header);
  bool all_pass = true;
  for (double alpha : run.alpha) {
    Trajectory t;
    t.beta1 = s.beta1;
    t.beta2 = s.beta2;
    t.c1 = s.c1;
    t.c2 = s.c2;
    t.alpha = alpha;
    t.r_d = run.r_d;
    t.epsilon = f.epsilon;
    for (Detector d : run.detectors) {
      const ScalingRegime regime = classify(s.beta1, s.beta2, alpha, d, run.csir);
      std::vector<BoundSide> sides{BoundSide::lower};
      if (run.csir == CsirMode::direct) sides.push_back(BoundSide::upper);
      for (BoundSide side : sides) {
        require(s.log10_lo.has_value() == s.log10_hi.has_value(), ErrorKind::invalid_config,
                "set both lambda_log10_lo and lambda_log10_hi or neither");
        const SlopeFit fit = s.log10_lo ? fit_bound_slope(t, d, run.csir, side, *s.log10_lo, *s.log10_hi)
                                        : fit_bound_slope_past_knee(t, d, run.csir, side);
        const bool pass = std::abs(fit.fitted - fit.expected) <= f.tolerance * std::max(std::abs(fit.expected), 1.0);
        all_pass = all_pass && pass;
        sink.write({format_number(s.beta1), format_number(s.beta2), format_number(alpha), to_string(d),
                    to_string(run.csir), to_string(regime.bound_type), format_number(regime.per_link_exponent),
                    regime.log_factor ? "true" : "false", side == BoundSide::lower ? "lower" : "upper",
                    format_number(fit.fitted), format_number(fit.expected), pass ? "true" : "false",
                    fit.knee_log10 ? format_number(*fit.knee_log10) : "", format_number(fit.fit_lo_log10),
                    format_number(fit.fit_hi_log10)});
      }
    }
  }
  return all_pass ? 0 : exit_tolerance_failed;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config_parse: return exit_usage;
    case ErrorKind::quadrature_nonconvergence: return exit_quadrature;
    default: return exit_invalid;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral efficiency of MIMO Poisson bipolar networks: Monte Carlo and analytic engines"};
  app.require_subcommand(1);
  Flags f;
  std::optional<double> beta1;
  std::optional<double> beta2;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", f.config_path, "run file (key = value)");
    sub->add_option("--out", f.out_path, "CSV file to append to (default: stdout)");
    sub->add_flag("--interference-limited", f.interference_limited, "force sigma^2 = 0");
    sub->add_flag("--verbatim-theorem", f.verbatim_theorem, "use the displayed theorem forms");
    sub->add_option("--epsilon", f.epsilon, "bound slack (default 0.4)");
    sub->add_option("--tolerance", f.tolerance, "relative tolerance for compare / scaling");
  };
  auto monte_carlo = [&](CLI::App* sub) {
    sub->add_option("--seed", f.seed, "master seed");
    sub->add_option("--realizations", f.realizations, "Monte Carlo realizations per point")
        ->check(CLI::PositiveNumber);
    sub->add_option("--workers", f.workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--progress", f.progress, "report progress on stderr");
  };

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate at every config point");
  common(simulate);
  monte_carlo(simulate);
  auto* analytic = app.add_subcommand("analytic", "theorem, bound and optimal-parameter values");
  common(analytic);
  auto* compare = app.add_subcommand("compare", "Monte Carlo vs analytic with pass/fail at --tolerance");
  common(compare);
  monte_carlo(compare);
  auto* sweep = app.add_subcommand("sweep", "one row per value of a swept parameter");
  common(sweep);
  monte_carlo(sweep);
  sweep->add_option("--sweep", f.sweeps, "name=v1,v2,...");
  sweep->add_option("--engine", f.engine, "analytic, montecarlo or both");
  auto* scaling = app.add_subcommand("scaling", "regime classification and fitted bound slopes");
  common(scaling);
  scaling->add_option("--beta1", beta1, "N_t = c1 lambda^beta1");
  scaling->add_option("--beta2", beta2, "N_r = c2 lambda^beta2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  try {
    if (*simulate) return run_simulate(f);
    if (*analytic) return run_analytic(f);
    if (*compare) return run_compare(f);
    if (*sweep) return run_sweep(f);
    if (*scaling) return run_scaling(f, beta1, beta2);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_invalid;
  }
  return 0;
}
