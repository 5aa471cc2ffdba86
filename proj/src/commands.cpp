#include "frachp/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "frachp/fracint.hpp"
#include "frachp/output.hpp"

namespace frachp {

namespace fs = std::filesystem;

namespace {

class OutputDir {
 public:
  explicit OutputDir(const std::string& path) : root_(path) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec) {
      throw Error(Errc::Io, "cannot create output directory " + path + ": " + ec.message());
    }
  }

  template <typename Writer>
  void write(const std::string& name, Writer&& writer) const {
    const auto file = root_ / name;
    fs::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary);
    if (!out) {
      throw Error(Errc::Io, "cannot open " + file.string());
    }
    writer(out);
    if (!out) {
      throw Error(Errc::Io, "failed writing " + file.string());
    }
  }

  void write_text(const std::string& name, const std::string& text) const {
    write(name, [&](std::ostream& out) { out << text; });
  }

 private:
  fs::path root_;
};

struct HpSetup {
  FractionalParams params;
  SystemSpec system;
  TimeGrid grid;
  PhaseState initial;
  AssemblyOptions options;
};

HpSetup hp_setup(const RunConfig& config) {
  const auto params = fractional_params(config);
  const auto grid = make_grid(config.t_start, config.h, config.n_steps, params);
  auto system = build_system(config);
  const auto [q0, p0] = initial_vectors(config, system_dim(system));
  auto initial = initial_state(system, q0, p0);
  return {params, std::move(system), grid, std::move(initial), {config.eq15_literal}};
}

Trajectory run_hp(const HpSetup& setup, const SystemSpec& system, const WienerPath& path) {
  return integrate({assemble_hp_fields(system, setup.params, setup.options), setup.grid, path, setup.initial});
}

PlotSeries p_vs_n(const Trajectory& t, const std::string& title) {
  PlotSeries s{title, "n", "p(nh)", {}, {}};
  for (std::size_t k = 0; k < t.states.size(); ++k) {
    s.x.push_back(static_cast<double>(k));
    s.y.push_back(t.states[k].p[0]);
  }
  return s;
}

PlotSeries phase_qp(const Trajectory& t, const std::string& title) {
  PlotSeries s{title, "q(nh)", "p(nh)", {}, {}};
  for (const auto& x : t.states) {
    s.x.push_back(x.q[0]);
    s.y.push_back(x.p[0]);
  }
  return s;
}

std::string real(double x) { return format_real(x); }

// Configured inputs read back in the log without binary noise.
std::string input(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace

double momentum_quadratic_variation(const Trajectory& trajectory) {
  double sum = 0.0;
  for (std::size_t k = 1; k < trajectory.states.size(); ++k) {
    const double d = trajectory.states[k].p[0] - trajectory.states[k - 1].p[0];
    sum += d * d;
  }
  return sum;
}

int cmd_simulate(const RunConfig& config, std::ostream& log) {
  const auto setup = hp_setup(config);
  const auto& noise = system_noise(setup.system);
  const auto path = generate_path(config.seed, config.h, config.n_steps, noise.channels());
  const auto deterministic_system = with_noise(setup.system, NoiseCoupling::constant(1.0, noise.channels()));

  const auto noisy = run_hp(setup, setup.system, path);
  const auto deterministic = run_hp(setup, deterministic_system, path);
  const bool with_v = !std::holds_alternative<HamiltonianSystem>(setup.system);

  const OutputDir out(config.outputs);
  out.write("trajectory.csv", [&](std::ostream& os) { write_trajectory_csv(os, noisy, with_v); });
  out.write("trajectory_deterministic.csv",
            [&](std::ostream& os) { write_trajectory_csv(os, deterministic, with_v); });
  if (config.dump_path) {
    out.write("wiener_path.csv", [&](std::ostream& os) { write_path_csv(os, path, config.t_start); });
  }
  if (config.plot) {
    out.write("p_vs_n.svg", [&](std::ostream& os) { write_svg(os, p_vs_n(deterministic, "orbit (n, p(nh))")); });
    out.write("phase_qp.svg",
              [&](std::ostream& os) { write_svg(os, phase_qp(deterministic, "orbit (q(nh), p(nh))")); });
    out.write("p_vs_n_noisy.svg",
              [&](std::ostream& os) { write_svg(os, p_vs_n(noisy, "orbit (n, p(nh, w))")); });
    out.write("phase_qp_noisy.svg",
              [&](std::ostream& os) { write_svg(os, phase_qp(noisy, "orbit (q(nh, w), p(nh, w))")); });
  }
  out.write_text("run_manifest", to_manifest(config));

  const auto& last = noisy.states.back();
  log << "simulate: " << config.system << ", " << config.n_steps << " steps of h = " << input(config.h)
      << ", seed " << config.seed << '\n'
      << "  terminal q_1 = " << real(last.q[0]) << ", p_1 = " << real(last.p[0]) << '\n'
      << "  quadratic variation of p_1: noisy " << real(momentum_quadratic_variation(noisy))
      << ", deterministic " << real(momentum_quadratic_variation(deterministic)) << '\n'
      << "  wrote " << config.outputs << '\n';
  return kExitOk;
}

int cmd_convergence(const RunConfig& config, std::ostream& log) {
  const auto setup = hp_setup(config);
  ConvergenceSetup study{assemble_hp_fields(setup.system, setup.params, setup.options),
                         setup.initial,
                         config.t_start,
                         config.h,
                         config.n_steps,
                         config.levels,
                         config.n_paths,
                         config.seed};
  const auto report = strong_convergence_order(study);

  const OutputDir out(config.outputs);
  out.write("convergence.csv", [&](std::ostream& os) {
    os << "h,mean_error\n";
    for (const auto& level : report.levels) {
      os << real(level.h) << ',' << real(level.mean_error) << '\n';
    }
  });
  out.write_text("run_manifest", to_manifest(config));

  log << "convergence: " << config.n_paths << " paths, " << config.levels << " levels from h = " << input(config.h)
      << '\n';
  for (const auto& level : report.levels) {
    log << "  h = " << input(level.h) << "  mean error = " << real(level.mean_error) << '\n';
  }
  char slope[64];
  std::snprintf(slope, sizeof slope, "%.4f", report.slope);
  log << "fitted slope: " << slope << '\n';
  return kExitOk;
}

ActionCheckOutcome run_action_check(const Trajectory& trajectory, const SystemSpec& sys,
                                    const FractionalParams& params, const WienerPath& path, std::size_t count,
                                    std::uint64_t seed, double threshold) {
  auto report = stationarity_check(trajectory, sys, params, path, count, seed);
  const bool passed = report.max_ratio <= threshold;
  return {std::move(report), threshold, passed};
}

int cmd_action_check(const RunConfig& config, std::ostream& log) {
  const auto setup = hp_setup(config);
  const auto& noise = system_noise(setup.system);
  std::ostringstream report;
  int status = kExitOk;

  if (noise.is_constant()) {
    const auto path = generate_path(config.seed, config.h, config.n_steps, noise.channels());
    const auto trajectory = run_hp(setup, setup.system, path);
    const auto outcome = run_action_check(trajectory, setup.system, setup.params, path, config.perturbations,
                                          config.seed, config.stationarity_threshold);
    report << "action-check (deterministic): " << config.perturbations << " admissible perturbations\n"
           << "max |dA(w)|/|w| = " << real(outcome.report.max_ratio) << '\n'
           << "mean |dA(w)|/|w| = " << real(outcome.report.mean_ratio) << '\n'
           << "threshold = " << real(outcome.threshold) << '\n'
           << (outcome.passed ? "PASS" : "FAIL") << '\n';
    status = outcome.passed ? kExitOk : kExitCheckFailed;
  } else {
    if (config.perturbations == 0) {
      throw Error(Errc::DegenerateInput, "stationarity check needs at least one perturbation");
    }
    std::vector<double> max_ratio(config.n_paths), mean_ratio(config.n_paths);
    for (std::size_t i = 0; i < config.n_paths; ++i) {
      const auto path = generate_path(spawn_substream(config.seed, i), config.h, config.n_steps, noise.channels());
      const auto trajectory = run_hp(setup, setup.system, path);
      const auto r = stationarity_check(trajectory, setup.system, setup.params, path, config.perturbations,
                                        spawn_substream(config.seed ^ 0x5A5A5A5A5A5A5A5AULL, i));
      max_ratio[i] = r.max_ratio;
      mean_ratio[i] = r.mean_ratio;
    }
    auto mean = [](const std::vector<double>& xs) {
      double s = 0.0;
      for (double x : xs) s += x;
      return s / static_cast<double>(xs.size());
    };
    auto stddev = [&](const std::vector<double>& xs) {
      const double m = mean(xs);
      double s = 0.0;
      for (double x : xs) s += (x - m) * (x - m);
      return xs.size() > 1 ? std::sqrt(s / static_cast<double>(xs.size() - 1)) : 0.0;
    };
    report << "action-check (noisy, not gated): " << config.n_paths << " paths x " << config.perturbations
           << " perturbations\n"
           << "E[mean |dA(w)|/|w|] = " << real(mean(mean_ratio)) << " (sd " << real(stddev(mean_ratio)) << ")\n"
           << "E[max |dA(w)|/|w|] = " << real(mean(max_ratio)) << " (sd " << real(stddev(max_ratio)) << ")\n";
  }

  const OutputDir out(config.outputs);
  out.write_text("action_check.txt", report.str());
  out.write_text("run_manifest", to_manifest(config));
  log << report.str();
  return status;
}

int cmd_volterra(const RunConfig& config, std::ostream& log) {
  if (config.t_start != 0.0) {
    throw Error(Errc::InvalidValue, "key `t_start`: the Volterra equation starts at 0");
  }
  const TimeGrid grid(0.0, config.h, config.n_steps);
  if (!(config.beta > 0.0 && config.beta <= 1.0)) {
    throw Error(Errc::InvalidOrder, "key `beta` must lie in (0, 1]");
  }
  const VolterraCoefficients coeffs{TimeFunction::constant(config.mu), TimeFunction::constant(config.sigma),
                                    config.x0, TimeFunction::constant(config.rate)};
  const double horizon = grid.t_end();
  const double account = bank_account(coeffs.rate, horizon, config.h);

  std::vector<double> terminal(config.n_paths);
  const auto kept = std::min(config.volterra_path_files, config.n_paths);
  std::vector<SampledFunction> kept_paths(kept, SampledFunction::constant(grid, 0.0));
  parallel_for(config.n_paths, [&](std::size_t i) {
    const auto path = generate_path(spawn_substream(config.seed, i), config.h, config.n_steps, 1);
    auto x = solve_fractional_black_scholes(coeffs, config.beta, grid, path);
    terminal[i] = x.values.back();
    if (i < kept) {
      kept_paths[i] = std::move(x);
    }
  });

  double mean = 0.0;
  for (double x : terminal) mean += x;
  mean /= static_cast<double>(terminal.size());
  double var = 0.0;
  for (double x : terminal) var += (x - mean) * (x - mean);
  var = terminal.size() > 1 ? var / static_cast<double>(terminal.size() - 1) : 0.0;

  const OutputDir out(config.outputs);
  for (std::size_t i = 0; i < kept; ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "paths/path_%05zu.csv", i);
    out.write(name, [&](std::ostream& os) {
      os << "step,s,X\n";
      for (std::size_t k = 0; k < kept_paths[i].values.size(); ++k) {
        os << k << ',' << real(grid.point(k)) << ',' << real(kept_paths[i].values[k]) << '\n';
      }
    });
  }
  out.write("summary.csv", [&](std::ostream& os) {
    os << "n_paths,mean_XT,var_XT\n" << config.n_paths << ',' << real(mean) << ',' << real(var) << '\n';
  });
  out.write_text("run_manifest", to_manifest(config));

  log << "volterra: beta = " << input(config.beta) << ", mu = " << input(config.mu) << ", sigma = "
      << input(config.sigma) << ", T = " << input(horizon) << ", " << config.n_paths << " paths\n"
      << "  mean X_T = " << real(mean) << ", var X_T = " << real(var)
      << ", standard error = " << real(std::sqrt(var / static_cast<double>(config.n_paths))) << '\n'
      << "  bank account A_T = " << real(account) << '\n';
  if (config.sigma == 0.0 && config.beta == 1.0) {
    const double exact = config.x0 * std::exp(config.mu * horizon);
    log << "  sigma = 0 closed form X_0 e^(mu T) = " << real(exact)
        << ", relative difference = " << real(std::abs(mean - exact) / exact) << '\n';
  }
  return kExitOk;
}

}  // namespace frachp
