#include "frachp/integrator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numbers>
#include <string>
#include <thread>

#include "frachp/specfun.hpp"

namespace frachp {

namespace {

bool same_step(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(a, b); }

void check_finite(const PhaseState& x, std::size_t step) {
  auto bad = [](const Vector& v) {
    return !v.allFinite() || (v.size() > 0 && v.cwiseAbs().maxCoeff() > kBlowupThreshold);
  };
  if (bad(x.q) || bad(x.v) || bad(x.p)) {
    throw Error(Errc::NumericalBlowup, "state left the finite range at step " + std::to_string(step), step);
  }
}

template <typename Visitor>
void run_steps(const EulerRun& run, Visitor&& visit) {
  const auto& grid = run.grid;
  PhaseState state = run.initial;
  for (std::size_t k = 0; k < grid.n_steps(); ++k) {
    state = euler_step(run.fields, grid.point(k), state, grid.h(), run.path.row(k));
    check_finite(state, k + 1);
    visit(state);
  }
}

PhaseState terminal_state(const EulerRun& run) {
  run.validate();
  PhaseState last = run.initial;
  run_steps(run, [&](const PhaseState& x) { last = x; });
  return last;
}

Trajectory shifted(const Trajectory& base, const Perturbation& w, double scale) {
  auto states = base.states;
  for (std::size_t k = 0; k < states.size(); ++k) {
    states[k].q += scale * w.dq[k];
    states[k].v += scale * w.dv[k];
    states[k].p += scale * w.dp[k];
  }
  return Trajectory(base.grid, std::move(states), base.seed_record);
}

}  // namespace

PhaseState euler_step(const SdeFields& fields, double s, const PhaseState& state, double h,
                      std::span<const double> increments) {
  if (increments.size() != fields.channels) {
    throw Error(Errc::DimensionMismatch, "increment vector must have one entry per channel");
  }
  const Eigen::Map<const Vector> dw(increments.data(), static_cast<Eigen::Index>(increments.size()));
  Vector q = state.q + h * fields.drift_q(s, state);
  Vector m = fields.momentum_like(state) + h * fields.drift_momentum(s, state);
  const Matrix sigma = fields.diffusion(s, state.q);
  if (!sigma.isZero(0.0)) {
    m += sigma * dw;
  }
  return fields.complete(q, m, state);
}

void EulerRun::validate() const {
  if (grid.n_steps() != path.n_steps() || !same_step(grid.h(), path.h())) {
    throw Error(Errc::GridMismatch, "grid and Wiener path differ in step or length");
  }
  if (path.channels() != fields.channels) {
    throw Error(Errc::BadChannel, "Wiener path channel count differs from the noise coupling");
  }
  if (initial.dim() != fields.dim) {
    throw Error(Errc::DimensionMismatch, "initial state dimension differs from the system");
  }
  check_singularity_guard(grid, fields.params);
}

Trajectory integrate(const EulerRun& run) {
  run.validate();
  std::vector<PhaseState> states;
  states.reserve(run.grid.n_steps() + 1);
  states.push_back(run.initial);
  run_steps(run, [&](const PhaseState& x) { states.push_back(x); });
  return Trajectory(run.grid, std::move(states), {run.path.seed(), run.path.channels()});
}

// ---- strong convergence ------------------------------------------------------

double log_log_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(Errc::DegenerateInput, "slope fit needs at least two points");
  }
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

ConvergenceReport strong_convergence_order(const ConvergenceSetup& setup) {
  if (setup.levels < 3) {
    throw Error(Errc::InvalidValue, "convergence study needs at least 3 levels");
  }
  if (setup.n_paths == 0) {
    throw Error(Errc::InvalidValue, "convergence study needs at least one path");
  }
  const std::size_t coarsest = std::size_t{1} << (setup.levels - 1);
  if (setup.base_steps == 0 || setup.base_steps % coarsest != 0) {
    throw Error(Errc::IndivisibleFactor,
                "base_steps must be a positive multiple of 2^(levels-1) = " + std::to_string(coarsest));
  }
  const auto& params = setup.fields.params;
  const double ref_h = setup.base_h / static_cast<double>(kConvergenceRefinement);
  const std::size_t ref_steps = setup.base_steps * kConvergenceRefinement;
  const TimeGrid ref_grid = make_grid(setup.t_start, ref_h, ref_steps, params);
  std::vector<TimeGrid> grids;
  for (std::size_t l = 0; l < setup.levels; ++l) {
    const std::size_t factor = std::size_t{1} << l;
    grids.push_back(make_grid(setup.t_start, setup.base_h * static_cast<double>(factor),
                              setup.base_steps / factor, params));
  }

  // errors[path][level]; reduced in path order afterwards.
  std::vector<std::vector<double>> errors(setup.n_paths, std::vector<double>(setup.levels));
  parallel_for(setup.n_paths, [&](std::size_t i) {
    const auto fine = generate_path(spawn_substream(setup.seed, i), ref_h, ref_steps, setup.fields.channels);
    const PhaseState reference = terminal_state({setup.fields, ref_grid, fine, setup.initial});
    for (std::size_t l = 0; l < setup.levels; ++l) {
      const auto path = coarsen(fine, kConvergenceRefinement << l);
      const PhaseState x = terminal_state({setup.fields, grids[l], path, setup.initial});
      const double dq = (x.q - reference.q).squaredNorm();
      const double dp = (x.p - reference.p).squaredNorm();
      errors[i][l] = std::sqrt(dq + dp);
    }
  });

  ConvergenceReport report{{}, 0.0};
  std::vector<double> hs, means;
  bool all_zero = true;
  for (std::size_t l = 0; l < setup.levels; ++l) {
    double sum = 0.0;
    for (std::size_t i = 0; i < setup.n_paths; ++i) {
      sum += errors[i][l];
    }
    const double mean = sum / static_cast<double>(setup.n_paths);
    all_zero = all_zero && mean == 0.0;
    report.levels.push_back({grids[l].h(), mean});
    hs.push_back(grids[l].h());
    means.push_back(mean);
  }
  if (all_zero) {
    throw Error(Errc::NotApplicable, "all convergence errors vanish; the fields are trivial");
  }
  if (std::any_of(means.begin(), means.end(), [](double e) { return !(e > 0.0); })) {
    throw Error(Errc::NotApplicable, "a convergence level has zero error; slope undefined");
  }
  report.slope = log_log_slope(hs, means);
  return report;
}

// ---- discrete HP action --------------------------------------------------------

ActionEvaluation evaluate_action(const Trajectory& trajectory, const SystemSpec& sys,
                                 const FractionalParams& params, const WienerPath& path) {
  const auto& grid = trajectory.grid;
  check_singularity_guard(grid, params);
  if (grid.n_steps() != path.n_steps() || !same_step(grid.h(), path.h())) {
    throw Error(Errc::GridMismatch, "trajectory and Wiener path use different grids");
  }
  const auto& noise = system_noise(sys);
  if (noise.channels() != path.channels()) {
    throw Error(Errc::BadChannel, "Wiener path channel count differs from the noise coupling");
  }
  const LagrangianFns lagrangian = lagrangian_of(sys);
  const double t = params.t_eval();
  const double h = grid.h();
  const double inv_gamma_alpha = 1.0 / gamma(params.alpha());
  const double inv_gamma_beta = 1.0 / gamma(params.beta());

  double deterministic = 0.0;
  double stochastic = 0.0;
  for (std::size_t k = 0; k < grid.n_steps(); ++k) {
    const auto& x = trajectory.states[k];
    const auto& next = trajectory.states[k + 1];
    const double s = grid.point(k);
    const Vector qdot = (next.q - x.q) / h;
    const double integrand = lagrangian.value(x.q, x.v) + x.p.dot(qdot - x.v);
    deterministic += integrand * kernel_cell_integral(t, s, grid.point(k + 1), params.alpha());

    const Vector mid = 0.5 * (x.q + next.q);
    const double kernel = power_kernel(t, s + 0.5 * h, params.beta() - 1.0);
    for (std::size_t a = 0; a < noise.channels(); ++a) {
      stochastic += noise.potential(a, mid) * kernel * path.increment(k, a);
    }
  }
  deterministic *= inv_gamma_alpha;
  stochastic *= inv_gamma_beta;
  const double value = deterministic + stochastic;
  if (!std::isfinite(value)) {
    throw Error(Errc::NumericalBlowup, "discrete action is not finite");
  }
  return {value, deterministic, stochastic};
}

double Perturbation::norm(double h) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < dq.size(); ++k) {
    sum += dq[k].squaredNorm() + dv[k].squaredNorm() + dp[k].squaredNorm();
  }
  return std::sqrt(h * sum);
}

bool Perturbation::is_zero() const {
  auto zero = [](const std::vector<Vector>& xs) {
    return std::all_of(xs.begin(), xs.end(), [](const Vector& x) { return x.isZero(0.0); });
  };
  return zero(dq) && zero(dv) && zero(dp);
}

Perturbation random_admissible_perturbation(const TimeGrid& grid, std::size_t dim, std::uint64_t seed,
                                            std::size_t modes) {
  const CounterStream stream(seed);
  std::uint64_t draw = 0;
  auto amplitude = [&] { return 2.0 * stream.uniform(draw++) - 1.0; };
  const auto n_points = grid.n_steps() + 1;
  const auto n = static_cast<Eigen::Index>(dim);
  const double span = grid.t_end() - grid.t_start();

  // coeffs[component][mode][i]
  auto draw_coeffs = [&] {
    std::vector<Vector> c(modes, Vector(n));
    for (auto& mode : c) {
      for (Eigen::Index i = 0; i < n; ++i) {
        mode[i] = amplitude();
      }
    }
    return c;
  };
  const auto cq = draw_coeffs();
  const auto cv = draw_coeffs();
  const auto cp = draw_coeffs();

  Perturbation w{std::vector<Vector>(n_points, Vector::Zero(n)), std::vector<Vector>(n_points, Vector::Zero(n)),
                 std::vector<Vector>(n_points, Vector::Zero(n))};
  for (std::size_t k = 0; k < n_points; ++k) {
    const double x = (grid.point(k) - grid.t_start()) / span;
    for (std::size_t j = 0; j < modes; ++j) {
      const double freq = std::numbers::pi * static_cast<double>(j + 1);
      w.dq[k] += std::sin(freq * x) * cq[j];
      w.dv[k] += std::cos(freq * x) * cv[j];
      w.dp[k] += std::sin(freq * x + 0.5) * cp[j];
    }
  }
  w.dq.front().setZero();
  w.dq.back().setZero();
  return w;
}

double action_derivative(const Trajectory& trajectory, const SystemSpec& sys, const FractionalParams& params,
                         const WienerPath& path, const Perturbation& perturbation) {
  const auto n_points = trajectory.states.size();
  if (perturbation.dq.size() != n_points || perturbation.dv.size() != n_points ||
      perturbation.dp.size() != n_points) {
    throw Error(Errc::GridMismatch, "perturbation must be sampled on the trajectory grid");
  }
  if (!perturbation.dq.front().isZero(0.0) || !perturbation.dq.back().isZero(0.0)) {
    throw Error(Errc::BoundaryViolation, "dq must vanish at both endpoints");
  }
  const double eps = kActionDerivativeEpsilon;
  const double up = evaluate_action(shifted(trajectory, perturbation, eps), sys, params, path).value;
  const double down = evaluate_action(shifted(trajectory, perturbation, -eps), sys, params, path).value;
  return (up - down) / (2.0 * eps);
}

StationarityReport stationarity_check(const Trajectory& trajectory, const SystemSpec& sys,
                                      const FractionalParams& params, const WienerPath& path,
                                      std::size_t count, std::uint64_t seed) {
  if (count == 0) {
    throw Error(Errc::DegenerateInput, "stationarity check needs at least one perturbation");
  }
  StationarityReport report{std::vector<double>(count), 0.0, 0.0};
  parallel_for(count, [&](std::size_t i) {
    const auto w = random_admissible_perturbation(trajectory.grid, trajectory.dim(), spawn_substream(seed, i));
    const double norm = w.norm(trajectory.grid.h());
    if (!(norm > 0.0)) {
      throw Error(Errc::DegenerateInput, "random perturbation has zero norm");
    }
    report.ratios[i] = std::abs(action_derivative(trajectory, sys, params, path, w)) / norm;
  });
  double sum = 0.0;
  for (double r : report.ratios) {
    report.max_ratio = std::max(report.max_ratio, r);
    sum += r;
  }
  report.mean_ratio = sum / static_cast<double>(count);
  return report;
}

// ---- ensembles ----------------------------------------------------------------

std::size_t ensemble_threads() {
  std::size_t requested = 0;
  if (const char* env = std::getenv("FRACHP_THREADS")) {
    char* end = nullptr;
    const auto value = std::strtoull(env, &end, 10);
    if (end != env) {
      requested = static_cast<std::size_t>(value);
    }
  }
  if (requested == 0) {
    requested = std::max(1u, std::thread::hardware_concurrency());
  }
  return requested;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const auto workers = std::min(ensemble_threads(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      body(i);
    }
    return;
  }
  std::vector<std::exception_ptr> failures(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back(work);
  }
  for (auto& t : pool) {
    t.join();
  }
  for (const auto& f : failures) {
    if (f) {
      std::rethrow_exception(f);
    }
  }
}

}  // namespace frachp
