#include "frachp/fracint.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "frachp/specfun.hpp"

namespace frachp {

namespace {

void check_order(double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw Error(Errc::InvalidOrder, "fractional order must lie in (0, 1], got " + std::to_string(beta));
  }
}

double end_tolerance(double t) { return 1e-12 * std::max(1.0, std::abs(t)); }

void check_grid_end(const TimeGrid& grid, double t) {
  if (grid.t_end() > t + end_tolerance(t)) {
    throw Error(Errc::GridMismatch, "samples extend past the outer time t");
  }
}

bool same_step(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(a, b); }

void check_alignment(const TimeGrid& grid, const WienerPath& path) {
  if (grid.n_steps() != path.n_steps() || !same_step(grid.h(), path.h())) {
    throw Error(Errc::GridMismatch, "sampled function and Wiener path use different grids");
  }
}

// Cell [s_k, s_{k+1}] clipped to t; the final point may overshoot t by rounding.
double cell_right(const TimeGrid& grid, std::size_t k, double t) {
  return std::min(grid.point(k + 1), t);
}

}  // namespace

SampledFunction::SampledFunction(TimeGrid grid_in, std::vector<double> values_in)
    : grid(grid_in), values(std::move(values_in)) {
  if (values.size() != grid.n_steps() + 1) {
    throw Error(Errc::GridMismatch, "sampled function needs n_steps + 1 values");
  }
}

SampledFunction SampledFunction::sample(const TimeGrid& grid, const std::function<double(double)>& f) {
  std::vector<double> values(grid.n_steps() + 1);
  for (std::size_t k = 0; k < values.size(); ++k) {
    values[k] = f(grid.point(k));
  }
  return SampledFunction(grid, std::move(values));
}

SampledFunction SampledFunction::constant(const TimeGrid& grid, double c) {
  return SampledFunction(grid, std::vector<double>(grid.n_steps() + 1, c));
}

double rl_integral(const SampledFunction& f, double beta, double t) {
  check_order(beta);
  check_grid_end(f.grid, t);
  const auto& grid = f.grid;
  double sum = 0.0;
  for (std::size_t k = 0; k < grid.n_steps(); ++k) {
    sum += f.values[k] * kernel_cell_integral(t, grid.point(k), cell_right(grid, k, t), beta);
  }
  if (grid.t_end() < t) {
    sum += f.values.back() * kernel_cell_integral(t, grid.t_end(), t, beta);
  }
  return sum / gamma(beta);
}

double rectangle_integral(const SampledFunction& f, double t) {
  check_grid_end(f.grid, t);
  const auto& grid = f.grid;
  double sum = 0.0;
  for (std::size_t k = 0; k < grid.n_steps(); ++k) {
    sum += f.values[k] * (cell_right(grid, k, t) - grid.point(k));
  }
  if (grid.t_end() < t) {
    sum += f.values.back() * (t - grid.t_end());
  }
  return sum;
}

double fractional_wiener_integral(const SampledFunction& g, double beta, double t,
                                  const WienerPath& path, std::size_t channel,
                                  WienerKernelRule rule) {
  check_order(beta);
  check_alignment(g.grid, path);
  check_grid_end(g.grid, t);
  if (channel >= path.channels()) {
    throw Error(Errc::BadChannel, "channel " + std::to_string(channel) + " out of range");
  }
  const auto& grid = g.grid;
  const double exponent = 0.5 * (beta - 1.0);
  double sum = 0.0;
  for (std::size_t k = 0; k < grid.n_steps(); ++k) {
    const double s = grid.point(k);
    double weight = 1.0;
    if (beta != 1.0) {
      if (rule == WienerKernelRule::LeftEndpoint) {
        weight = power_kernel(t, s, exponent);
      } else {
        const double right = cell_right(grid, k, t);
        weight = std::sqrt(kernel_cell_integral(t, s, right, beta) / (right - s));
      }
    }
    sum += g.values[k] * weight * path.increment(k, channel);
  }
  return sum / gamma(0.5 * (beta + 1.0));
}

TimeFunction::TimeFunction(std::function<double(double)> f) : f_(std::move(f)) {
  if (!f_) {
    throw Error(Errc::InvalidValue, "time function is empty");
  }
}

TimeFunction TimeFunction::constant(double c) {
  return TimeFunction([c](double) { return c; });
}

TimeFunction TimeFunction::from_samples(const SampledFunction& samples) {
  return TimeFunction([samples](double s) {
    const auto& grid = samples.grid;
    const double offset = (s - grid.t_start()) / grid.h();
    if (offset <= 0.0) {
      return samples.values.front();
    }
    const auto k = std::min(static_cast<std::size_t>(std::floor(offset)), grid.n_steps());
    return samples.values[k];
  });
}

double bank_account(const TimeFunction& rate, double t, double h) {
  if (!(h > 0.0)) {
    throw Error(Errc::NonPositiveStep, "bank account quadrature step must be positive");
  }
  if (t < 0.0) {
    throw Error(Errc::InvalidValue, "bank account time must be nonnegative");
  }
  if (t == 0.0) {
    return 1.0;
  }
  const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(t / h)));
  const double step = t / static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    const double s = static_cast<double>(k) * step;
    const double r = rate(s);
    if (r < 0.0) {
      throw Error(Errc::NegativeRate, "interest rate is negative at s = " + std::to_string(s));
    }
    sum += (k == 0 || k == n) ? 0.5 * r : r;
  }
  return std::exp(sum * step);
}

SampledFunction solve_fractional_black_scholes(const VolterraCoefficients& coeffs, double beta,
                                               const TimeGrid& grid, const WienerPath& path) {
  check_order(beta);
  check_alignment(grid, path);
  if (!(coeffs.x0 > 0.0)) {
    throw Error(Errc::InvalidValue, "initial price X_0 must be positive");
  }
  const auto n = grid.n_steps();
  const double h = grid.h();

  std::vector<double> mu(n), sigma(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double s = grid.point(j);
    mu[j] = coeffs.mu(s);
    sigma[j] = coeffs.sigma(s);
    if (mu[j] < 0.0 || sigma[j] < 0.0) {
      throw Error(Errc::InvalidValue, "mu and sigma must be nonnegative (s = " + std::to_string(s) + ")");
    }
  }

  // Uniform grid: t_{k+1} - s_j = (k + 1 - j) h, so weights depend on the lag only.
  std::vector<double> drift_weight(n + 1), noise_weight(n + 1);
  for (std::size_t lag = 1; lag <= n; ++lag) {
    const double far = static_cast<double>(lag) * h;
    drift_weight[lag] = kernel_cell_integral(far, 0.0, h, beta);
    noise_weight[lag] = beta == 1.0 ? 1.0 : std::sqrt(drift_weight[lag] / h);
  }
  const double drift_scale = 1.0 / gamma(beta);
  const double noise_scale = 1.0 / gamma(0.5 * (beta + 1.0));

  std::vector<double> x(n + 1);
  std::vector<double> drift_integrand(n), noise_integrand(n);
  x[0] = coeffs.x0;
  for (std::size_t k = 0; k < n; ++k) {
    drift_integrand[k] = mu[k] * x[k];
    noise_integrand[k] = sigma[k] * x[k] * path.increment(k, 0);
    double drift = 0.0;
    double noise = 0.0;
    for (std::size_t j = 0; j <= k; ++j) {
      const auto lag = k + 1 - j;
      drift += drift_integrand[j] * drift_weight[lag];
      noise += noise_integrand[j] * noise_weight[lag];
    }
    x[k + 1] = coeffs.x0 + drift_scale * drift + noise_scale * noise;
    if (!std::isfinite(x[k + 1])) {
      throw Error(Errc::NumericalBlowup, "Volterra solution is not finite", k + 1);
    }
  }
  return SampledFunction(grid, std::move(x));
}

}  // namespace frachp
