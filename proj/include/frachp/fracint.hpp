#pragma once

#include <functional>
#include <vector>

#include "frachp/core.hpp"
#include "frachp/noise.hpp"

namespace frachp {

/// Values of a function on every point of a grid (length n_steps + 1).
struct SampledFunction {
  TimeGrid grid;
  std::vector<double> values;

  SampledFunction(TimeGrid grid_in, std::vector<double> values_in);

  static SampledFunction sample(const TimeGrid& grid, const std::function<double(double)>& f);
  static SampledFunction constant(const TimeGrid& grid, double c);
};

/// How the stochastic kernel (t - s)^((beta-1)/2) is attached to step k.
enum class WienerKernelRule {
  /// Kernel sampled at the left endpoint s_k.
  LeftEndpoint,
  /// Kernel replaced by its root-mean-square over [s_k, s_k+1], so the
  /// discrete sum carries the exact Ito-isometry variance per cell. Valid
  /// when the grid reaches t.
  VarianceMatched,
};

/// Riemann-Liouville integral (1/Gamma(beta)) * int_{t_start}^t f(s) (t-s)^(beta-1) ds
/// by the product rectangle rule: left-endpoint f, kernel integrated exactly
/// on each cell. A grid ending before t is extended by its last sample.
double rl_integral(const SampledFunction& f, double beta, double t);

/// Plain left-rectangle integral of f over [t_start, t], same tail rule.
double rectangle_integral(const SampledFunction& f, double t);

/// Ito sum (1/Gamma((beta+1)/2)) * sum_k g(s_k) w_k G_channel(k), with w_k
/// the kernel weight chosen by `rule`.
double fractional_wiener_integral(const SampledFunction& g, double beta, double t,
                                  const WienerPath& path, std::size_t channel,
                                  WienerKernelRule rule = WienerKernelRule::VarianceMatched);

/// A rate/coefficient function of time. Built either from a closed form or
/// from grid samples (piecewise constant, left-continuous).
class TimeFunction {
 public:
  explicit TimeFunction(std::function<double(double)> f);

  static TimeFunction constant(double c);
  static TimeFunction from_samples(const SampledFunction& samples);

  double operator()(double s) const { return f_(s); }

 private:
  std::function<double(double)> f_;
};

/// A_t = exp(int_0^t r(s) ds), trapezoidal with step close to h.
double bank_account(const TimeFunction& rate, double t, double h);

struct VolterraCoefficients {
  TimeFunction mu;
  TimeFunction sigma;
  double x0;
  TimeFunction rate;
};

/// Explicit Volterra-Euler recursion for
///   X_t = X_0 + I_t^beta[mu X] + W_t^beta[sigma X],
/// evaluated at every grid point with t = t_{k+1}; drift weights are exact
/// kernel cell integrals and noise weights use WienerKernelRule::VarianceMatched.
SampledFunction solve_fractional_black_scholes(const VolterraCoefficients& coeffs, double beta,
                                               const TimeGrid& grid, const WienerPath& path);

}  // namespace frachp
