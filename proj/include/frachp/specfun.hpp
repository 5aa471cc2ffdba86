#pragma once

#include "frachp/core.hpp"

namespace frachp {

/// Euler gamma function for x > 0 (Lanczos, g = 7, nine terms; reflection
/// below 1/2). Relative error is below 1e-14 on (0.1, 10].
double gamma(double x);

/// (t - s)^exponent computed as exp(exponent * log(t - s)); requires s < t.
double power_kernel(double t, double s, double exponent);

/// A singular kernel prefactor * (t - s)^exponent.
struct KernelSpec {
  double exponent = 0.0;
  double prefactor = 1.0;

  double operator()(double t, double s) const { return prefactor * power_kernel(t, s, exponent); }
};

/// Kernel Gamma(alpha)/Gamma(beta) * (t - s)^(beta - alpha) multiplying the
/// noise gradients in the Ito HP equations.
KernelSpec hp_noise_kernel(const FractionalParams& params);

/// The same kernel as printed for the metric velocity equation:
/// Gamma(beta)/Gamma(alpha) * (t - s)^(beta - 1).
KernelSpec hp_noise_kernel_eq15_literal(const FractionalParams& params);

/// hp_noise_kernel evaluated at (params.t_eval, s). Returns exactly 1.0 when
/// alpha and beta are bitwise equal.
double hp_noise_coefficient(const FractionalParams& params, double s);

/// Integral of (t - s)^(order - 1) over [a, b] with b <= t, i.e.
/// ((t - a)^order - (t - b)^order) / order, evaluated without cancellation.
double kernel_cell_integral(double t, double a, double b, double order);

}  // namespace frachp
