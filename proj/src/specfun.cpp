#include "frachp/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace frachp {

namespace {

// Lanczos coefficients for g = 7, n = 9 (Godfrey).
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

double lanczos_gamma(double x) {
  if (x < 0.5) {
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * lanczos_gamma(1.0 - x));
  }
  x -= 1.0;
  double series = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) {
    series += kLanczos[i] / (x + static_cast<double>(i));
  }
  const double t = x + kLanczosG + 0.5;
  // t^(x+1/2) e^-t split in two halves to delay overflow for large x.
  const double half = std::pow(t, 0.5 * (x + 0.5));
  return std::sqrt(2.0 * std::numbers::pi) * half * (half * std::exp(-t)) * series;
}

}  // namespace

double gamma(double x) {
  if (!(x > 0.0)) {
    throw Error(Errc::NonPositiveArgument, "gamma needs x > 0, got " + std::to_string(x));
  }
  return lanczos_gamma(x);
}

double power_kernel(double t, double s, double exponent) {
  const double d = t - s;
  if (!(d > 0.0)) {
    throw Error(Errc::KernelSingularity,
                "kernel evaluated at t - s = " + std::to_string(d) + " <= 0");
  }
  if (exponent == 0.0) {
    return 1.0;
  }
  return std::exp(exponent * std::log(d));
}

KernelSpec hp_noise_kernel(const FractionalParams& params) {
  if (params.alpha() == params.beta()) {
    return {0.0, 1.0};
  }
  return {params.beta() - params.alpha(), gamma(params.alpha()) / gamma(params.beta())};
}

KernelSpec hp_noise_kernel_eq15_literal(const FractionalParams& params) {
  return {params.beta() - 1.0, gamma(params.beta()) / gamma(params.alpha())};
}

double hp_noise_coefficient(const FractionalParams& params, double s) {
  if (!(params.t_eval() - s > 0.0)) {
    throw Error(Errc::KernelSingularity, "noise coefficient needs s < t_eval");
  }
  if (params.alpha() == params.beta()) {
    return 1.0;
  }
  return hp_noise_kernel(params)(params.t_eval(), s);
}

double kernel_cell_integral(double t, double a, double b, double order) {
  const double far = t - a;
  const double near = t - b;
  if (!(far > 0.0) || near < 0.0 || b < a) {
    throw Error(Errc::KernelSingularity, "kernel cell must satisfy a <= b <= t, a < t");
  }
  if (order == 1.0) {
    return b - a;
  }
  if (near == 0.0) {
    return std::pow(far, order) / order;
  }
  // (far^o - near^o)/o = -far^o * expm1(o * log1p(-(b - a)/far)) / o
  const double ratio_log = std::log1p(-(b - a) / far);
  return -std::pow(far, order) * std::expm1(order * ratio_log) / order;
}

}  // namespace frachp
