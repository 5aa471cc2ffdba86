#pragma once

// Test-only reference computations. Nothing here calls into the code paths
// it is used to check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using Vec = Eigen::VectorXd;

/// Gamma at 50 decimal digits.
inline double gamma50(double x) {
  using boost::multiprecision::cpp_bin_float_50;
  return static_cast<double>(boost::math::tgamma(cpp_bin_float_50(x)));
}

/// Five-point central-difference gradient.
inline Vec gradient(const std::function<double(const Vec&)>& f, const Vec& x) {
  Vec g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = 1e-3 * (1.0 + std::abs(x[i]));
    auto at = [&](double d) {
      Vec y = x;
      y[i] += d;
      return f(y);
    };
    g[i] = (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
  }
  return g;
}

/// Relative error with a unit floor on the scale, so that gradients near
/// zero are compared absolutely.
inline double rel_error(const Vec& a, const Vec& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

/// Classical RK4 for y' = f(s, y) on [s0, s0 + n h].
inline Vec rk4(const std::function<Vec(double, const Vec&)>& f, Vec y, double s0, double h, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double s = s0 + static_cast<double>(k) * h;
    const Vec k1 = f(s, y);
    const Vec k2 = f(s + h / 2, y + h / 2 * k1);
    const Vec k3 = f(s + h / 2, y + h / 2 * k2);
    const Vec k4 = f(s + h, y + h * k3);
    y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return y;
}

/// RK4 at h and h/2 combined by Richardson extrapolation (fifth order).
inline Vec rk4_step_doubled(const std::function<Vec(double, const Vec&)>& f, const Vec& y0, double s0,
                            double h, std::size_t n) {
  const Vec coarse = rk4(f, y0, s0, h, n);
  const Vec fine = rk4(f, y0, s0, h / 2, 2 * n);
  return (16.0 * fine - coarse) / 15.0;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Kolmogorov-Smirnov distance of a sample to the standard normal.
inline double ks_statistic(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = normal_cdf(xs[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

inline double mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

inline double variance(const std::vector<double>& xs) {
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

inline double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  const double ma = mean(a), mb = mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace oracle
