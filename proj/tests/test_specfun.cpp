#include "doctest.h"

#include <cmath>
#include <numbers>

#include "frachp/noise.hpp"
#include "frachp/specfun.hpp"
#include "support/oracles.hpp"

using namespace frachp;

TEST_CASE("gamma: exact values") {
  CHECK(frachp::gamma(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(frachp::gamma(5.0) == doctest::Approx(24.0).epsilon(1e-14));
  CHECK(frachp::gamma(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
  // 50-digit oracle: Gamma(0.6) = 1.48919224881281715...
  CHECK(frachp::gamma(0.6) == doctest::Approx(1.4891922488128172).epsilon(1e-13));
  CHECK(oracle::gamma50(0.6) == doctest::Approx(1.4891922488128172).epsilon(1e-15));
}

TEST_CASE("gamma: rejects non-positive arguments") {
  for (double x : {0.0, -1.0, -0.5}) {
    try {
      frachp::gamma(x);
      FAIL("expected NonPositiveArgument");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::NonPositiveArgument);
    }
  }
}

TEST_CASE("gamma: recurrence on 1000 random points in (0.1, 9]") {
  const CounterStream rng(2024);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const double x = 0.1 + 8.9 * rng.uniform(i);
    CHECK(std::abs(frachp::gamma(x + 1.0) / (x * frachp::gamma(x)) - 1.0) <= 1e-11);
  }
}

TEST_CASE("gamma: reflection formula on (0.1, 0.9)") {
  for (int i = 1; i < 80; ++i) {
    const double x = 0.1 + 0.01 * i;
    const double lhs = frachp::gamma(x) * frachp::gamma(1.0 - x) * std::sin(std::numbers::pi * x) / std::numbers::pi;
    CHECK(std::abs(lhs - 1.0) <= 1e-10);
  }
}

TEST_CASE("power_kernel") {
  const double h = 1e-4;
  CHECK(power_kernel(0.8, 0.8 - h, 0.0) == 1.0);
  CHECK(power_kernel(1.0, 0.0, 0.3 - 1.0) == 1.0);
  // 0.8^-0.3 = 1.06923459999118800601... (40-digit mpmath)
  CHECK(power_kernel(0.8, 0.0, 0.3 - 0.6) == doctest::Approx(1.069234599991188).epsilon(1e-14));
  try {
    power_kernel(0.8, 0.8, -0.3);
    FAIL("expected KernelSingularity");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::KernelSingularity);
  }
  CHECK_THROWS_AS(power_kernel(0.8, 0.9, 0.5), Error);
}

TEST_CASE("power_kernel is monotone in s") {
  double prev = power_kernel(1.0, 0.0, -0.4);
  for (int i = 1; i < 100; ++i) {
    const double next = power_kernel(1.0, 0.0099 * i, -0.4);
    CHECK(next > prev);
    prev = next;
  }
  prev = power_kernel(1.0, 0.0, 0.4);
  for (int i = 1; i < 100; ++i) {
    const double next = power_kernel(1.0, 0.0099 * i, 0.4);
    CHECK(next < prev);
    prev = next;
  }
}

TEST_CASE("hp_noise_coefficient") {
  SUBCASE("alpha == beta collapses to exactly one") {
    for (double a : {0.1, 0.37, 0.6, 1.0}) {
      const FractionalParams params(a, a, 0.8);
      for (int i = 0; i < 70; ++i) {
        CHECK(hp_noise_coefficient(params, 0.01 * i) == 1.0);
      }
    }
  }
  SUBCASE("paper parameters at s = 0") {
    const FractionalParams params(0.6, 0.3, 0.8);
    const double expected = oracle::gamma50(0.6) / oracle::gamma50(0.3) * 1.069234599991188;
    CHECK(hp_noise_coefficient(params, 0.0) == doctest::Approx(expected).epsilon(1e-13));
  }
  SUBCASE("singularity propagates") {
    const FractionalParams params(0.6, 0.3, 0.8);
    CHECK_THROWS_AS(hp_noise_coefficient(params, 0.8), Error);
  }
}

TEST_CASE("kernel_cell_integral matches the closed form and telescopes") {
  const double t = 0.8, beta = 0.3;
  double sum = 0.0;
  const int n = 800;
  for (int k = 0; k < n; ++k) {
    sum += kernel_cell_integral(t, k * 1e-3, (k + 1) * 1e-3 > t ? t : (k + 1) * 1e-3, beta);
  }
  CHECK(sum == doctest::Approx(std::pow(t, beta) / beta).epsilon(1e-12));
  CHECK(kernel_cell_integral(2.0, 0.5, 1.5, 1.0) == 1.0);
  CHECK(kernel_cell_integral(1.0, 0.0, 1.0, 0.5) == doctest::Approx(2.0).epsilon(1e-15));
}
