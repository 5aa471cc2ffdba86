#include "doctest.h"

#include <cmath>

#include "frachp/fracint.hpp"
#include "frachp/specfun.hpp"
#include "support/oracles.hpp"

using namespace frachp;

namespace {

// Mittag-Leffler E_b(z) by its power series; fine for moderate |z|.
double mittag_leffler(double b, double z) {
  double sum = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double term = std::pow(z, k) / oracle::gamma50(b * k + 1.0);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

TimeGrid grid_to(double t, std::size_t n) { return TimeGrid(0.0, t / static_cast<double>(n), n); }

}  // namespace

TEST_CASE("RL integral of a constant is exact") {
  for (double beta : {0.3, 0.6, 1.0}) {
    const double t = 0.8;
    const auto f = SampledFunction::constant(grid_to(t, 800), 1.0);
    const double expected = std::pow(t, beta) / oracle::gamma50(beta + 1.0);
    CHECK(rl_integral(f, beta, t) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("RL integral of s converges at first order") {
  const double t = 0.8, beta = 0.6;
  const double expected = std::pow(t, beta + 1.0) / oracle::gamma50(beta + 2.0);
  double previous = 0.0;
  for (std::size_t n : {100u, 200u, 400u, 800u}) {
    const auto f = SampledFunction::sample(grid_to(t, n), [](double s) { return s; });
    const double err = std::abs(rl_integral(f, beta, t) - expected);
    if (previous > 0.0) {
      CHECK(err / previous == doctest::Approx(0.5).epsilon(0.1));
    }
    previous = err;
  }
}

TEST_CASE("RL integral is linear and reduces to a rectangle sum at beta = 1") {
  const auto grid = grid_to(1.0, 300);
  const auto f = SampledFunction::sample(grid, [](double s) { return std::cos(3 * s); });
  const auto g = SampledFunction::sample(grid, [](double s) { return s * s - 1.0; });
  std::vector<double> combo(f.values.size());
  for (std::size_t i = 0; i < combo.size(); ++i) combo[i] = 2.0 * f.values[i] - 0.5 * g.values[i];
  const SampledFunction c(grid, combo);
  CHECK(rl_integral(c, 0.4, 1.0) ==
        doctest::Approx(2.0 * rl_integral(f, 0.4, 1.0) - 0.5 * rl_integral(g, 0.4, 1.0)).epsilon(1e-12));
  CHECK(rl_integral(f, 1.0, 1.0) == doctest::Approx(rectangle_integral(f, 1.0)).epsilon(1e-12));
}

TEST_CASE("a grid past t is rejected; a grid short of t is extended") {
  const auto f = SampledFunction::constant(grid_to(1.0, 10), 1.0);
  try {
    rl_integral(f, 0.5, 0.9);
    FAIL("expected GridMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::GridMismatch);
  }
  CHECK(rectangle_integral(f, 1.5) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(rl_integral(f, 0.5, 1.5) == doctest::Approx(std::pow(1.5, 0.5) / oracle::gamma50(1.5)).epsilon(1e-12));
}

TEST_CASE("fractional Wiener integral") {
  SUBCASE("beta = 1 with g = 1 is the terminal Wiener value") {
    const auto grid = grid_to(1.0, 500);
    const auto path = generate_path(9, grid.h(), 500, 2);
    const auto one = SampledFunction::constant(grid, 1.0);
    for (std::size_t a = 0; a < 2; ++a)
      CHECK(fractional_wiener_integral(one, 1.0, 1.0, path, a) ==
            doctest::Approx(path.terminal_value(a)).epsilon(1e-12));
  }
  SUBCASE("linearity in g") {
    const auto grid = grid_to(0.8, 200);
    const auto path = generate_path(2, grid.h(), 200, 1);
    const auto f = SampledFunction::sample(grid, [](double s) { return std::sin(s); });
    const auto g = SampledFunction::sample(grid, [](double s) { return 1.0 + s; });
    std::vector<double> combo(f.values.size());
    for (std::size_t i = 0; i < combo.size(); ++i) combo[i] = 3.0 * f.values[i] + g.values[i];
    const double lhs = fractional_wiener_integral(SampledFunction(grid, combo), 0.3, 0.8, path, 0);
    const double rhs = 3.0 * fractional_wiener_integral(f, 0.3, 0.8, path, 0) +
                       fractional_wiener_integral(g, 0.3, 0.8, path, 0);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
  SUBCASE("variance matches the Ito isometry") {
    const double beta = 0.3, t = 0.8;
    const std::size_t n = 200, K = 4000;
    const auto grid = grid_to(t, n);
    const auto one = SampledFunction::constant(grid, 1.0);
    std::vector<double> samples(K);
    for (std::size_t i = 0; i < K; ++i) {
      const auto path = generate_path(spawn_substream(5, i), grid.h(), n, 1);
      samples[i] = fractional_wiener_integral(one, beta, t, path, 0);
    }
    const double g = oracle::gamma50((beta + 1.0) / 2.0);
    const double expected = std::pow(t, beta) / (beta * g * g);
    CHECK(std::abs(oracle::variance(samples) - expected) <= 5.0 * expected * std::sqrt(2.0 / K));
    CHECK(std::abs(oracle::mean(samples)) <= 5.0 * std::sqrt(expected / K));
  }
  SUBCASE("left endpoint rule and a grid past t") {
    const auto grid = grid_to(0.8, 80);
    const auto path = generate_path(1, grid.h(), 80, 1);
    const auto one = SampledFunction::constant(grid, 1.0);
    CHECK(std::isfinite(fractional_wiener_integral(one, 0.3, 0.8, path, 0, WienerKernelRule::LeftEndpoint)));
    try {
      fractional_wiener_integral(one, 0.3, 0.7, path, 0);
      FAIL("expected GridMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::GridMismatch);
    }
  }
  SUBCASE("bad channel") {
    const auto grid = grid_to(1.0, 10);
    const auto path = generate_path(1, grid.h(), 10, 1);
    try {
      fractional_wiener_integral(SampledFunction::constant(grid, 1.0), 0.5, 1.0, path, 1);
      FAIL("expected BadChannel");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::BadChannel);
    }
  }
}

TEST_CASE("bank account") {
  CHECK(bank_account(TimeFunction::constant(0.0), 2.0, 1e-3) == 1.0);
  CHECK(bank_account(TimeFunction::constant(0.05), 1.0, 1e-3) == doctest::Approx(std::exp(0.05)).epsilon(1e-12));
  CHECK(bank_account(TimeFunction([](double s) { return s; }), 1.0, 1e-3) ==
        doctest::Approx(std::exp(0.5)).epsilon(1e-6));
  try {
    bank_account(TimeFunction::constant(-0.1), 1.0, 1e-3);
    FAIL("expected NegativeRate");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NegativeRate);
  }
}

TEST_CASE("fractional Black-Scholes recursion") {
  const auto no_noise = [](double mu, double beta, std::size_t n, double t) {
    const auto grid = grid_to(t, n);
    const auto path = generate_path(1, grid.h(), n, 1);
    VolterraCoefficients c{TimeFunction::constant(mu), TimeFunction::constant(0.0), 1.0, TimeFunction::constant(0.0)};
    return solve_fractional_black_scholes(c, beta, grid, path);
  };
  SUBCASE("beta = 1, sigma = 0 is explicit Euler for X' = mu X") {
    const auto x = no_noise(0.1, 1.0, 1000, 1.0);
    CHECK(x.values.front() == 1.0);
    for (std::size_t k : {1u, 10u, 1000u})
      CHECK(x.values[k] == doctest::Approx(std::pow(1.0 + 0.1 * 1e-3, double(k))).epsilon(1e-11));
    CHECK(std::abs(x.values.back() / std::exp(0.1) - 1.0) < 0.01);
  }
  SUBCASE("sigma = 0 approaches the Mittag-Leffler solution") {
    const double beta = 0.6, mu = 0.5, t = 1.0;
    const double expected = mittag_leffler(beta, mu * std::pow(t, beta));
    const double e1 = std::abs(no_noise(mu, beta, 500, t).values.back() - expected);
    const double e2 = std::abs(no_noise(mu, beta, 2000, t).values.back() - expected);
    CHECK(e2 < e1);
    CHECK(e2 / expected < 0.01);
  }
  SUBCASE("mu = 0 keeps the mean at X0") {
    const std::size_t n = 100, K = 4000;
    const auto grid = grid_to(1.0, n);
    VolterraCoefficients c{TimeFunction::constant(0.0), TimeFunction::constant(0.2), 1.0,
                           TimeFunction::constant(0.0)};
    std::vector<double> terminal(K);
    for (std::size_t i = 0; i < K; ++i) {
      const auto path = generate_path(spawn_substream(3, i), grid.h(), n, 1);
      terminal[i] = solve_fractional_black_scholes(c, 0.5, grid, path).values.back();
    }
    CHECK(std::abs(oracle::mean(terminal) - 1.0) <= 4.0 * std::sqrt(oracle::variance(terminal) / K));
  }
  SUBCASE("invalid coefficients") {
    const auto grid = grid_to(1.0, 10);
    const auto path = generate_path(1, grid.h(), 10, 1);
    VolterraCoefficients neg{TimeFunction::constant(0.1), TimeFunction::constant(-0.2), 1.0,
                             TimeFunction::constant(0.0)};
    CHECK_THROWS_AS(solve_fractional_black_scholes(neg, 0.5, grid, path), Error);
    VolterraCoefficients x0{TimeFunction::constant(0.1), TimeFunction::constant(0.2), 0.0,
                            TimeFunction::constant(0.0)};
    CHECK_THROWS_AS(solve_fractional_black_scholes(x0, 0.5, grid, path), Error);
  }
}
