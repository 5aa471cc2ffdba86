#include "doctest.h"

#include <cmath>
#include <random>

#include "frachp/dynamics.hpp"
#include "support/oracles.hpp"

using namespace frachp;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Vector random_vec(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = u(rng);
  return v;
}

// L = v^2/2 + v^4/12 + q v - q^2/2: convex in v, not quadratic.
LagrangianFns quartic_lagrangian() {
  return LagrangianFns::from_scalar([](const Vector& q, const Vector& v) {
    return 0.5 * v.squaredNorm() + v.array().pow(4).sum() / 12.0 + q.dot(v) - 0.5 * q.squaredNorm();
  });
}

}  // namespace

TEST_CASE("Legendre transform examples") {
  const auto sys = pendulum_system();
  const auto lag = *sys.lagrangian;
  const auto point = legendre_transform(lag, vec({1.0}), vec({0.5}));
  CHECK(point.p[0] == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(point.hamiltonian == doctest::Approx(0.125 + std::cos(1.0)).epsilon(1e-8));
  CHECK(sys.hamiltonian.value(vec({1.0}), vec({0.5})) == doctest::Approx(0.125 + std::cos(1.0)).epsilon(1e-14));

  const auto linear = LagrangianFns::from_scalar([](const Vector&, const Vector& v) { return v.sum(); });
  try {
    legendre_transform(linear, vec({0.0}), vec({1.0}));
    FAIL("expected SingularHessian");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SingularHessian);
  }
}

TEST_CASE("Legendre round trip on a non-quadratic Lagrangian") {
  const auto lag = quartic_lagrangian();
  std::mt19937_64 rng(4);
  for (int i = 0; i < 50; ++i) {
    const Vector q = random_vec(rng, 2, -2, 2);
    const Vector v = random_vec(rng, 2, -2, 2);
    const Vector p = legendre_transform(lag, q, v).p;
    // dL/dv = v + v^3/3 + q
    const Vector expected = v + v.array().cube().matrix() / 3.0 + q;
    CHECK(oracle::rel_error(p, expected) <= 1e-8);
    CHECK(oracle::rel_error(invert_legendre(lag, q, p), v) <= 1e-8);
  }
}

TEST_CASE("Christoffel symbols") {
  SUBCASE("constant metric") {
    MetricFns flat{[](const Vector&) { return Matrix(Matrix::Identity(2, 2) * 3.0); },
                   [](const Vector&) { return std::vector<Matrix>(2, Matrix::Zero(2, 2)); }};
    for (const auto& m : christoffel(flat, vec({0.3, -1.0})).symbols) CHECK(m.norm() == 0.0);
  }
  SUBCASE("one dimension, g = q^2") {
    MetricFns g{[](const Vector& q) { return Matrix(Matrix::Constant(1, 1, q[0] * q[0])); },
                [](const Vector& q) { return std::vector<Matrix>{Matrix::Constant(1, 1, 2 * q[0])}; }};
    for (double q : {0.5, 1.0, 3.0})
      CHECK(christoffel(g, vec({q})).symbols[0](0, 0) == doctest::Approx(1.0 / q).epsilon(1e-14));
  }
  SUBCASE("polar coordinates") {
    const auto sys = polar_metric_system();
    const auto c = christoffel(sys, vec({2.0, 0.7}));
    CHECK(c.symbols[0](1, 1) == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(c.symbols[1](0, 1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(c.symbols[1](1, 0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(c.symbols[0](0, 0) == 0.0);
    CHECK(c.symbols[1](1, 1) == 0.0);
  }
  SUBCASE("symmetric in the lower indices") {
    const auto sys = diagonal_metric_system({1.0, 2.0, 0.5}, {0.3, 1.0, 2.0}, make_noise(NoiseKind::Cos, 1.0));
    std::mt19937_64 rng(8);
    for (int i = 0; i < 20; ++i) {
      const auto c = christoffel(sys, random_vec(rng, 3, -2, 2));
      for (const auto& m : c.symbols) CHECK((m - m.transpose()).norm() == 0.0);
    }
  }
}

TEST_CASE("metric validation") {
  MetricFns asym{[](const Vector&) { return Matrix{{1.0, 0.5}, {0.0, 1.0}}; },
                 [](const Vector&) { return std::vector<Matrix>(2, Matrix::Zero(2, 2)); }};
  MetricFns indefinite{[](const Vector&) { return Matrix{{1.0, 0.0}, {0.0, -1.0}}; },
                       [](const Vector&) { return std::vector<Matrix>(2, Matrix::Zero(2, 2)); }};
  for (const auto& m : {asym, indefinite}) {
    try {
      checked_metric_factor(m, vec({0.0, 0.0}));
      FAIL("expected NotPositiveDefinite");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::NotPositiveDefinite);
    }
  }
}

TEST_CASE("analytic gradients agree with finite differences") {
  std::mt19937_64 rng(21);
  SUBCASE("metric Hamiltonian and momentum force") {
    const auto msys = diagonal_metric_system({1.0, 0.5}, {0.2, 1.0}, make_noise(NoiseKind::Cos, 1.0));
    const auto hsys = hamiltonian_from_metric(msys);
    for (int i = 0; i < 50; ++i) {
      const Vector q = random_vec(rng, 2, -2, 2), p = random_vec(rng, 2, -2, 2);
      const auto hq = [&](const Vector& x) { return hsys.hamiltonian.value(x, p); };
      const auto hp = [&](const Vector& x) { return hsys.hamiltonian.value(q, x); };
      CHECK(oracle::rel_error(hsys.hamiltonian.grad_q(q, p), oracle::gradient(hq, q)) <= 1e-6);
      CHECK(oracle::rel_error(hsys.hamiltonian.grad_p(q, p), oracle::gradient(hp, p)) <= 1e-6);
      CHECK(oracle::rel_error(metric_momentum_force(msys.metric, q, p), -oracle::gradient(hq, q)) <= 1e-6);
    }
  }
  SUBCASE("custom separable Hamiltonian") {
    const auto sys = separable_hamiltonian_system({1.0, 2.0}, {0.5, 0.0}, {1.0, -0.3}, make_noise(NoiseKind::Cos, 1.0));
    for (int i = 0; i < 50; ++i) {
      const Vector q = random_vec(rng, 2, -3, 3), p = random_vec(rng, 2, -3, 3);
      const auto hq = [&](const Vector& x) { return sys.hamiltonian.value(x, p); };
      const auto hp = [&](const Vector& x) { return sys.hamiltonian.value(q, x); };
      CHECK(oracle::rel_error(sys.hamiltonian.grad_q(q, p), oracle::gradient(hq, q)) <= 1e-6);
      CHECK(oracle::rel_error(sys.hamiltonian.grad_p(q, p), oracle::gradient(hp, p)) <= 1e-6);
    }
  }
  SUBCASE("noise gradients") {
    const auto noise = make_noise(NoiseKind::Cos, 0.7);
    for (int i = 0; i < 20; ++i) {
      const Vector q = random_vec(rng, 3, -3, 3);
      CHECK(oracle::rel_error(noise.gradient(0, q), -0.7 * q.array().sin().matrix()) <= 1e-12);
    }
    const auto fd = NoiseCoupling::from_potentials({[](const Vector& q) { return q[0] * q[0] * q[1]; }});
    const Vector q = vec({1.5, -0.5});
    CHECK(oracle::rel_error(fd.gradient(0, q), vec({2 * 1.5 * -0.5, 1.5 * 1.5})) <= 1e-6);
    CHECK(NoiseCoupling::constant(2.0, 3).gradient_matrix(q).norm() == 0.0);
    CHECK(NoiseCoupling::constant(2.0, 3).is_constant());
  }
}

TEST_CASE("HP fields of the pendulum") {
  const FractionalParams params(0.6, 0.3, 0.8);
  const auto fields = assemble_hp_fields(pendulum_system(), params);
  CHECK(fields.formulation == Formulation::Hamiltonian);
  CHECK(fields.channels == 1);
  const PhaseState x(vec({1.0}), vec({0.5}), vec({0.5}));
  const double s = 0.2, c = (0.6 - 1.0) / (0.8 - s);
  CHECK(fields.drift_q(s, x)[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(fields.drift_momentum(s, x)[0] == doctest::Approx(std::sin(1.0) + c * 0.5).epsilon(1e-14));
  const double kappa = oracle::gamma50(0.6) / oracle::gamma50(0.3) * std::pow(0.8 - s, 0.3 - 0.6);
  CHECK(fields.diffusion(s, x.q)(0, 0) == doctest::Approx(-kappa * std::sin(1.0)).epsilon(1e-12));
  CHECK(fractional_damping(params, s) == doctest::Approx(c).epsilon(1e-15));
  CHECK_THROWS_AS(fractional_damping(params, 0.8), Error);
}

TEST_CASE("Lagrangian and Hamiltonian formulations agree") {
  const FractionalParams params(0.7, 0.4, 1.0);
  const auto ham = pendulum_system();
  const LagrangianSystem lag{1, *ham.lagrangian, ham.noise};
  const auto fh = assemble_hp_fields(ham, params);
  const auto fl = assemble_hp_fields(lag, params);
  CHECK(fl.formulation == Formulation::HpLagrangian);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const Vector q = random_vec(rng, 1, -3, 3), p = random_vec(rng, 1, -2, 2);
    const auto xh = initial_state(ham, q, p);
    const auto xl = initial_state(lag, q, p);
    CHECK(oracle::rel_error(xl.v, xh.v) <= 1e-8);
    const double s = 0.5 * std::uniform_real_distribution<double>(0, 1)(rng);
    CHECK(oracle::rel_error(fl.drift_q(s, xl), fh.drift_q(s, xh)) <= 1e-8);
    CHECK(oracle::rel_error(fl.drift_momentum(s, xl), fh.drift_momentum(s, xh)) <= 1e-6);
    CHECK(oracle::rel_error(fl.diffusion(s, q), fh.diffusion(s, q)) <= 1e-12);
  }
}

TEST_CASE("metric velocity fields follow from the Lagrangian equations through p = g v") {
  const FractionalParams params(0.6, 0.3, 0.8);
  const auto msys = polar_metric_system();
  const LagrangianSystem lsys{2, metric_lagrangian(msys.metric), msys.noise};
  const auto fm = assemble_hp_fields(msys, params);
  const auto fl = assemble_hp_fields(lsys, params);
  CHECK(fm.formulation == Formulation::MetricVelocity);
  std::mt19937_64 rng(6);
  for (int i = 0; i < 20; ++i) {
    const Vector q = random_vec(rng, 2, 0.5, 2.0), v = random_vec(rng, 2, -1, 1);
    const Matrix g = msys.metric.g(q);
    const PhaseState x(q, v, g * v);
    const double s = 0.3;
    // d(g v)/ds = g dv/ds + (dg . v) v
    Matrix gdot = Matrix::Zero(2, 2);
    const auto dg = msys.metric.dg(q);
    for (int k = 0; k < 2; ++k) gdot += dg[k] * v[k];
    const Vector expected_v = g.ldlt().solve(fl.drift_momentum(s, x) - gdot * v);
    CHECK(oracle::rel_error(fm.drift_momentum(s, x), expected_v) <= 1e-6);
    const Matrix expected_sigma = g.ldlt().solve(fl.diffusion(s, q));
    CHECK((fm.diffusion(s, q) - expected_sigma).norm() <= 1e-12 * std::max(1.0, expected_sigma.norm()));
  }
  SUBCASE("literal variant") {
    const auto lit = assemble_hp_fields(msys, params, AssemblyOptions{true});
    const Vector q = vec({1.3, 0.2}), v = vec({0.4, -0.7});
    const PhaseState x(q, v, msys.metric.g(q) * v);
    const double s = 0.3, c = (0.6 - 1.0) / (0.8 - s);
    CHECK(oracle::rel_error(lit.drift_momentum(s, x) - fm.drift_momentum(s, x), -2.0 * c * v) <= 1e-12);
    const double kappa = oracle::gamma50(0.3) / oracle::gamma50(0.6) * std::pow(0.8 - s, 0.3 - 1.0);
    const Matrix expected = kappa * msys.metric.g(q).ldlt().solve(msys.noise.gradient_matrix(q));
    CHECK((lit.diffusion(s, q) - expected).norm() <= 1e-12 * expected.norm());
  }
}

TEST_CASE("reductions") {
  const Vector q = vec({0.9}), p = vec({-0.4});
  SUBCASE("alpha = beta: the noise column is the potential gradient, bitwise") {
    const auto f = assemble_hp_fields(pendulum_system(), FractionalParams(0.6, 0.6, 0.8));
    for (double s : {0.0, 0.3, 0.79}) CHECK(f.diffusion(s, q)(0, 0) == -std::sin(0.9));
  }
  SUBCASE("alpha = 1 removes the damping") {
    const auto f = assemble_hp_fields(pendulum_system(), FractionalParams(1.0, 0.5, 0.8));
    const auto x = initial_state(pendulum_system(), q, p);
    CHECK(f.drift_momentum(0.4, x)[0] == doctest::Approx(std::sin(0.9)).epsilon(1e-15));
  }
  SUBCASE("constant potentials give zero diffusion") {
    const auto f = assemble_hp_fields(pendulum_system(PendulumPotential::cosine(), false), FractionalParams(0.6, 0.3, 0.8));
    CHECK(f.diffusion(0.2, q).norm() == 0.0);
  }
}

TEST_CASE("initial states and energy") {
  const auto msys = polar_metric_system();
  const auto x = initial_state(msys, vec({2.0, 0.0}), vec({1.0, 2.0}));
  CHECK(x.v[0] == doctest::Approx(1.0));
  CHECK(x.v[1] == doctest::Approx(0.5));
  CHECK(energy(msys, x) == doctest::Approx(0.5 * (1.0 + 4.0 * 0.25)));
  CHECK(energy(pendulum_system(), initial_state(pendulum_system(), vec({0.0}), vec({1.0}))) ==
        doctest::Approx(1.5));
  CHECK_THROWS_AS(initial_state(msys, vec({1.0}), vec({1.0, 2.0})), Error);
  CHECK_THROWS_AS(lagrangian_of(HamiltonianSystem{1, pendulum_system().hamiltonian, std::nullopt,
                                                  NoiseCoupling::constant(0.0)}),
                  Error);
}
