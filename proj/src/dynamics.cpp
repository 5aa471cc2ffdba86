#include "frachp/dynamics.hpp"

#include <cmath>
#include <string>

namespace frachp {

namespace {

constexpr double kHessianDetFloor = 1e-12;
constexpr double kLegendreTolerance = 1e-10;
constexpr int kLegendreMaxIterations = 50;

Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x) {
  Vector grad(x.size());
  Vector probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double step = fd_step(x[i]);
    probe[i] = x[i] + step;
    const double up = f(probe);
    probe[i] = x[i] - step;
    const double down = f(probe);
    probe[i] = x[i];
    grad[i] = (up - down) / (2.0 * step);
  }
  return grad;
}

Matrix fd_hessian(const std::function<double(const Vector&)>& f, const Vector& x) {
  const auto n = x.size();
  Matrix hess(n, n);
  Vector probe = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double hi = 1e-4 * (1.0 + std::abs(x[i]));
      const double hj = 1e-4 * (1.0 + std::abs(x[j]));
      auto eval = [&](double si, double sj) {
        probe = x;
        probe[i] += si * hi;
        probe[j] += sj * hj;
        return f(probe);
      };
      const double value = (eval(1, 1) - eval(1, -1) - eval(-1, 1) + eval(-1, -1)) / (4.0 * hi * hj);
      hess(i, j) = value;
      hess(j, i) = value;
    }
  }
  return hess;
}

void check_dim(const Vector& x, std::size_t n, const char* what) {
  if (static_cast<std::size_t>(x.size()) != n) {
    throw Error(Errc::DimensionMismatch, std::string(what) + " has dimension " +
                                             std::to_string(x.size()) + ", expected " + std::to_string(n));
  }
}

Matrix checked_velocity_hessian(const LagrangianFns& lagrangian, const Vector& q, const Vector& v) {
  Matrix hess = lagrangian.hess_vv(q, v);
  const double det = hess.determinant();
  if (!(std::abs(det) > kHessianDetFloor)) {
    throw Error(Errc::SingularHessian, "velocity Hessian determinant " + std::to_string(det) +
                                           " is not above 1e-12 in magnitude");
  }
  return hess;
}

Vector sum_cos(const Vector& q) { return q.array().cos().matrix(); }

}  // namespace

double fd_step(double x) noexcept { return 1e-6 * (1.0 + std::abs(x)); }

LagrangianFns LagrangianFns::from_scalar(ScalarFieldQX value) {
  LagrangianFns fns;
  fns.value = value;
  fns.grad_q = [value](const Vector& q, const Vector& v) {
    return fd_gradient([&](const Vector& x) { return value(x, v); }, q);
  };
  fns.grad_v = [value](const Vector& q, const Vector& v) {
    return fd_gradient([&](const Vector& x) { return value(q, x); }, v);
  };
  fns.hess_vv = [value](const Vector& q, const Vector& v) {
    return fd_hessian([&](const Vector& x) { return value(q, x); }, v);
  };
  return fns;
}

HamiltonianFns HamiltonianFns::from_scalar(ScalarFieldQX value) {
  HamiltonianFns fns;
  fns.value = value;
  fns.grad_q = [value](const Vector& q, const Vector& p) {
    return fd_gradient([&](const Vector& x) { return value(x, p); }, q);
  };
  fns.grad_p = [value](const Vector& q, const Vector& p) {
    return fd_gradient([&](const Vector& x) { return value(q, x); }, p);
  };
  return fns;
}

// ---- noise ------------------------------------------------------------------

NoiseCoupling::NoiseCoupling(std::vector<Potential> potentials, std::vector<Gradient> gradients)
    : potentials_(std::move(potentials)), gradients_(std::move(gradients)) {
  if (potentials_.empty() || potentials_.size() != gradients_.size()) {
    throw Error(Errc::DimensionMismatch, "noise coupling needs m >= 1 potentials and m gradients");
  }
}

NoiseCoupling NoiseCoupling::from_potentials(std::vector<Potential> potentials) {
  std::vector<Gradient> gradients;
  gradients.reserve(potentials.size());
  for (const auto& f : potentials) {
    gradients.emplace_back([f](const Vector& q) { return fd_gradient(f, q); });
  }
  return NoiseCoupling(std::move(potentials), std::move(gradients));
}

NoiseCoupling NoiseCoupling::constant(double value, std::size_t channels) {
  std::vector<Potential> potentials(channels, [value](const Vector&) { return value; });
  std::vector<Gradient> gradients(channels, [](const Vector& q) { return Vector::Zero(q.size()).eval(); });
  NoiseCoupling coupling(std::move(potentials), std::move(gradients));
  coupling.constant_ = true;
  return coupling;
}

Vector NoiseCoupling::gradient(std::size_t a, const Vector& q) const {
  Vector grad = gradients_[a](q);
  check_dim(grad, static_cast<std::size_t>(q.size()), "noise gradient");
  return grad;
}

Matrix NoiseCoupling::gradient_matrix(const Vector& q) const {
  Matrix out(q.size(), static_cast<Eigen::Index>(channels()));
  for (std::size_t a = 0; a < channels(); ++a) {
    out.col(static_cast<Eigen::Index>(a)) = gradient(a, q);
  }
  return out;
}

NoiseCoupling make_noise(NoiseKind kind, double scale) {
  switch (kind) {
    case NoiseKind::Cos:
      return NoiseCoupling({[scale](const Vector& q) { return scale * sum_cos(q).sum(); }},
                           {[scale](const Vector& q) { return (-scale * q.array().sin()).matrix().eval(); }});
    case NoiseKind::Linear:
      return NoiseCoupling({[scale](const Vector& q) { return scale * q.sum(); }},
                           {[scale](const Vector& q) { return Vector::Constant(q.size(), scale).eval(); }});
    case NoiseKind::Constant:
      break;
  }
  return NoiseCoupling::constant(scale);
}

// ---- systems ----------------------------------------------------------------

std::size_t system_dim(const SystemSpec& sys) {
  return std::visit([](const auto& s) { return s.dim; }, sys);
}

const NoiseCoupling& system_noise(const SystemSpec& sys) {
  return std::visit([](const auto& s) -> const NoiseCoupling& { return s.noise; }, sys);
}

SystemSpec with_noise(SystemSpec sys, NoiseCoupling noise) {
  std::visit([&](auto& s) { s.noise = std::move(noise); }, sys);
  return sys;
}

LagrangianFns metric_lagrangian(const MetricFns& metric) {
  LagrangianFns fns;
  fns.value = [metric](const Vector& q, const Vector& v) { return 0.5 * v.dot(metric.g(q) * v); };
  fns.grad_q = [metric](const Vector& q, const Vector& v) {
    const auto dg = metric.dg(q);
    Vector out(q.size());
    for (Eigen::Index k = 0; k < q.size(); ++k) {
      out[k] = 0.5 * v.dot(dg[static_cast<std::size_t>(k)] * v);
    }
    return out;
  };
  fns.grad_v = [metric](const Vector& q, const Vector& v) { return (metric.g(q) * v).eval(); };
  fns.hess_vv = [metric](const Vector& q, const Vector&) { return metric.g(q); };
  return fns;
}

LagrangianFns lagrangian_of(const SystemSpec& sys) {
  if (const auto* h = std::get_if<HamiltonianSystem>(&sys)) {
    if (!h->lagrangian) {
      throw Error(Errc::NotApplicable, "Hamiltonian system carries no Lagrangian for the action");
    }
    return *h->lagrangian;
  }
  if (const auto* l = std::get_if<LagrangianSystem>(&sys)) {
    return l->lagrangian;
  }
  return metric_lagrangian(std::get<MetricSystem>(sys).metric);
}

HamiltonianSystem hamiltonian_from_metric(const MetricSystem& sys) {
  const MetricFns metric = sys.metric;
  HamiltonianFns fns;
  fns.value = [metric](const Vector& q, const Vector& p) {
    return 0.5 * p.dot(checked_metric_factor(metric, q).solve(p));
  };
  fns.grad_p = [metric](const Vector& q, const Vector& p) {
    return checked_metric_factor(metric, q).solve(p).eval();
  };
  fns.grad_q = [metric](const Vector& q, const Vector& p) {
    return (-metric_momentum_force(metric, q, p)).eval();
  };
  return {sys.dim, std::move(fns), metric_lagrangian(metric), sys.noise};
}

HamiltonianSystem hamiltonian_from_lagrangian(const LagrangianSystem& sys) {
  const LagrangianFns lagrangian = sys.lagrangian;
  HamiltonianFns fns;
  fns.value = [lagrangian](const Vector& q, const Vector& p) {
    const Vector v = invert_legendre(lagrangian, q, p);
    return p.dot(v) - lagrangian.value(q, v);
  };
  fns.grad_p = [lagrangian](const Vector& q, const Vector& p) { return invert_legendre(lagrangian, q, p); };
  fns.grad_q = [lagrangian](const Vector& q, const Vector& p) {
    const Vector v = invert_legendre(lagrangian, q, p);
    return (-lagrangian.grad_q(q, v)).eval();
  };
  return {sys.dim, std::move(fns), lagrangian, sys.noise};
}

double energy(const SystemSpec& sys, const PhaseState& state) {
  if (const auto* h = std::get_if<HamiltonianSystem>(&sys)) {
    return h->hamiltonian.value(state.q, state.p);
  }
  if (const auto* l = std::get_if<LagrangianSystem>(&sys)) {
    return legendre_transform(l->lagrangian, state.q, state.v).hamiltonian;
  }
  const auto& m = std::get<MetricSystem>(sys);
  return 0.5 * state.v.dot(m.metric.g(state.q) * state.v);
}

// ---- Legendre -------------------------------------------------------------------

LegendrePoint legendre_transform(const LagrangianFns& lagrangian, const Vector& q, const Vector& v) {
  checked_velocity_hessian(lagrangian, q, v);
  Vector p = lagrangian.grad_v(q, v);
  const double h = p.dot(v) - lagrangian.value(q, v);
  return {std::move(p), h};
}

LegendrePoint legendre_transform(const LagrangianSystem& sys, const Vector& q, const Vector& v) {
  check_dim(q, sys.dim, "q");
  check_dim(v, sys.dim, "v");
  return legendre_transform(sys.lagrangian, q, v);
}

Vector invert_legendre(const LagrangianFns& lagrangian, const Vector& q, const Vector& p,
                       const std::optional<Vector>& guess) {
  Vector v = guess.value_or(p);
  for (int iter = 0; iter <= kLegendreMaxIterations; ++iter) {
    const Vector residual = lagrangian.grad_v(q, v) - p;
    if (residual.lpNorm<Eigen::Infinity>() <= kLegendreTolerance) {
      return v;
    }
    if (iter == kLegendreMaxIterations) {
      break;
    }
    const Matrix hess = checked_velocity_hessian(lagrangian, q, v);
    v -= hess.partialPivLu().solve(residual);
  }
  throw Error(Errc::NoConvergence, "inverse Legendre transform did not converge in 50 iterations");
}

Vector invert_legendre(const LagrangianSystem& sys, const Vector& q, const Vector& p,
                       const std::optional<Vector>& guess) {
  check_dim(q, sys.dim, "q");
  check_dim(p, sys.dim, "p");
  return invert_legendre(sys.lagrangian, q, p, guess);
}

// ---- metric geometry ----------------------------------------------------------

Eigen::LLT<Matrix> checked_metric_factor(const MetricFns& metric, const Vector& q) {
  const Matrix g = metric.g(q);
  if (g.rows() != q.size() || g.cols() != q.size()) {
    throw Error(Errc::DimensionMismatch, "metric must be n x n");
  }
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error(Errc::NotPositiveDefinite, "metric is not symmetric");
  }
  Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success) {
    throw Error(Errc::NotPositiveDefinite, "metric Cholesky factorization failed");
  }
  return llt;
}

Vector Christoffel::contract(const Vector& x, const Vector& y) const {
  Vector out(static_cast<Eigen::Index>(symbols.size()));
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = x.dot(symbols[i] * y);
  }
  return out;
}

Christoffel christoffel(const MetricFns& metric, const Vector& q) {
  const auto llt = checked_metric_factor(metric, q);
  const auto n = q.size();
  const auto dg = metric.dg(q);
  if (dg.size() != static_cast<std::size_t>(n)) {
    throw Error(Errc::DimensionMismatch, "metric derivative needs one matrix per coordinate");
  }
  // lowered(l)(j, k) = 1/2 (d_k g_lj + d_j g_lk - d_l g_jk), symmetric in (j, k).
  std::vector<Matrix> lowered(static_cast<std::size_t>(n), Matrix::Zero(n, n));
  for (Eigen::Index l = 0; l < n; ++l) {
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index k = j; k < n; ++k) {
        const double value = 0.5 * (dg[static_cast<std::size_t>(k)](l, j) +
                                    dg[static_cast<std::size_t>(j)](l, k) -
                                    dg[static_cast<std::size_t>(l)](j, k));
        lowered[static_cast<std::size_t>(l)](j, k) = value;
        lowered[static_cast<std::size_t>(l)](k, j) = value;
      }
    }
  }
  Christoffel out{std::vector<Matrix>(static_cast<std::size_t>(n), Matrix::Zero(n, n))};
  Vector column(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j; k < n; ++k) {
      for (Eigen::Index l = 0; l < n; ++l) {
        column[l] = lowered[static_cast<std::size_t>(l)](j, k);
      }
      const Vector raised = llt.solve(column);
      for (Eigen::Index i = 0; i < n; ++i) {
        out.symbols[static_cast<std::size_t>(i)](j, k) = raised[i];
        out.symbols[static_cast<std::size_t>(i)](k, j) = raised[i];
      }
    }
  }
  return out;
}

Christoffel christoffel(const MetricSystem& sys, const Vector& q) {
  check_dim(q, sys.dim, "q");
  return christoffel(sys.metric, q);
}

Vector metric_momentum_force(const MetricFns& metric, const Vector& q, const Vector& p) {
  const Vector raised = checked_metric_factor(metric, q).solve(p);
  const auto dg = metric.dg(q);
  Vector out(q.size());
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    out[i] = 0.5 * raised.dot(dg[static_cast<std::size_t>(i)] * raised);
  }
  return out;
}

// ---- field assembly -------------------------------------------------------------

std::string_view to_string(Formulation f) noexcept {
  switch (f) {
    case Formulation::HpLagrangian: return "HP-Lagrangian";
    case Formulation::Hamiltonian: return "Hamiltonian";
    case Formulation::MetricVelocity: return "Metric-velocity";
  }
  return "unknown";
}

double fractional_damping(const FractionalParams& params, double s) {
  const double gap = params.t_eval() - s;
  if (!(gap > 0.0)) {
    throw Error(Errc::KernelSingularity, "fractional damping needs s < t_eval");
  }
  return (params.alpha() - 1.0) / gap;
}

namespace {

SdeFields assemble(const LagrangianSystem& sys, const FractionalParams& params) {
  const auto lagrangian = sys.lagrangian;
  const auto noise = sys.noise;
  const auto kernel = hp_noise_kernel(params);
  SdeFields fields{Formulation::HpLagrangian, sys.dim, noise.channels(), params, {}, {}, {}, {}};
  fields.drift_q = [](double, const PhaseState& x) { return x.v; };
  fields.drift_momentum = [lagrangian, params](double s, const PhaseState& x) {
    return (lagrangian.grad_q(x.q, x.v) + fractional_damping(params, s) * lagrangian.grad_v(x.q, x.v)).eval();
  };
  fields.diffusion = [noise, kernel, params](double s, const Vector& q) {
    return (kernel(params.t_eval(), s) * noise.gradient_matrix(q)).eval();
  };
  fields.complete = [lagrangian](const Vector& q, const Vector& p, const PhaseState& previous) {
    Vector v = invert_legendre(lagrangian, q, p, previous.v);
    return PhaseState(q, std::move(v), p);
  };
  return fields;
}

SdeFields assemble(const HamiltonianSystem& sys, const FractionalParams& params) {
  const auto hamiltonian = sys.hamiltonian;
  const auto noise = sys.noise;
  const auto kernel = hp_noise_kernel(params);
  SdeFields fields{Formulation::Hamiltonian, sys.dim, noise.channels(), params, {}, {}, {}, {}};
  fields.drift_q = [hamiltonian](double, const PhaseState& x) { return hamiltonian.grad_p(x.q, x.p); };
  fields.drift_momentum = [hamiltonian, params](double s, const PhaseState& x) {
    return (-hamiltonian.grad_q(x.q, x.p) + fractional_damping(params, s) * x.p).eval();
  };
  fields.diffusion = [noise, kernel, params](double s, const Vector& q) {
    return (kernel(params.t_eval(), s) * noise.gradient_matrix(q)).eval();
  };
  fields.complete = [hamiltonian](const Vector& q, const Vector& p, const PhaseState&) {
    Vector v = hamiltonian.grad_p(q, p);
    return PhaseState(q, std::move(v), p);
  };
  return fields;
}

SdeFields assemble(const MetricSystem& sys, const FractionalParams& params, bool eq15_literal) {
  const auto metric = sys.metric;
  const auto noise = sys.noise;
  const auto kernel = eq15_literal ? hp_noise_kernel_eq15_literal(params) : hp_noise_kernel(params);
  // Pulling dp = (dL/dq + c p) ds + ... back through p = g v gives +c v;
  // the printed velocity equation carries -c v.
  const double damping_sign = eq15_literal ? -1.0 : 1.0;
  SdeFields fields{Formulation::MetricVelocity, sys.dim, noise.channels(), params, {}, {}, {}, {}};
  fields.drift_q = [](double, const PhaseState& x) { return x.v; };
  fields.drift_momentum = [metric, params, damping_sign](double s, const PhaseState& x) {
    const auto symbols = christoffel(metric, x.q);
    return (-symbols.contract(x.v, x.v) + damping_sign * fractional_damping(params, s) * x.v).eval();
  };
  fields.diffusion = [metric, noise, kernel, params](double s, const Vector& q) {
    const auto llt = checked_metric_factor(metric, q);
    return (kernel(params.t_eval(), s) * llt.solve(noise.gradient_matrix(q))).eval();
  };
  fields.complete = [metric](const Vector& q, const Vector& v, const PhaseState&) {
    Vector p = metric.g(q) * v;
    return PhaseState(q, v, std::move(p));
  };
  return fields;
}

}  // namespace

SdeFields assemble_hp_fields(const SystemSpec& sys, const FractionalParams& params,
                             const AssemblyOptions& options) {
  if (system_dim(sys) == 0) {
    throw Error(Errc::DimensionMismatch, "system dimension must be at least 1");
  }
  // Noise coefficients are functions of q alone and dq carries no noise, so
  // the Ito and Stratonovich forms coincide; the variant types admit nothing else.
  if (const auto* h = std::get_if<HamiltonianSystem>(&sys)) {
    return assemble(*h, params);
  }
  if (const auto* l = std::get_if<LagrangianSystem>(&sys)) {
    return assemble(*l, params);
  }
  return assemble(std::get<MetricSystem>(sys), params, options.eq15_literal);
}

PhaseState initial_state(const SystemSpec& sys, const Vector& q0, const Vector& p0) {
  const auto n = system_dim(sys);
  check_dim(q0, n, "initial q");
  check_dim(p0, n, "initial p");
  if (const auto* h = std::get_if<HamiltonianSystem>(&sys)) {
    return PhaseState(q0, h->hamiltonian.grad_p(q0, p0), p0);
  }
  if (const auto* l = std::get_if<LagrangianSystem>(&sys)) {
    return PhaseState(q0, invert_legendre(l->lagrangian, q0, p0), p0);
  }
  const auto& m = std::get<MetricSystem>(sys);
  return PhaseState(q0, checked_metric_factor(m.metric, q0).solve(p0), p0);
}

// ---- built-ins ----------------------------------------------------------------

PendulumPotential PendulumPotential::cosine() {
  return {[](double q) { return std::cos(q); }, [](double q) { return -std::sin(q); }};
}

HamiltonianSystem pendulum_system(PendulumPotential potential, bool noisy) {
  const auto U = potential.value;
  const auto dU = potential.derivative;
  HamiltonianFns h;
  h.value = [U](const Vector& q, const Vector& p) { return 0.5 * p[0] * p[0] + U(q[0]); };
  h.grad_q = [dU](const Vector& q, const Vector&) { return Vector::Constant(1, dU(q[0])).eval(); };
  h.grad_p = [](const Vector&, const Vector& p) { return p; };

  LagrangianFns l;
  l.value = [U](const Vector& q, const Vector& v) { return 0.5 * v[0] * v[0] - U(q[0]); };
  l.grad_q = [dU](const Vector& q, const Vector&) { return Vector::Constant(1, -dU(q[0])).eval(); };
  l.grad_v = [](const Vector&, const Vector& v) { return v; };
  l.hess_vv = [](const Vector&, const Vector&) { return Matrix::Identity(1, 1).eval(); };

  return {1, std::move(h), std::move(l),
          make_noise(noisy ? NoiseKind::Cos : NoiseKind::Constant, 1.0)};
}

MetricSystem polar_metric_system(NoiseCoupling noise) {
  MetricFns metric;
  metric.g = [](const Vector& q) {
    Matrix g = Matrix::Zero(2, 2);
    g(0, 0) = 1.0;
    g(1, 1) = q[0] * q[0];
    return g;
  };
  metric.dg = [](const Vector& q) {
    std::vector<Matrix> dg(2, Matrix::Zero(2, 2));
    dg[0](1, 1) = 2.0 * q[0];
    return dg;
  };
  return {2, std::move(metric), std::move(noise)};
}

MetricSystem diagonal_metric_system(std::vector<double> a, std::vector<double> b, NoiseCoupling noise) {
  if (a.empty() || a.size() != b.size()) {
    throw Error(Errc::DimensionMismatch, "metric coefficient lists must be non-empty and equal length");
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] > 0.0) || b[i] < 0.0) {
      throw Error(Errc::NotPositiveDefinite, "diagonal metric needs a_i > 0 and b_i >= 0");
    }
  }
  const auto n = static_cast<Eigen::Index>(a.size());
  MetricFns metric;
  metric.g = [a, b, n](const Vector& q) {
    Matrix g = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      g(i, i) = a[static_cast<std::size_t>(i)] + b[static_cast<std::size_t>(i)] * q[i] * q[i];
    }
    return g;
  };
  metric.dg = [b, n](const Vector& q) {
    std::vector<Matrix> dg(static_cast<std::size_t>(n), Matrix::Zero(n, n));
    for (Eigen::Index k = 0; k < n; ++k) {
      dg[static_cast<std::size_t>(k)](k, k) = 2.0 * b[static_cast<std::size_t>(k)] * q[k];
    }
    return dg;
  };
  return {a.size(), std::move(metric), std::move(noise)};
}

HamiltonianSystem separable_hamiltonian_system(std::vector<double> mass, std::vector<double> stiffness,
                                               std::vector<double> cos_coeff, NoiseCoupling noise) {
  if (mass.empty() || mass.size() != stiffness.size() || mass.size() != cos_coeff.size()) {
    throw Error(Errc::DimensionMismatch, "mass, stiffness and cos_coeff must have equal, non-zero length");
  }
  for (double m : mass) {
    if (!(m > 0.0)) {
      throw Error(Errc::InvalidValue, "masses must be positive");
    }
  }
  const auto n = static_cast<Eigen::Index>(mass.size());
  const Vector m = Eigen::Map<const Vector>(mass.data(), n);
  const Vector k = Eigen::Map<const Vector>(stiffness.data(), n);
  const Vector c = Eigen::Map<const Vector>(cos_coeff.data(), n);
  auto potential = [k, c](const Vector& q) {
    return 0.5 * (k.array() * q.array().square()).sum() + (c.array() * q.array().cos()).sum();
  };
  auto potential_grad = [k, c](const Vector& q) {
    return (k.array() * q.array() - c.array() * q.array().sin()).matrix().eval();
  };

  HamiltonianFns h;
  h.value = [m, potential](const Vector& q, const Vector& p) {
    return 0.5 * (p.array().square() / m.array()).sum() + potential(q);
  };
  h.grad_q = [potential_grad](const Vector& q, const Vector&) { return potential_grad(q); };
  h.grad_p = [m](const Vector&, const Vector& p) { return (p.array() / m.array()).matrix().eval(); };

  LagrangianFns l;
  l.value = [m, potential](const Vector& q, const Vector& v) {
    return 0.5 * (m.array() * v.array().square()).sum() - potential(q);
  };
  l.grad_q = [potential_grad](const Vector& q, const Vector&) { return (-potential_grad(q)).eval(); };
  l.grad_v = [m](const Vector&, const Vector& v) { return (m.array() * v.array()).matrix().eval(); };
  l.hess_vv = [m](const Vector&, const Vector&) { return Matrix(m.asDiagonal()); };

  return {mass.size(), std::move(h), std::move(l), std::move(noise)};
}

}  // namespace frachp
