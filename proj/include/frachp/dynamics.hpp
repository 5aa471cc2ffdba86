#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "frachp/core.hpp"
#include "frachp/specfun.hpp"

namespace frachp {

using ScalarFieldQX = std::function<double(const Vector&, const Vector&)>;
using VectorFieldQX = std::function<Vector(const Vector&, const Vector&)>;
using MatrixFieldQX = std::function<Matrix(const Vector&, const Vector&)>;

/// Central-difference step used wherever an analytic derivative is missing.
double fd_step(double x) noexcept;

/// L(q, v) with its first derivatives and velocity Hessian.
struct LagrangianFns {
  ScalarFieldQX value;
  VectorFieldQX grad_q;
  VectorFieldQX grad_v;
  MatrixFieldQX hess_vv;

  /// Fills every derivative by central differences of `value`.
  static LagrangianFns from_scalar(ScalarFieldQX value);
};

/// H(q, p) with its first derivatives.
struct HamiltonianFns {
  ScalarFieldQX value;
  VectorFieldQX grad_q;
  VectorFieldQX grad_p;

  static HamiltonianFns from_scalar(ScalarFieldQX value);
};

/// g(q) and its partials: dg(q)[k](i, j) = d g_ij / d q^k.
struct MetricFns {
  std::function<Matrix(const Vector&)> g;
  std::function<std::vector<Matrix>(const Vector&)> dg;
};

/// Scalar noise potentials gamma_a(q), a = 1..m, with gradients.
class NoiseCoupling {
 public:
  using Potential = std::function<double(const Vector&)>;
  using Gradient = std::function<Vector(const Vector&)>;

  NoiseCoupling(std::vector<Potential> potentials, std::vector<Gradient> gradients);

  /// Gradients by central differences.
  static NoiseCoupling from_potentials(std::vector<Potential> potentials);
  /// m constant potentials; all gradients vanish.
  static NoiseCoupling constant(double value, std::size_t channels = 1);

  std::size_t channels() const noexcept { return potentials_.size(); }
  bool is_constant() const noexcept { return constant_; }

  double potential(std::size_t a, const Vector& q) const { return potentials_[a](q); }
  Vector gradient(std::size_t a, const Vector& q) const;
  /// n x m matrix whose column a is d gamma_a / dq.
  Matrix gradient_matrix(const Vector& q) const;

 private:
  std::vector<Potential> potentials_;
  std::vector<Gradient> gradients_;
  bool constant_ = false;
};

struct HamiltonianSystem {
  std::size_t dim;
  HamiltonianFns hamiltonian;
  /// Companion Lagrangian, needed only for action evaluation.
  std::optional<LagrangianFns> lagrangian;
  NoiseCoupling noise;
};

struct LagrangianSystem {
  std::size_t dim;
  LagrangianFns lagrangian;
  NoiseCoupling noise;
};

struct MetricSystem {
  std::size_t dim;
  MetricFns metric;
  NoiseCoupling noise;
};

using SystemSpec = std::variant<HamiltonianSystem, LagrangianSystem, MetricSystem>;

std::size_t system_dim(const SystemSpec& sys);
const NoiseCoupling& system_noise(const SystemSpec& sys);
SystemSpec with_noise(SystemSpec sys, NoiseCoupling noise);

/// L = 1/2 v^T g(q) v.
LagrangianFns metric_lagrangian(const MetricFns& metric);
/// The Lagrangian of any system; NotApplicable for a Hamiltonian system
/// without a companion Lagrangian.
LagrangianFns lagrangian_of(const SystemSpec& sys);
/// H = 1/2 p^T g^-1(q) p with analytic gradients.
HamiltonianSystem hamiltonian_from_metric(const MetricSystem& sys);
/// H(q, p) = <p, v> - L(q, v), v solving dL/dv(q, v) = p.
HamiltonianSystem hamiltonian_from_lagrangian(const LagrangianSystem& sys);

/// Energy of a state in the system's own variables.
double energy(const SystemSpec& sys, const PhaseState& state);

struct LegendrePoint {
  Vector p;
  double hamiltonian;
};

/// p = dL/dv(q, v) and H = <p, v> - L(q, v). SingularHessian if
/// |det d2L/dv2| <= 1e-12.
LegendrePoint legendre_transform(const LagrangianFns& lagrangian, const Vector& q, const Vector& v);
LegendrePoint legendre_transform(const LagrangianSystem& sys, const Vector& q, const Vector& v);

/// Newton solve of dL/dv(q, v) = p from `guess` (p when absent); residual
/// <= 1e-10 in 50 iterations or NoConvergence.
Vector invert_legendre(const LagrangianFns& lagrangian, const Vector& q, const Vector& p,
                       const std::optional<Vector>& guess = std::nullopt);
Vector invert_legendre(const LagrangianSystem& sys, const Vector& q, const Vector& p,
                       const std::optional<Vector>& guess = std::nullopt);

/// Christoffel symbols of the second kind: symbols[i](j, k) = Gamma^i_jk.
struct Christoffel {
  std::vector<Matrix> symbols;

  /// Gamma^i_jk x^j y^k for every i.
  Vector contract(const Vector& x, const Vector& y) const;
};

/// Throws NotPositiveDefinite unless g(q) is symmetric to 1e-12 and its
/// Cholesky factorization succeeds.
Eigen::LLT<Matrix> checked_metric_factor(const MetricFns& metric, const Vector& q);

Christoffel christoffel(const MetricFns& metric, const Vector& q);
Christoffel christoffel(const MetricSystem& sys, const Vector& q);

/// 1/2 (d g_kl / d q^i) p^k p^l with p^k = g^kl p_l: the momentum force of a
/// metric Hamiltonian written in its covariant form.
Vector metric_momentum_force(const MetricFns& metric, const Vector& q, const Vector& p);

enum class Formulation { HpLagrangian, Hamiltonian, MetricVelocity };

std::string_view to_string(Formulation f) noexcept;

struct AssemblyOptions {
  /// Metric systems only: use the printed velocity-equation coefficient
  /// Gamma(beta)/Gamma(alpha) (t-s)^(beta-1) and damping sign.
  bool eq15_literal = false;
};

/// Ito drift and diffusion for one system. The "momentum-like" variable is
/// p for HpLagrangian/Hamiltonian and v for MetricVelocity; noise enters
/// only that variable and depends only on (s, q).
struct SdeFields {
  Formulation formulation;
  std::size_t dim;
  std::size_t channels;
  FractionalParams params;

  std::function<Vector(double, const PhaseState&)> drift_q;
  std::function<Vector(double, const PhaseState&)> drift_momentum;
  /// n x m.
  std::function<Matrix(double, const Vector&)> diffusion;
  /// Rebuilds (q, v, p) from q and the updated momentum-like variable;
  /// `previous` seeds any iterative solve.
  std::function<PhaseState(const Vector&, const Vector&, const PhaseState&)> complete;

  const Vector& momentum_like(const PhaseState& state) const {
    return formulation == Formulation::MetricVelocity ? state.v : state.p;
  }
};

/// (alpha - 1)/(t_eval - s); KernelSingularity for s >= t_eval.
double fractional_damping(const FractionalParams& params, double s);

SdeFields assemble_hp_fields(const SystemSpec& sys, const FractionalParams& params,
                             const AssemblyOptions& options = {});

/// Completes (q0, p0) into a consistent (q, v, p) for the system.
PhaseState initial_state(const SystemSpec& sys, const Vector& q0, const Vector& p0);

// ---- built-in systems -----------------------------------------------------

struct PendulumPotential {
  std::function<double(double)> value;
  std::function<double(double)> derivative;

  /// U(q) = cos q.
  static PendulumPotential cosine();
};

enum class NoiseKind { Cos, Constant, Linear };

/// gamma(q) = scale * sum_i cos q_i | scale | scale * sum_i q_i, one channel.
NoiseCoupling make_noise(NoiseKind kind, double scale);

/// H = p^2/2 + U(q), gamma = cos q (noisy) or constant (deterministic).
HamiltonianSystem pendulum_system(PendulumPotential potential = PendulumPotential::cosine(),
                                  bool noisy = true);

/// Plane in polar coordinates (r, theta): g = diag(1, r^2).
MetricSystem polar_metric_system(NoiseCoupling noise = make_noise(NoiseKind::Cos, 1.0));

/// Diagonal metric g_ii(q) = a_i + b_i (q^i)^2 with a_i > 0, b_i >= 0.
MetricSystem diagonal_metric_system(std::vector<double> a, std::vector<double> b, NoiseCoupling noise);

/// H = sum_i p_i^2/(2 m_i) + k_i q_i^2/2 + c_i cos q_i, with its Lagrangian.
HamiltonianSystem separable_hamiltonian_system(std::vector<double> mass, std::vector<double> stiffness,
                                               std::vector<double> cos_coeff, NoiseCoupling noise);

}  // namespace frachp
