#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "frachp/core.hpp"
#include "frachp/dynamics.hpp"
#include "frachp/noise.hpp"

namespace frachp {

/// Any state component above this magnitude aborts integration.
inline constexpr double kBlowupThreshold = 1e12;

/// One explicit Euler step with every coefficient frozen at the left
/// endpoint s:
///   q' = q + h drift_q(s, x)
///   m' = m + h drift_m(s, x) + diffusion(s, q) * increments
/// where m is the formulation's momentum-like variable; the remaining
/// component is rebuilt by `fields.complete`.
PhaseState euler_step(const SdeFields& fields, double s, const PhaseState& state, double h,
                      std::span<const double> increments);

struct EulerRun {
  SdeFields fields;
  TimeGrid grid;
  WienerPath path;
  PhaseState initial;

  /// Checks grid/path alignment, dimensions and the singularity guard.
  void validate() const;
};

Trajectory integrate(const EulerRun& run);

// ---- strong convergence ------------------------------------------------------

/// Reference solutions are integrated on a grid this many times finer than base_h.
inline constexpr std::size_t kConvergenceRefinement = 16;

struct ConvergenceSetup {
  SdeFields fields;
  PhaseState initial;
  double t_start = 0.0;
  /// Finest measured step; levels use base_h * 2^l, l = 0..levels-1.
  double base_h = 0.0;
  /// Steps at base_h; must be divisible by 2^(levels-1).
  std::size_t base_steps = 0;
  std::size_t levels = 0;
  std::size_t n_paths = 0;
  std::uint64_t seed = 0;
};

struct ConvergenceLevel {
  double h;
  double mean_error;
};

struct ConvergenceReport {
  std::vector<ConvergenceLevel> levels;
  /// Least-squares slope of log(mean_error) against log(h).
  double slope;
};

/// Per path: one Wiener path on the reference grid, coarsened to every
/// level; error is the Euclidean distance of the terminal (q, p) to the
/// reference. NotApplicable when every error vanishes.
ConvergenceReport strong_convergence_order(const ConvergenceSetup& setup);

/// Least-squares slope of log(y) on log(x).
double log_log_slope(std::span<const double> x, std::span<const double> y);

// ---- discrete HP action --------------------------------------------------------

struct ActionEvaluation {
  double value;
  double deterministic_part;
  double stochastic_part;
};

/// Discrete action
///   (1/Gamma(alpha)) sum_k [L(q_k, v_k) + <p_k, (q_{k+1} - q_k)/h - v_k>] W_k
///   + (1/Gamma(beta)) sum_k sum_a gamma_a((q_k + q_{k+1})/2) (t - s_k - h/2)^(beta-1) G_a(k)
/// with W_k the exact integral of (t - s)^(alpha-1) over step k.
ActionEvaluation evaluate_action(const Trajectory& trajectory, const SystemSpec& sys,
                                 const FractionalParams& params, const WienerPath& path);

/// A variation (dq, dv, dp) sampled on the trajectory grid.
struct Perturbation {
  std::vector<Vector> dq;
  std::vector<Vector> dv;
  std::vector<Vector> dp;

  /// sqrt(h * sum_k (|dq_k|^2 + |dv_k|^2 + |dp_k|^2)).
  double norm(double h) const;
  bool is_zero() const;
};

/// Smooth random variation with dq(a) = dq(b) = 0 exactly: each component
/// is a sum of `modes` sine modes with uniform random amplitudes in [-1, 1].
Perturbation random_admissible_perturbation(const TimeGrid& grid, std::size_t dim,
                                            std::uint64_t seed, std::size_t modes = 4);

inline constexpr double kActionDerivativeEpsilon = 1e-5;

/// Central difference [A(c + eps w) - A(c - eps w)] / (2 eps).
/// BoundaryViolation if dq is nonzero at either end.
double action_derivative(const Trajectory& trajectory, const SystemSpec& sys,
                         const FractionalParams& params, const WienerPath& path,
                         const Perturbation& perturbation);

struct StationarityReport {
  std::vector<double> ratios;  ///< |dA(w)| / |w| per perturbation
  double max_ratio;
  double mean_ratio;
};

/// action_derivative over `count` seeded random admissible perturbations.
/// DegenerateInput when count is zero.
StationarityReport stationarity_check(const Trajectory& trajectory, const SystemSpec& sys,
                                      const FractionalParams& params, const WienerPath& path,
                                      std::size_t count, std::uint64_t seed);

// ---- ensembles ----------------------------------------------------------------

/// Worker count from FRACHP_THREADS (unset or 0 = hardware concurrency).
std::size_t ensemble_threads();

/// Runs body(i) for i in [0, n) on up to ensemble_threads() workers. Bodies
/// write only to their own slot; the first exception (lowest index) is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace frachp
