#pragma once

#include <iosfwd>

#include "frachp/config.hpp"
#include "frachp/integrator.hpp"

namespace frachp {

/// Exit codes: 0 success, 1 a gated check failed, 2 invalid input or
/// runtime error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitError = 2;

/// Integrates the configured system twice on one Wiener path: as given and
/// with constant noise potentials. Writes trajectory.csv,
/// trajectory_deterministic.csv, run_manifest and, with plot = true,
/// p_vs_n.svg, phase_qp.svg, p_vs_n_noisy.svg, phase_qp_noisy.svg.
int cmd_simulate(const RunConfig& config, std::ostream& log);

/// Strong-convergence study; writes convergence.csv (h,mean_error).
int cmd_convergence(const RunConfig& config, std::ostream& log);

/// Discrete action stationarity. Gated (PASS/FAIL) when the noise
/// potentials are constant; otherwise reports statistics over n_paths.
int cmd_action_check(const RunConfig& config, std::ostream& log);

/// Fractional Black-Scholes ensemble; writes summary.csv and per-path CSVs.
int cmd_volterra(const RunConfig& config, std::ostream& log);

struct ActionCheckOutcome {
  StationarityReport report;
  double threshold;
  bool passed;
};

/// The gated deterministic check on a given trajectory.
ActionCheckOutcome run_action_check(const Trajectory& trajectory, const SystemSpec& sys,
                                    const FractionalParams& params, const WienerPath& path,
                                    std::size_t count, std::uint64_t seed, double threshold);

/// Sum of squared increments of p_1 along a trajectory.
double momentum_quadratic_variation(const Trajectory& trajectory);

}  // namespace frachp
