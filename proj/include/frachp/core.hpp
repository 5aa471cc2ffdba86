#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "frachp/error.hpp"

namespace frachp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Number of grid steps a fractional run must stop short of the kernel's
/// outer time: t_start + N*h <= t_eval - kGuardSteps*h.
inline constexpr int kGuardSteps = 10;

/// Fractional orders (alpha, beta) in (0, 1] and the fixed outer time t of
/// every (t - s) kernel.
class FractionalParams {
 public:
  FractionalParams(double alpha, double beta, double t_eval);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double t_eval() const noexcept { return t_eval_; }

 private:
  double alpha_;
  double beta_;
  double t_eval_;
};

/// Uniform grid t_start + k*h, k = 0..n_steps. Points are computed by
/// multiplication, never by accumulation.
class TimeGrid {
 public:
  TimeGrid(double t_start, double h, std::size_t n_steps);

  double t_start() const noexcept { return t_start_; }
  double h() const noexcept { return h_; }
  std::size_t n_steps() const noexcept { return n_steps_; }

  double point(std::size_t k) const noexcept { return t_start_ + static_cast<double>(k) * h_; }
  double t_end() const noexcept { return point(n_steps_); }

 private:
  double t_start_;
  double h_;
  std::size_t n_steps_;
};

/// Builds a grid for a fractional run and enforces the singularity guard
/// against params.t_eval.
TimeGrid make_grid(double t_start, double h, std::size_t n_steps, const FractionalParams& params);

/// Throws GridReachesSingularity unless grid.t_end() <= t_eval - kGuardSteps*h.
void check_singularity_guard(const TimeGrid& grid, const FractionalParams& params);

/// HP state (q, v, p) in flat coordinates; all three share dimension n >= 1.
struct PhaseState {
  Vector q;
  Vector v;
  Vector p;

  PhaseState(Vector q_in, Vector v_in, Vector p_in);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(q.size()); }
};

struct SeedRecord {
  std::uint64_t seed = 0;
  std::size_t channels = 0;
};

struct Trajectory {
  TimeGrid grid;
  std::vector<PhaseState> states;
  SeedRecord seed_record;

  Trajectory(TimeGrid grid_in, std::vector<PhaseState> states_in, SeedRecord record);

  std::size_t dim() const noexcept { return states.front().dim(); }
};

}  // namespace frachp
