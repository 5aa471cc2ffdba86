#include "frachp/core.hpp"

#include <cmath>
#include <sstream>

namespace frachp {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NonPositiveStep: return "NonPositiveStep";
    case Errc::ZeroSteps: return "ZeroSteps";
    case Errc::GridReachesSingularity: return "GridReachesSingularity";
    case Errc::InvalidOrder: return "InvalidOrder";
    case Errc::InvalidValue: return "InvalidValue";
    case Errc::NonPositiveArgument: return "NonPositiveArgument";
    case Errc::KernelSingularity: return "KernelSingularity";
    case Errc::IndivisibleFactor: return "IndivisibleFactor";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::BadChannel: return "BadChannel";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NegativeRate: return "NegativeRate";
    case Errc::SingularHessian: return "SingularHessian";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::NotPositiveDefinite: return "NotPositiveDefinite";
    case Errc::NoiseShapeUnsupported: return "NoiseShapeUnsupported";
    case Errc::NumericalBlowup: return "NumericalBlowup";
    case Errc::NotApplicable: return "NotApplicable";
    case Errc::BoundaryViolation: return "BoundaryViolation";
    case Errc::DegenerateInput: return "DegenerateInput";
    case Errc::UnknownKey: return "UnknownKey";
    case Errc::MissingKey: return "MissingKey";
    case Errc::ParseError: return "ParseError";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message, std::optional<std::size_t> step)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), step_(step) {}

namespace {

bool valid_order(double x) { return std::isfinite(x) && x > 0.0 && x <= 1.0; }

}  // namespace

FractionalParams::FractionalParams(double alpha, double beta, double t_eval)
    : alpha_(alpha), beta_(beta), t_eval_(t_eval) {
  if (!valid_order(alpha)) {
    throw Error(Errc::InvalidOrder, "alpha must lie in (0, 1], got " + std::to_string(alpha));
  }
  if (!valid_order(beta)) {
    throw Error(Errc::InvalidOrder, "beta must lie in (0, 1], got " + std::to_string(beta));
  }
  if (!std::isfinite(t_eval) || t_eval <= 0.0) {
    throw Error(Errc::InvalidValue, "t_eval must be positive, got " + std::to_string(t_eval));
  }
}

TimeGrid::TimeGrid(double t_start, double h, std::size_t n_steps)
    : t_start_(t_start), h_(h), n_steps_(n_steps) {
  if (!std::isfinite(h) || h <= 0.0) {
    throw Error(Errc::NonPositiveStep, "step h must be positive, got " + std::to_string(h));
  }
  if (!std::isfinite(t_start)) {
    throw Error(Errc::InvalidValue, "t_start must be finite");
  }
}

void check_singularity_guard(const TimeGrid& grid, const FractionalParams& params) {
  const double limit = params.t_eval() - kGuardSteps * grid.h();
  if (grid.t_end() > limit) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "grid ends at " << grid.t_end() << " but must stop at or before t_eval - " << kGuardSteps
        << "h = " << limit;
    throw Error(Errc::GridReachesSingularity, msg.str());
  }
}

TimeGrid make_grid(double t_start, double h, std::size_t n_steps, const FractionalParams& params) {
  TimeGrid grid(t_start, h, n_steps);
  if (n_steps == 0) {
    throw Error(Errc::ZeroSteps, "a run needs at least one step");
  }
  check_singularity_guard(grid, params);
  return grid;
}

PhaseState::PhaseState(Vector q_in, Vector v_in, Vector p_in)
    : q(std::move(q_in)), v(std::move(v_in)), p(std::move(p_in)) {
  if (q.size() < 1 || v.size() != q.size() || p.size() != q.size()) {
    throw Error(Errc::DimensionMismatch, "q, v, p must share a dimension n >= 1");
  }
}

Trajectory::Trajectory(TimeGrid grid_in, std::vector<PhaseState> states_in, SeedRecord record)
    : grid(grid_in), states(std::move(states_in)), seed_record(record) {
  if (states.size() != grid.n_steps() + 1) {
    throw Error(Errc::GridMismatch, "trajectory needs exactly n_steps + 1 states");
  }
  const auto n = states.front().dim();
  for (const auto& s : states) {
    if (s.dim() != n) {
      throw Error(Errc::DimensionMismatch, "state dimension changes along the trajectory");
    }
  }
}

}  // namespace frachp
