#include "hbq/integrator.hpp"

#include <algorithm>
#include <cmath>

#include "hbq/errors.hpp"

namespace hbq {

TimeGrid::TimeGrid(double final_time, int steps) : final_time_(final_time), steps_(steps) {
  if (!(final_time > 0.0) || !std::isfinite(final_time))
    throw InvalidArgument("final time must be positive");
  if (steps < 1) throw InvalidArgument("number of time steps must be at least 1");
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::completed: return "completed";
    case Termination::non_finite: return "non_finite";
    case Termination::guard_exceeded: return "guard_exceeded";
  }
  return "unknown";
}

Rk4Stepper::Rk4Stepper(const GridSpec& grid, const HbqParams& params, Dealiasing dealiasing)
    : op_(grid, params, dealiasing),
      scheme_(2 * static_cast<std::size_t>(grid.size())),
      packed_(2 * static_cast<std::size_t>(grid.size())) {}

bool Rk4Stepper::try_step(State& state, double dt) {
  const std::size_t n = packed_.size() / 2;
  if (state.u.size() != n || state.v.size() != n) throw InvalidArgument("state does not match grid");

  std::copy(state.u.begin(), state.u.end(), packed_.begin());
  std::copy(state.v.begin(), state.v.end(), packed_.begin() + static_cast<std::ptrdiff_t>(n));
  // u' = v, v' = F^-1[-sigma (U + f(U))]
  const bool ok = scheme_.advance(packed_, dt, [&](std::span<const double> y, std::span<double> dy) {
    std::copy(y.begin() + static_cast<std::ptrdiff_t>(n), y.end(), dy.begin());
    op_.acceleration(y.first(n), dy.subspan(n));
  });
  if (!ok) return false;
  std::copy(packed_.begin(), packed_.begin() + static_cast<std::ptrdiff_t>(n), state.u.begin());
  std::copy(packed_.begin() + static_cast<std::ptrdiff_t>(n), packed_.end(), state.v.begin());
  state.t += dt;
  return true;
}

State rk4_step(const State& state, double dt, const GridSpec& grid, const HbqParams& params) {
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  Rk4Stepper stepper(grid, params);
  State next = state;
  if (!stepper.try_step(next, dt)) throw BlowupDetected(state, "non-finite value in RK4 stage");
  return next;
}

Trajectory evolve(const State& initial, const GridSpec& grid, const HbqParams& params,
                  const TimeGrid& tgrid, const EvolveOptions& options) {
  if (options.sample_stride < 1) throw InvalidArgument("sample stride must be at least 1");
  if (!initial.finite()) throw InvalidArgument("initial state is not finite");

  Rk4Stepper stepper(grid, params, options.dealiasing);
  Trajectory traj;
  traj.samples.push_back(initial);
  traj.norms.push_back({initial.t, max_abs(initial.u)});

  State state = initial;
  const double dt = tgrid.dt();
  int taken = 0;
  for (int n = 1; n <= tgrid.steps(); ++n) {
    if (!stepper.try_step(state, dt)) {
      traj.termination = Termination::non_finite;
      break;
    }
    state.t = initial.t + tgrid.time(n);
    taken = n;
    const double norm = max_abs(state.u);
    traj.norms.push_back({state.t, norm});
    if (options.on_step) options.on_step(state);
    if (n % options.sample_stride == 0) traj.samples.push_back(state);
    if (!(norm <= options.blowup_guard)) {
      traj.termination = Termination::guard_exceeded;
      break;
    }
  }
  if (taken % options.sample_stride != 0) traj.samples.push_back(state);
  traj.final = std::move(state);
  return traj;
}

Trajectory evolve(const State& initial, const GridSpec& grid, const HbqParams& params,
                  const TimeGrid& tgrid, int sample_stride) {
  EvolveOptions options;
  options.sample_stride = sample_stride;
  return evolve(initial, grid, params, tgrid, options);
}

}  // namespace hbq
