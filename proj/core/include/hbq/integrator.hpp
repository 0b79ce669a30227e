#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "hbq/model.hpp"
#include "hbq/spectral.hpp"

namespace hbq {

/// Fixed-step time grid: M steps of size dt = T/M.
class TimeGrid {
 public:
  TimeGrid(double final_time, int steps);

  double final_time() const { return final_time_; }
  int steps() const { return steps_; }
  double dt() const { return final_time_ / steps_; }
  /// Time after n steps from zero.  time(steps()) == final_time().
  double time(int n) const { return n == steps_ ? final_time_ : n * dt(); }

 private:
  double final_time_;
  int steps_;
};

/// Raised by rk4_step when a stage produces NaN or Inf.
class BlowupDetected : public std::runtime_error {
 public:
  BlowupDetected(State last_finite, const char* what)
      : std::runtime_error(what), last_finite_(std::move(last_finite)) {}

  const State& last_finite() const { return last_finite_; }
  double time() const { return last_finite_.t; }

 private:
  State last_finite_;
};

enum class Termination {
  completed,
  non_finite,      // a stage produced NaN/Inf
  guard_exceeded,  // max|u| passed the configured guard
};

const char* to_string(Termination t);

struct NormSample {
  double t;
  double linf_u;
};

struct Trajectory {
  std::vector<State> samples;  // first at the initial time, then every stride steps
  State final;                 // last finite state
  Termination termination = Termination::completed;
  std::vector<NormSample> norms;  // max|u| initially and after every accepted step

  bool blew_up() const { return termination != Termination::completed; }
};

/// Classic four-stage Runge-Kutta tableau (weights 1/6, 2/6, 2/6, 1/6) on a
/// flat vector.  rhs(y, dydt) fills dydt; both are std::span<double>-like.
class Rk4Scheme {
 public:
  explicit Rk4Scheme(std::size_t n) : stage_(n), next_(n) {
    for (auto& k : k_) k.resize(n);
  }

  std::size_t size() const { return stage_.size(); }

  /// y <- y + dt * (k1 + 2 k2 + 2 k3 + k4) / 6.  Returns false and leaves y
  /// untouched when any stage or the result is non-finite.
  template <class Rhs>
  bool advance(std::span<double> y, double dt, Rhs&& rhs) {
    static constexpr double offset[4] = {0.0, 0.5, 0.5, 1.0};
    const std::size_t n = y.size();
    for (int s = 0; s < 4; ++s) {
      if (s == 0) {
        std::copy(y.begin(), y.end(), stage_.begin());
      } else {
        const double h = offset[s] * dt;
        const auto& prev = k_[s - 1];
        for (std::size_t j = 0; j < n; ++j) stage_[j] = y[j] + h * prev[j];
      }
      rhs(std::span<const double>(stage_), std::span<double>(k_[s]));
      if (!finite(k_[s])) return false;
    }
    const double w = dt / 6.0;
    for (std::size_t j = 0; j < n; ++j)
      next_[j] = y[j] + w * (k_[0][j] + 2.0 * k_[1][j] + 2.0 * k_[2][j] + k_[3][j]);
    if (!finite(next_)) return false;
    std::copy(next_.begin(), next_.end(), y.begin());
    return true;
  }

 private:
  static bool finite(const std::vector<double>& a) {
    for (double x : a)
      if (!std::isfinite(x)) return false;
    return true;
  }

  std::vector<double> k_[4];
  std::vector<double> stage_;
  std::vector<double> next_;
};

/// RK4 for the HBq system (u, v) bound to one grid and model.  Owns its
/// scratch space; one per thread.
class Rk4Stepper {
 public:
  Rk4Stepper(const GridSpec& grid, const HbqParams& params,
             Dealiasing dealiasing = Dealiasing::none);

  /// Advances state by dt in place (dt may be negative).  Returns false,
  /// leaving state untouched, if any stage is non-finite.
  bool try_step(State& state, double dt);

  HbqOperator& op() { return op_; }

 private:
  HbqOperator op_;
  Rk4Scheme scheme_;
  std::vector<double> packed_;  // [u; v]
};

/// One RK4 step.  Throws BlowupDetected carrying the input state if a
/// stage is non-finite.
State rk4_step(const State& state, double dt, const GridSpec& grid, const HbqParams& params);

struct EvolveOptions {
  int sample_stride = 1;
  double blowup_guard = 1e6;
  Dealiasing dealiasing = Dealiasing::none;
  /// Called after every accepted step.
  std::function<void(const State&)> on_step;
};

/// Integrates from initial over tgrid.  Blow-up ends the run early with
/// the termination reason recorded; it is not an error.
Trajectory evolve(const State& initial, const GridSpec& grid, const HbqParams& params,
                  const TimeGrid& tgrid, const EvolveOptions& options = {});

Trajectory evolve(const State& initial, const GridSpec& grid, const HbqParams& params,
                  const TimeGrid& tgrid, int sample_stride);

}  // namespace hbq
