#pragma once

#include "hbq/model.hpp"
#include "hbq/spectral.hpp"

namespace hbq {

/// Closed-form solitary wave u = A sech^(4/(p-1))(B (x - c t - x0)).
///
/// For the HBq equation A, B and c are all fixed by (p, eta1, eta2); there
/// is no free amplitude.  Only f(u) = +u^p admits this family.
struct SolitaryWave {
  double amplitude = 0.0;      // A
  double inverse_width = 0.0;  // B
  double speed = 0.0;          // c, negative for a left-mover
  double center = 0.0;         // x0
  HbqParams params;

  /// Exponent 4/(p-1) applied to sech.
  double sech_power() const { return 4.0 / (params.p - 1); }

  SolitaryWave centered_at(double x0) const;
  SolitaryWave reversed() const;
};

/// Right-moving wave centered at 0.  Throws NoSolitaryWave when the speed
/// relation gives c^2 <= 0 or when sign != +1.
SolitaryWave solitary_params(const HbqParams& params);

double solitary_profile(const SolitaryWave& wave, double x, double t);

/// Exact time derivative of solitary_profile.
double solitary_velocity(const SolitaryWave& wave, double x, double t);

/// u and v = u_t of the wave at time t sampled on the grid.
State solitary_state(const SolitaryWave& wave, const GridSpec& grid, double t);

/// solitary_state at t = 0.
State solitary_initial_state(const SolitaryWave& wave, const GridSpec& grid);

/// Improved Boussinesq solitary wave of amplitude A at t = 0:
/// u = A sech^2(w x), w = sqrt(A/6)/c, c = sqrt(2A/3 + 1), and v its exact
/// time derivative 2A sqrt(A/6) sech^2(w x) tanh(w x).
State ibq_initial_state(double amplitude, const GridSpec& grid);

/// Speed sqrt(2A/3 + 1) of the improved Boussinesq wave.
double ibq_speed(double amplitude);

/// Exact improved Boussinesq profile at time t (quadratic nonlinearity).
double ibq_profile(double amplitude, double x, double t);

/// max |(c^2-1) u - eta1 c^2 u'' + eta2 c^2 u'''' - u^p| on the grid with
/// spectral derivatives of the t = 0 profile.
double traveling_ode_residual(const SolitaryWave& wave, const GridSpec& grid);

}  // namespace hbq
