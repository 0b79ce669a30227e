#include "hbq/waves.hpp"

#include <cmath>
#include <string>

#include "hbq/errors.hpp"

namespace hbq {

namespace {

double sech(double z) { return 1.0 / std::cosh(z); }

}  // namespace

SolitaryWave SolitaryWave::centered_at(double x0) const {
  SolitaryWave w = *this;
  w.center = x0;
  return w;
}

SolitaryWave SolitaryWave::reversed() const {
  SolitaryWave w = *this;
  w.speed = -speed;
  return w;
}

SolitaryWave solitary_params(const HbqParams& params) {
  params.validate();
  if (params.sign != 1)
    throw NoSolitaryWave("sech solitary waves exist only for f(u) = +u^p");
  if (!(params.eta2 > 0.0))
    throw NoSolitaryWave("the sech^(4/(p-1)) family requires eta2 > 0");

  const double p = params.p;
  const double q = p * p + 2.0 * p + 5.0;
  const double e1 = params.eta1;
  const double e2 = params.eta2;

  const double ratio = 4.0 * e1 * e1 * (p + 1.0) * (p + 1.0) / (e2 * q * q);
  if (!(ratio < 1.0))
    throw NoSolitaryWave("no solitary wave for p=" + std::to_string(params.p) +
                         ", eta1=" + std::to_string(e1) + ", eta2=" + std::to_string(e2) +
                         ": c^2 would be non-positive");
  const double c2 = 1.0 / (1.0 - ratio);

  SolitaryWave w;
  w.params = params;
  w.speed = std::sqrt(c2);
  w.amplitude = std::pow(e1 * e1 * c2 * (p + 1.0) * (p + 3.0) * (3.0 * p + 1.0) / (2.0 * e2 * q * q),
                         1.0 / (p - 1.0));
  w.inverse_width = std::sqrt(e1 * (p - 1.0) * (p - 1.0) / (4.0 * e2 * q));
  return w;
}

double solitary_profile(const SolitaryWave& wave, double x, double t) {
  const double z = wave.inverse_width * (x - wave.speed * t - wave.center);
  return wave.amplitude * std::pow(sech(z), wave.sech_power());
}

double solitary_velocity(const SolitaryWave& wave, double x, double t) {
  // d/dt A sech^g(z) = A g B c sech^g(z) tanh(z), z = B (x - c t - x0)
  const double z = wave.inverse_width * (x - wave.speed * t - wave.center);
  const double g = wave.sech_power();
  return wave.amplitude * g * wave.inverse_width * wave.speed * std::pow(sech(z), g) * std::tanh(z);
}

State solitary_state(const SolitaryWave& wave, const GridSpec& grid, double t) {
  State s;
  s.u = grid.sample([&](double x) { return solitary_profile(wave, x, t); });
  s.v = grid.sample([&](double x) { return solitary_velocity(wave, x, t); });
  s.t = t;
  return s;
}

State solitary_initial_state(const SolitaryWave& wave, const GridSpec& grid) {
  return solitary_state(wave, grid, 0.0);
}

double ibq_speed(double amplitude) { return std::sqrt(2.0 * amplitude / 3.0 + 1.0); }

double ibq_profile(double amplitude, double x, double t) {
  const double c = ibq_speed(amplitude);
  const double w = std::sqrt(amplitude / 6.0) / c;
  const double s = sech(w * (x - c * t));
  return amplitude * s * s;
}

State ibq_initial_state(double amplitude, const GridSpec& grid) {
  if (!(amplitude > 0.0)) throw InvalidArgument("IBq amplitude must be positive");
  const double c = ibq_speed(amplitude);
  const double w = std::sqrt(amplitude / 6.0) / c;
  State s;
  s.u = grid.sample([&](double x) {
    const double h = sech(w * x);
    return amplitude * h * h;
  });
  // d/dt of A sech^2(w (x - c t)) at t = 0; w c = sqrt(A/6).
  const double rate = 2.0 * amplitude * w * c;
  s.v = grid.sample([&](double x) {
    const double h = sech(w * x);
    return rate * h * h * std::tanh(w * x);
  });
  return s;
}

double traveling_ode_residual(const SolitaryWave& wave, const GridSpec& grid) {
  const RealField u = grid.sample([&](double x) { return solitary_profile(wave, x, 0.0); });
  const RealField u2 = spectral_derivative(u, grid, 2);
  const RealField u4 = spectral_derivative(u, grid, 4);
  const double c2 = wave.speed * wave.speed;
  const HbqParams& prm = wave.params;

  double worst = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double r = (c2 - 1.0) * u[j] - prm.eta1 * c2 * u2[j] + prm.eta2 * c2 * u4[j] -
                     int_pow(u[j], prm.p);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace hbq
