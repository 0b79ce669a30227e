#include "hbq_cli/checks.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <sstream>

#include "hbq/diagnostics.hpp"
#include "hbq/experiments.hpp"
#include "hbq/integrator.hpp"
#include "hbq/waves.hpp"

namespace hbq::cli {

namespace {

using std::numbers::pi;

CheckResult below(std::string name, double value, double tol) {
  CheckResult r;
  r.name = std::move(name);
  r.value = value;
  r.tolerance = tol;
  r.passed = std::isfinite(value) && value <= tol;
  return r;
}

CheckResult within(std::string name, double value, double target, double tol) {
  CheckResult r = below(std::move(name), std::abs(value - target), tol);
  std::ostringstream os;
  os.precision(10);
  os << "value " << value << " target " << target;
  r.detail = os.str();
  r.value = value;
  return r;
}

std::vector<double> random_field(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> f(static_cast<std::size_t>(n));
  for (auto& x : f) x = dist(rng);
  return f;
}

// O(N^2) reference kept apart from the FFT path.
std::complex<double> direct_coefficient(const std::vector<double>& f, int k) {
  const int n = static_cast<int>(f.size());
  std::complex<double> s = 0.0;
  for (int j = 0; j < n; ++j) s += f[static_cast<std::size_t>(j)] * std::polar(1.0, -2.0 * pi * k * j / n);
  return s / static_cast<double>(n);
}

// Fourth-order central difference.  The closed-form antiderivatives are not
// periodic to 1e-10 on [-10, 10], so a spectral derivative would see Gibbs error.
double central_difference(double (*f)(double), double x) {
  const double h = 1e-3;
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

// y' = -y through the same tableau the HBq stepper uses.
double rk4_scalar(double y0, double h, int steps) {
  Rk4Scheme scheme(1);
  std::vector<double> y{y0};
  for (int i = 0; i < steps; ++i)
    scheme.advance(y, h, [](std::span<const double> a, std::span<double> da) { da[0] = -a[0]; });
  return y[0];
}

}  // namespace

std::vector<CheckResult> run_invariant_checks() {
  std::vector<CheckResult> out;

  {
    const auto f = random_field(128, 7);
    const auto F = forward_dft(f);
    double worst = 0.0;
    for (int k = -64; k < 64; ++k) worst = std::max(worst, std::abs(F(k) - direct_coefficient(f, k)));
    out.push_back(below("dft_matches_direct_sum", worst, 1e-13));

    const auto back = inverse_dft(F);
    out.push_back(below("dft_round_trip", linf_error(back, f) / max_abs(f), 1e-11));

    const GridSpec g = make_grid(3.0, 128);
    double energy_x = 0.0, energy_k = 0.0;
    for (double x : f) energy_x += x * x * g.spacing();
    for (int k = -64; k < 64; ++k) energy_k += std::norm(F(k));
    energy_k *= g.length();
    out.push_back(below("parseval", std::abs(energy_x - energy_k) / energy_x, 1e-10));
  }

  {
    const GridSpec g = make_grid(5.0, 64);
    const double w = pi / g.half_length();
    auto f = g.sample([&](double x) { return std::sin(3 * w * x) + 0.5 * std::cos(7 * w * x) + 2.0; });
    auto exact = g.sample([&](double x) { return 3 * w * std::cos(3 * w * x) - 3.5 * w * std::sin(7 * w * x); });
    out.push_back(below("derivative_exact_on_trig_polynomial",
                        linf_error(spectral_derivative(f, g, 1), exact), 1e-11));
    auto exact3 = g.sample([&](double x) {
      return -27 * w * w * w * std::cos(3 * w * x) + 0.5 * 343 * w * w * w * std::sin(7 * w * x);
    });
    out.push_back(below("third_derivative_exact", linf_error(spectral_derivative(f, g, 3), exact3),
                        1e-10 * max_abs(exact3)));
  }

  {
    double prev = 0.0, worst_order = 4.0;
    for (int steps : {10, 20, 40, 80}) {
      const double err = std::abs(rk4_scalar(1.0, 1.0 / steps, steps) - std::exp(-1.0));
      if (prev > 0.0) worst_order = std::min(worst_order, std::log2(prev / err));
      prev = err;
    }
    out.push_back(within("rk4_scalar_order", worst_order, 4.0, 0.1));
  }

  {
    const GridSpec g = make_grid(20.0, 128);
    const HbqParams prm{1.0, 1.0, 2, +1};
    State s;
    s.u = g.sample([](double x) { return 0.3 + 0.5 * std::exp(-x * x / 4); });
    s.v = g.sample([](double x) { return 0.1 + 0.2 * x * std::exp(-x * x / 4); });
    const double mean_v0 = mean(s.v);
    const double mean_u0 = mean(s.u);
    const Trajectory tr = evolve(s, g, prm, TimeGrid(2.0, 200), 200);
    out.push_back(below("zero_mode_mean_v_constant", std::abs(mean(tr.final.v) - mean_v0), 1e-12));
    out.push_back(below("zero_mode_mean_u_linear",
                        std::abs(mean(tr.final.u) - (mean_u0 + 2.0 * mean_v0)), 1e-12));
  }

  {
    const std::vector<std::pair<int, double>> t1 = {
        {2, 8.662e-3}, {5, 2.530e-4}, {10, 1.614e-5}, {50, 2.623e-8}, {100, 1.637e-9}};
    const double p1[] = {3.8561, 3.9704, 3.9903, 4.0021};
    const auto c1 = convergence_order(t1);
    double worst = 0.0;
    for (std::size_t i = 1; i < c1.size(); ++i) worst = std::max(worst, std::abs(*c1[i].order - p1[i - 1]));
    const std::vector<std::pair<int, double>> t2 = {
        {10, 0.211e-1}, {50, 1.747e-3}, {100, 4.431e-7}, {150, 6.500e-10}, {200, 3.884e-13}};
    const double p2[] = {1.5480, 11.9450, 16.0916, 25.8017};
    const auto c2 = convergence_order(t2);
    for (std::size_t i = 1; i < c2.size(); ++i) worst = std::max(worst, std::abs(*c2[i].order - p2[i - 1]));
    out.push_back(below("convergence_order_reproduces_tables", worst, 0.05));
  }

  {
    const GridSpec g = make_grid(100.0, 512);
    double worst = 0.0;
    for (int p = 2; p <= 5; ++p)
      worst = std::max(worst, traveling_ode_residual(solitary_params({1.0, 1.0, p, +1}), g));
    out.push_back(below("solitary_wave_ode_residual", worst, 1e-10));
  }

  {
    const HbqParams quad{1.0, 1.0, 2, +1}, cubic{1.0, 1.0, 3, -1};
    CheckResult r;
    r.name = "blowup_mu_inequality";
    r.passed = blowup_condition_check(quad, 0.25, -1e3, 1e3) &&
               blowup_condition_check(cubic, 0.5, -1e3, 1e3);
    r.value = r.passed ? 1.0 : 0.0;
    r.tolerance = 1.0;
    out.push_back(r);

    const GridSpec g = make_grid(10.0, 512);
    double worst = 0.0;
    for (BlowupCase c : {BlowupCase::quadratic, BlowupCase::cubic}) {
      const BlowupData d = blowup_data(c);
      for (double x : g.nodes()) {
        worst = std::max(worst, std::abs(central_difference(d.Phi, x) - d.phi(x)));
        worst = std::max(worst, std::abs(central_difference(d.Psi, x) - d.psi(x)));
        worst = std::max(worst, std::abs(central_difference(d.psi, x) - d.psi_x(x)));
      }
      const double I3 = blowup_initial_energy(d, g, d.params);
      CheckResult e;
      e.name = std::string("blowup_I3_negative_") + (c == BlowupCase::quadratic ? "quadratic" : "cubic");
      e.value = I3;
      e.tolerance = 0.0;
      e.passed = I3 < 0.0;
      out.push_back(e);
    }
    out.push_back(below("blowup_antiderivatives_verified", worst, 1e-10));
  }

  return out;
}

}  // namespace hbq::cli
