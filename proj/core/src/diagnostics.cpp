#include "hbq/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "hbq/errors.hpp"

namespace hbq {

double linf_error(std::span<const double> numeric, std::span<const double> exact) {
  if (numeric.size() != exact.size()) throw InvalidArgument("fields differ in length");
  double worst = 0.0;
  for (std::size_t i = 0; i < numeric.size(); ++i) {
    const double d = std::abs(numeric[i] - exact[i]);
    if (d > worst || std::isnan(d)) worst = d;
  }
  return worst;
}

ConvergenceTable convergence_order(std::span<const std::pair<int, double>> rows) {
  if (rows.size() < 2) throw InvalidArgument("convergence table needs at least two rows");
  ConvergenceTable table;
  table.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto [res, err] = rows[i];
    if (err == 0.0) throw DegenerateInput("zero error: convergence order is saturated");
    if (!(err > 0.0)) throw InvalidArgument("errors must be positive");
    ConvergenceRow row{res, err, std::nullopt};
    if (i > 0) {
      const auto [prev_res, prev_err] = rows[i - 1];
      if (res <= prev_res) throw InvalidArgument("resolutions must be strictly increasing");
      row.order = std::log(prev_err / err) / std::log(static_cast<double>(res) / prev_res);
    }
    table.push_back(row);
  }
  return table;
}

double mass_surrogate(std::span<const double> u, const GridSpec& grid) {
  return integrate(u, grid);
}

double energy_integral(std::span<const double> u, std::span<const double> Psi,
                       std::span<const double> psi, std::span<const double> psi_x,
                       const GridSpec& grid, const HbqParams& params) {
  std::vector<double> density(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    density[j] = Psi[j] * Psi[j] + 2.0 * params.potential(u[j]) + u[j] * u[j] +
                 params.eta1 * psi[j] * psi[j] + params.eta2 * psi_x[j] * psi_x[j];
  }
  return integrate(density, grid);
}

ConservedIntegrals conserved_integrals(const State& state, const GridSpec& grid,
                                       const HbqParams& params) {
  ConservedIntegrals out;
  out.I1_surrogate = mass_surrogate(state.u, grid);

  const RealField Ut = spectral_antiderivative(state.v, grid);
  const RealField v_x = spectral_derivative(state.v, grid, 1);
  const RealField v_xxx = spectral_derivative(state.v, grid, 3);

  out.I1 = integrate(Ut, grid);

  std::vector<double> momentum(state.u.size());
  for (std::size_t j = 0; j < momentum.size(); ++j)
    momentum[j] = state.u[j] * (Ut[j] - params.eta1 * v_x[j] + params.eta2 * v_xxx[j]);
  out.I2 = integrate(momentum, grid);
  out.I3 = energy_integral(state.u, Ut, state.v, v_x, grid, params);
  return out;
}

bool blowup_condition_check(const HbqParams& params, double mu, double lo, double hi,
                            int samples) {
  if (!(mu > 0.0)) throw InvalidArgument("mu must be positive");
  if (samples < 1000) throw InvalidArgument("at least 1000 samples are required");
  if (!(hi > lo)) throw InvalidArgument("empty sampling interval");

  for (int i = 0; i < samples; ++i) {
    const double u = lo + (hi - lo) * i / (samples - 1);
    const double lhs = u * params.nonlinearity(u);
    const double rhs = 2.0 * mu * u * u + 2.0 * (1.0 + 2.0 * mu) * params.potential(u);
    // Absorb rounding in the large-|u| cancellations.
    const double slack = 1e-12 * std::max({1.0, std::abs(lhs), std::abs(rhs)});
    if (lhs > rhs + slack) return false;
  }
  return true;
}

std::optional<double> detect_blowup_time(const Trajectory& traj, double threshold) {
  std::vector<NormSample> trace = traj.norms;
  if (trace.empty()) {
    for (const auto& s : traj.samples) trace.push_back({s.t, max_abs(s.u)});
  }
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace[i].linf_u >= threshold) {
      if (i == 0) return trace[0].t;
      const auto& a = trace[i - 1];
      const auto& b = trace[i];
      if (!std::isfinite(b.linf_u)) return b.t;
      const double frac = (threshold - a.linf_u) / (b.linf_u - a.linf_u);
      return a.t + frac * (b.t - a.t);
    }
  }
  return std::nullopt;
}

double amplitude(const Trajectory& traj) {
  const State& s = traj.final.u.empty() ? traj.samples.back() : traj.final;
  if (s.u.empty()) throw InvalidArgument("empty trajectory");
  return *std::max_element(s.u.begin(), s.u.end());
}

DiagnosticsRecord make_record(const State& state, const GridSpec& grid, const HbqParams& params,
                              std::span<const double> exact, double threshold) {
  DiagnosticsRecord r;
  r.t = state.t;
  r.linf_u = max_abs(state.u);
  r.amplitude = state.u.empty() ? 0.0 : *std::max_element(state.u.begin(), state.u.end());
  r.blowup_flag = !state.finite() || !(r.linf_u < threshold);
  if (!exact.empty()) r.linf_error = linf_error(state.u, exact);
  r.I1 = mass_surrogate(state.u, grid);
  if (state.finite()) {
    try {
      const auto ints = conserved_integrals(state, grid, params);
      r.I2 = ints.I2;
      r.I3 = ints.I3;
    } catch (const NonzeroMean&) {
      // I2/I3 are undefined without a periodic U_t.
    }
  }
  return r;
}

}  // namespace hbq
