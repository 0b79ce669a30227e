#pragma once

#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hbq/integrator.hpp"
#include "hbq/model.hpp"
#include "hbq/spectral.hpp"

namespace hbq {

/// max_i |numeric_i - exact_i|
double linf_error(std::span<const double> numeric, std::span<const double> exact);

struct ConvergenceRow {
  int resolution = 0;
  double error = 0.0;
  std::optional<double> order;  // empty for the first row
};

using ConvergenceTable = std::vector<ConvergenceRow>;

/// Empirical order log(e_coarse/e_fine) / log(r_fine/r_coarse) between
/// consecutive rows.  Throws DegenerateInput on a zero error and
/// InvalidArgument on fewer than two rows or non-increasing resolutions.
ConvergenceTable convergence_order(std::span<const std::pair<int, double>> rows);

/// 2L * mean(u).  The zero mode of U_t is not determined by (u, v), so this
/// is the mass that is actually monitored; its rate of change is 2L*mean(v).
double mass_surrogate(std::span<const double> u, const GridSpec& grid);

/// Conserved functionals with U_t taken as the zero-mean antiderivative of v.
struct ConservedIntegrals {
  double I1 = 0.0;  // integral of U_t; identically zero under the convention
  double I1_surrogate = 0.0;
  double I2 = 0.0;
  double I3 = 0.0;
};

/// Throws NonzeroMean when v has nonzero mean (U_t is then not periodic).
ConservedIntegrals conserved_integrals(const State& state, const GridSpec& grid,
                                       const HbqParams& params);

/// I3 from explicit antiderivative data: U_t = Psi, U_x = phi, U_xt = psi,
/// U_xxt = psi'.  Used when closed-form Psi is available.
double energy_integral(std::span<const double> u, std::span<const double> Psi,
                       std::span<const double> psi, std::span<const double> psi_x,
                       const GridSpec& grid, const HbqParams& params);

/// Sampled check of u f(u) <= 2 mu u^2 + 2 (1 + 2 mu) F(u) on [lo, hi].
/// A check, not a proof.
bool blowup_condition_check(const HbqParams& params, double mu, double lo, double hi,
                            int samples = 1'000'000);

/// First time max|u| reaches threshold, linearly interpolated between the
/// bracketing records; empty if never reached.  Uses the per-step norm
/// trace when present, otherwise the samples.
std::optional<double> detect_blowup_time(const Trajectory& traj, double threshold);

/// Max of u over the grid at the final state.
double amplitude(const Trajectory& traj);

struct DiagnosticsRecord {
  double t = 0.0;
  double linf_u = 0.0;
  std::optional<double> linf_error;
  double amplitude = 0.0;
  double I1 = 0.0;
  std::optional<double> I2;
  std::optional<double> I3;
  bool blowup_flag = false;
};

/// blowup_flag is set when the state is non-finite or max|u| >= threshold.
DiagnosticsRecord make_record(const State& state, const GridSpec& grid, const HbqParams& params,
                              std::span<const double> exact = {},
                              double threshold = std::numeric_limits<double>::infinity());

}  // namespace hbq
