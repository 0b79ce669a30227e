#include "hbq/model.hpp"

#include <algorithm>
#include <cmath>

#include "hbq/errors.hpp"

namespace hbq {

void HbqParams::validate() const {
  if (!(eta1 > 0.0)) throw InvalidArgument("eta1 must be positive");
  if (!(eta2 >= 0.0)) throw InvalidArgument("eta2 must be non-negative");
  if (p < 2) throw InvalidArgument("nonlinearity power p must be at least 2");
  if (sign != 1 && sign != -1) throw InvalidArgument("nonlinearity sign must be +1 or -1");
}

double int_pow(double u, int p) {
  double r = u;
  for (int i = 1; i < p; ++i) r *= u;
  return r;
}

double HbqParams::nonlinearity(double u) const { return sign * int_pow(u, p); }

double HbqParams::potential(double u) const { return sign * int_pow(u, p + 1) / (p + 1); }

bool State::finite() const {
  auto ok = [](double x) { return std::isfinite(x); };
  return std::all_of(u.begin(), u.end(), ok) && std::all_of(v.begin(), v.end(), ok);
}

double symbol_sigma(int k, const GridSpec& grid, const HbqParams& params) {
  const double kappa2 = std::pow(grid.physical_wavenumber(k), 2);
  return kappa2 / (1.0 + params.eta1 * kappa2 + params.eta2 * kappa2 * kappa2);
}

SpectralField nonlinear_term(std::span<const double> u, const HbqParams& params) {
  std::vector<double> f(u.size());
  std::transform(u.begin(), u.end(), f.begin(),
                 [&](double x) { return params.nonlinearity(x); });
  return forward_dft(f);
}

SpectralRhs rhs(const State& state, const GridSpec& grid, const HbqParams& params) {
  const int n = grid.size();
  if (static_cast<int>(state.u.size()) != n || static_cast<int>(state.v.size()) != n)
    throw InvalidArgument("state does not match grid");

  HbqOperator op(grid, params);
  std::vector<Complex> half(static_cast<std::size_t>(n / 2 + 1));
  op.acceleration_spectrum(state.u, half);

  SpectralRhs out{forward_dft(state.v), SpectralField(n)};
  for (int k = 0; k < n / 2; ++k) out.dv_dt(k) = half[static_cast<std::size_t>(k)];
  for (int k = 1; k < n / 2; ++k) out.dv_dt(-k) = std::conj(half[static_cast<std::size_t>(k)]);
  out.dv_dt(-n / 2) = half[static_cast<std::size_t>(n / 2)];
  return out;
}

HbqOperator::HbqOperator(const GridSpec& grid, const HbqParams& params, Dealiasing dealiasing)
    : grid_(grid),
      params_(params),
      dealiasing_(dealiasing),
      transform_(grid.size()),
      sigma_(static_cast<std::size_t>(grid.size() / 2 + 1)),
      nonlinear_(static_cast<std::size_t>(grid.size())),
      u_hat_(static_cast<std::size_t>(grid.size() / 2 + 1)),
      f_hat_(static_cast<std::size_t>(grid.size() / 2 + 1)) {
  params_.validate();
  const int half = grid.size() / 2;
  for (int k = 0; k <= half; ++k) sigma_[static_cast<std::size_t>(k)] = symbol_sigma(k, grid, params);
}

void HbqOperator::acceleration_spectrum(std::span<const double> u, std::span<Complex> half) {
  std::transform(u.begin(), u.end(), nonlinear_.begin(),
                 [&](double x) { return params_.nonlinearity(x); });
  transform_.forward(u, u_hat_);
  transform_.forward(nonlinear_, f_hat_);

  if (dealiasing_ == Dealiasing::two_thirds) {
    const int cutoff = grid_.size() / 3;
    for (std::size_t k = static_cast<std::size_t>(cutoff) + 1; k < f_hat_.size(); ++k)
      f_hat_[k] = 0.0;
  }

  for (std::size_t k = 0; k < half.size(); ++k) half[k] = -sigma_[k] * (u_hat_[k] + f_hat_[k]);
}

void HbqOperator::acceleration(std::span<const double> u, std::span<double> dv) {
  acceleration_spectrum(u, f_hat_);
  transform_.inverse(f_hat_, dv);
}

}  // namespace hbq
