#pragma once

#include <span>
#include <vector>

#include "hbq/spectral.hpp"

namespace hbq {

/// Coefficients of u_tt = u_xx + eta1 u_xxtt - eta2 u_xxxxtt + (f(u))_xx
/// with f(u) = sign * u^p.  eta2 = 0 is the improved Boussinesq limit.
struct HbqParams {
  double eta1 = 1.0;
  double eta2 = 1.0;
  int p = 2;
  int sign = +1;

  /// Throws InvalidArgument unless eta1 > 0, eta2 >= 0, p >= 2, sign = +-1.
  void validate() const;

  /// f(u) = sign * u^p
  double nonlinearity(double u) const;
  /// F(u) = sign * u^(p+1) / (p+1), so that F' = f.
  double potential(double u) const;

  friend bool operator==(const HbqParams&, const HbqParams&) = default;
};

/// u^p by repeated multiplication.
double int_pow(double u, int p);

/// Fields u and v = u_t at time t, sampled on one grid.
struct State {
  RealField u;
  RealField v;
  double t = 0.0;

  bool finite() const;
};

/// sigma_k = (pi k/L)^2 / (1 + eta1 (pi k/L)^2 + eta2 (pi k/L)^4)
double symbol_sigma(int k, const GridSpec& grid, const HbqParams& params);

/// Fourier coefficients of the pointwise field sign * u_j^p.
SpectralField nonlinear_term(std::span<const double> u, const HbqParams& params);

struct SpectralRhs {
  SpectralField du_dt;
  SpectralField dv_dt;
};

/// Fourier-space right-hand side: du_dt(k) = V_k,
/// dv_dt(k) = -sigma_k (U_k + (f(u))_k).
SpectralRhs rhs(const State& state, const GridSpec& grid, const HbqParams& params);

enum class Dealiasing { none, two_thirds };

/// Reusable evaluator of the right-hand side in physical space.  Caches the
/// symbol and owns FFT scratch space; not thread-safe, one per thread.
class HbqOperator {
 public:
  HbqOperator(const GridSpec& grid, const HbqParams& params,
              Dealiasing dealiasing = Dealiasing::none);

  const GridSpec& grid() const { return grid_; }
  const HbqParams& params() const { return params_; }
  std::span<const double> symbol() const { return sigma_; }

  /// dv = F^-1[-sigma (F[u] + F[f(u)])].  du is v itself and is not computed.
  void acceleration(std::span<const double> u, std::span<double> dv);

  /// Half spectrum (k = 0 .. N/2) of dv/dt.
  void acceleration_spectrum(std::span<const double> u, std::span<Complex> half);

 private:
  GridSpec grid_;
  HbqParams params_;
  Dealiasing dealiasing_;
  RealTransform transform_;
  std::vector<double> sigma_;  // indexed 0 .. N/2
  std::vector<double> nonlinear_;
  std::vector<Complex> u_hat_;
  std::vector<Complex> f_hat_;
};

}  // namespace hbq
