#include "hbq/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "hbq/errors.hpp"

namespace hbq {

namespace {

// FFTW's planner is not reentrant; plan execution through the new-array
// interface is.  Plans live for the whole process.
struct PlanSet {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  fftw_plan c2c_backward = nullptr;
};

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

const PlanSet& plans_for(int n) {
  static std::map<int, PlanSet> cache;
  std::lock_guard lock(planner_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  double* real = fftw_alloc_real(static_cast<std::size_t>(n));
  fftw_complex* half = fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1));
  fftw_complex* full_in = fftw_alloc_complex(static_cast<std::size_t>(n));
  fftw_complex* full_out = fftw_alloc_complex(static_cast<std::size_t>(n));

  PlanSet set;
  set.r2c = fftw_plan_dft_r2c_1d(n, real, half, flags);
  set.c2r = fftw_plan_dft_c2r_1d(n, half, real, flags);
  set.c2c_backward = fftw_plan_dft_1d(n, full_in, full_out, FFTW_BACKWARD, flags);

  fftw_free(real);
  fftw_free(half);
  fftw_free(full_in);
  fftw_free(full_out);
  return cache.emplace(n, set).first->second;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

GridSpec::GridSpec(double half_length, int size) : half_length_(half_length), size_(size) {
  if (!(half_length > 0.0) || !std::isfinite(half_length))
    throw InvalidArgument("grid half-length must be positive and finite");
  if (size < 4 || size % 2 != 0)
    throw InvalidArgument("grid size must be even and at least 4, got " + std::to_string(size));
}

std::vector<double> GridSpec::nodes() const {
  std::vector<double> x(static_cast<std::size_t>(size_));
  for (int j = 0; j < size_; ++j) x[static_cast<std::size_t>(j)] = node(j);
  return x;
}

std::vector<int> GridSpec::wavenumbers() const {
  std::vector<int> k(static_cast<std::size_t>(size_));
  for (int i = 0; i < size_; ++i) k[static_cast<std::size_t>(i)] = min_wavenumber() + i;
  return k;
}

double GridSpec::physical_wavenumber(int k) const {
  return std::numbers::pi * k / half_length_;
}

GridSpec make_grid(double half_length, int size) { return GridSpec(half_length, size); }

std::size_t SpectralField::index(int k) const {
  const int n = size();
  if (k < -n / 2 || k > n / 2 - 1)
    throw InvalidArgument("wavenumber " + std::to_string(k) + " outside [-N/2, N/2-1]");
  return static_cast<std::size_t>(k >= 0 ? k : k + n);
}

double SpectralField::symmetry_defect() const {
  const int n = size();
  double defect = 0.0;
  defect = std::max(defect, std::abs((*this)(0).imag()));
  for (int k = 1; k < n / 2; ++k)
    defect = std::max(defect, std::abs((*this)(-k) - std::conj((*this)(k))));
  // k = -N/2 pairs with +N/2, which is aliased onto itself.
  defect = std::max(defect, std::abs((*this)(-n / 2).imag()));
  return defect;
}

RealTransform::RealTransform(int size)
    : size_(size),
      forward_plan_(nullptr),
      inverse_plan_(nullptr),
      real_scratch_(static_cast<std::size_t>(size)),
      complex_scratch_(static_cast<std::size_t>(size / 2 + 1)) {
  if (size < 2 || size % 2 != 0) throw InvalidArgument("transform size must be even");
  const PlanSet& set = plans_for(size);
  forward_plan_ = set.r2c;
  inverse_plan_ = set.c2r;
}

RealTransform::RealTransform(RealTransform&&) noexcept = default;
RealTransform& RealTransform::operator=(RealTransform&&) noexcept = default;
RealTransform::~RealTransform() = default;

void RealTransform::forward(std::span<const double> in, std::span<Complex> half) {
  std::copy(in.begin(), in.end(), real_scratch_.begin());
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), real_scratch_.data(),
                       as_fftw(half.data()));
  const double scale = 1.0 / size_;
  for (auto& c : half) c *= scale;
}

void RealTransform::inverse(std::span<const Complex> half, std::span<double> out) {
  std::copy(half.begin(), half.end(), complex_scratch_.begin());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_), as_fftw(complex_scratch_.data()),
                       out.data());
}

SpectralField forward_dft(std::span<const double> f) {
  const int n = static_cast<int>(f.size());
  RealTransform transform(n);
  std::vector<Complex> half(static_cast<std::size_t>(transform.half_size()));
  transform.forward(f, half);

  SpectralField out(n);
  for (int k = 0; k < n / 2; ++k) out(k) = half[static_cast<std::size_t>(k)];
  for (int k = 1; k < n / 2; ++k) out(-k) = std::conj(half[static_cast<std::size_t>(k)]);
  out(-n / 2) = half[static_cast<std::size_t>(n / 2)];
  return out;
}

RealField inverse_dft(const SpectralField& coeffs) {
  const int n = coeffs.size();
  const PlanSet& set = plans_for(n);

  std::vector<Complex> in(coeffs.raw().begin(), coeffs.raw().end());
  std::vector<Complex> out(static_cast<std::size_t>(n));
  fftw_execute_dft(set.c2c_backward, as_fftw(in.data()), as_fftw(out.data()));

  double scale = 0.0;
  double residue = 0.0;
  for (const auto& z : out) {
    scale = std::max(scale, std::abs(z));
    residue = std::max(residue, std::abs(z.imag()));
  }
  if (residue > 1e-10 * scale)
    throw SymmetryViolation("inverse DFT has imaginary residue " + std::to_string(residue) +
                            " relative to magnitude " + std::to_string(scale));

  RealField f(static_cast<std::size_t>(n));
  std::transform(out.begin(), out.end(), f.begin(), [](Complex z) { return z.real(); });
  return f;
}

RealField spectral_derivative(std::span<const double> f, const GridSpec& grid, int order) {
  if (order < 1) throw InvalidArgument("derivative order must be at least 1");
  const int n = grid.size();
  if (static_cast<int>(f.size()) != n) throw InvalidArgument("field does not match grid");

  RealTransform transform(n);
  std::vector<Complex> half(static_cast<std::size_t>(transform.half_size()));
  transform.forward(f, half);

  for (int k = 0; k <= n / 2; ++k) {
    // Index N/2 holds the k = -N/2 mode.
    const int wavenumber = (k == n / 2) ? -n / 2 : k;
    const Complex ik(0.0, grid.physical_wavenumber(wavenumber));
    half[static_cast<std::size_t>(k)] *= std::pow(ik, order);
  }
  if (order % 2 != 0) half[static_cast<std::size_t>(n / 2)] = 0.0;

  RealField out(static_cast<std::size_t>(n));
  transform.inverse(half, out);
  return out;
}

RealField spectral_antiderivative(std::span<const double> f, const GridSpec& grid) {
  const int n = grid.size();
  if (static_cast<int>(f.size()) != n) throw InvalidArgument("field does not match grid");
  const double m = mean(f);
  if (std::abs(m) > 1e-10 * std::max(1.0, max_abs(f)))
    throw NonzeroMean("field mean " + std::to_string(m) + " admits no periodic antiderivative");

  RealTransform transform(n);
  std::vector<Complex> half(static_cast<std::size_t>(transform.half_size()));
  transform.forward(f, half);

  half[0] = 0.0;
  for (int k = 1; k < n / 2; ++k)
    half[static_cast<std::size_t>(k)] /= Complex(0.0, grid.physical_wavenumber(k));
  half[static_cast<std::size_t>(n / 2)] = 0.0;

  RealField out(static_cast<std::size_t>(n));
  transform.inverse(half, out);
  return out;
}

double mean(std::span<const double> f) {
  if (f.empty()) return 0.0;
  double s = 0.0;
  for (double x : f) s += x;
  return s / static_cast<double>(f.size());
}

double max_abs(std::span<const double> f) {
  double m = 0.0;
  for (double x : f) {
    const double a = std::abs(x);
    if (a > m || std::isnan(a)) m = a;
  }
  return m;
}

double integrate(std::span<const double> f, const GridSpec& grid) {
  double s = 0.0;
  for (double x : f) s += x;
  return grid.spacing() * s;
}

}  // namespace hbq
