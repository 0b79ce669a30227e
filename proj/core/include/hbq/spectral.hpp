#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace hbq {

using Complex = std::complex<double>;

/// Real samples on the nodes of a GridSpec.
using RealField = std::vector<double>;

/// Uniform periodic grid on [-L, L) with N nodes and integer wavenumbers
/// -N/2 .. N/2-1.  The physical wavenumber of mode k is pi*k/L.
class GridSpec {
 public:
  GridSpec(double half_length, int size);

  double half_length() const { return half_length_; }
  int size() const { return size_; }
  double length() const { return 2.0 * half_length_; }
  double spacing() const { return 2.0 * half_length_ / size_; }

  double node(int j) const { return -half_length_ + spacing() * j; }
  std::vector<double> nodes() const;

  /// Wavenumbers in ascending order, -N/2 first.
  std::vector<int> wavenumbers() const;
  int min_wavenumber() const { return -size_ / 2; }
  int max_wavenumber() const { return size_ / 2 - 1; }

  /// pi*k/L
  double physical_wavenumber(int k) const;

  /// Samples f at every node.
  template <class F>
  RealField sample(F&& f) const {
    RealField out(static_cast<std::size_t>(size_));
    for (int j = 0; j < size_; ++j) out[static_cast<std::size_t>(j)] = f(node(j));
    return out;
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  double half_length_;
  int size_;
};

/// Throws InvalidArgument on odd N, N < 4 or L <= 0.
GridSpec make_grid(double half_length, int size);

/// N Fourier coefficients addressed by signed wavenumber k in [-N/2, N/2-1].
/// Storage is in FFT order (k >= 0 first, then negative k).
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(int size) : coeffs_(static_cast<std::size_t>(size)) {}

  int size() const { return static_cast<int>(coeffs_.size()); }

  Complex operator()(int k) const { return coeffs_[index(k)]; }
  Complex& operator()(int k) { return coeffs_[index(k)]; }

  std::span<const Complex> raw() const { return coeffs_; }
  std::span<Complex> raw() { return coeffs_; }

  /// Largest |coeff(-k) - conj(coeff(k))| over representable pairs.
  double symmetry_defect() const;

 private:
  std::size_t index(int k) const;

  std::vector<Complex> coeffs_;
};

/// coeff(k) = (1/N) sum_j f_j exp(-i k X_j), X_j = 2 pi j / N.
SpectralField forward_dft(std::span<const double> f);

/// f_j = sum_k coeff(k) exp(i k X_j).  Throws SymmetryViolation when the
/// imaginary residue exceeds 1e-10 relative to the field magnitude.
RealField inverse_dft(const SpectralField& coeffs);

/// d^order f / dx^order.  For odd orders the k = -N/2 mode is dropped.
RealField spectral_derivative(std::span<const double> f, const GridSpec& grid, int order);

/// Zero-mean periodic antiderivative.  Throws NonzeroMean unless
/// |mean(f)| <= 1e-10 * max(1, max|f|).  The k = -N/2 mode has no real
/// antiderivative on the grid and is dropped.
RealField spectral_antiderivative(std::span<const double> f, const GridSpec& grid);

double mean(std::span<const double> f);
double max_abs(std::span<const double> f);

/// Periodic trapezoid rule: (2L/N) * sum_j f_j.  Spectrally accurate for
/// smooth periodic integrands.
double integrate(std::span<const double> f, const GridSpec& grid);

/// Real-to-half-complex transform pair of fixed size backed by FFTW.
///
/// Holds N/2+1 unnormalized coefficients for k = 0 .. N/2; the forward
/// direction applies the 1/N factor so that half[k] == coeff(k).  Plans are
/// shared process-wide; each instance owns its scratch buffers, so one
/// instance per thread.
class RealTransform {
 public:
  explicit RealTransform(int size);
  RealTransform(const RealTransform&) = delete;
  RealTransform& operator=(const RealTransform&) = delete;
  RealTransform(RealTransform&&) noexcept;
  RealTransform& operator=(RealTransform&&) noexcept;
  ~RealTransform();

  int size() const { return size_; }
  int half_size() const { return size_ / 2 + 1; }

  void forward(std::span<const double> in, std::span<Complex> half);
  /// Ignores the imaginary parts of half[0] and half[N/2].
  void inverse(std::span<const Complex> half, std::span<double> out);

 private:
  int size_;
  void* forward_plan_;
  void* inverse_plan_;
  std::vector<double> real_scratch_;
  std::vector<Complex> complex_scratch_;
};

}  // namespace hbq
