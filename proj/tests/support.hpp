#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "hbq/spectral.hpp"

namespace hbq::test {

// O(N^2) DFT straight from the definition, independent of FFTW.
inline std::vector<std::complex<double>> direct_dft(const std::vector<double>& f, int k_lo,
                                                    int k_hi) {
  const int n = static_cast<int>(f.size());
  std::vector<std::complex<double>> out;
  for (int k = k_lo; k <= k_hi; ++k) {
    std::complex<double> s = 0.0;
    for (int j = 0; j < n; ++j) {
      const double X = 2.0 * std::numbers::pi * j / n;
      s += f[static_cast<std::size_t>(j)] * std::polar(1.0, -k * X);
    }
    out.push_back(s / static_cast<double>(n));
  }
  return out;
}

inline double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Deterministic pseudo-random field in [-1, 1].
inline std::vector<double> noise(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> f(static_cast<std::size_t>(n));
  for (auto& x : f) x = dist(gen);
  return f;
}

}  // namespace hbq::test
