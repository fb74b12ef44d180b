#pragma once

// Complex Fourier series on [0, 2*pi), the common currency of the phase
// and phase-amplitude reductions.

#include "pwlnet/numerics.hpp"

namespace pwlnet {

struct FourierSeries {
  int n_max = 0;
  VecC coeffs;  // entry n + n_max holds H_n, n in [-n_max, n_max]

  FourierSeries() = default;
  explicit FourierSeries(int nmax)
      : n_max(nmax), coeffs(VecC::Zero(2 * nmax + 1)) {}

  Complex coeff(int n) const {
    if (std::abs(n) > n_max) return {0.0, 0.0};
    return coeffs(n + n_max);
  }
  void set_coeff(int n, Complex c) { coeffs(n + n_max) = c; }
  void add_coeff(int n, Complex c) {
    if (std::abs(n) <= n_max) coeffs(n + n_max) += c;
  }

  Complex eval_complex(double theta) const;
  double eval(double theta) const { return eval_complex(theta).real(); }
  double deriv(double theta) const;

  /// Coefficient-wise derivative: H'_n = i n H_n.
  FourierSeries derivative() const;
  /// H(-theta) as a series: coefficients swapped n <-> -n.
  FourierSeries reflected() const;

  double max_conjugate_asymmetry() const;
  void enforce_conjugate_symmetry();
};

/// Coefficients of the pointwise product, truncated to n_max_out.
FourierSeries convolve(const FourierSeries& a, const FourierSeries& b,
                       int n_max_out);

/// (2*pi)^{-1} * integral a(s) b(y+s) ds as a series in y.
FourierSeries averaged_product(const FourierSeries& a, const FourierSeries& b);

/// Plain mean of the pointwise product (the y-independent average).
Complex averaged_product_mean(const FourierSeries& a, const FourierSeries& b);

}  // namespace pwlnet
