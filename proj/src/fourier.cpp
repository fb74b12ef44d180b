#include "pwlnet/fourier.hpp"

namespace pwlnet {

Complex FourierSeries::eval_complex(double theta) const {
  Complex acc = 0;
  for (int n = -n_max; n <= n_max; ++n) {
    acc += coeff(n) * std::exp(Complex(0.0, n * theta));
  }
  return acc;
}

double FourierSeries::deriv(double theta) const {
  Complex acc = 0;
  for (int n = -n_max; n <= n_max; ++n) {
    acc += Complex(0.0, n) * coeff(n) * std::exp(Complex(0.0, n * theta));
  }
  return acc.real();
}

FourierSeries FourierSeries::derivative() const {
  FourierSeries d(n_max);
  for (int n = -n_max; n <= n_max; ++n) {
    d.set_coeff(n, Complex(0.0, n) * coeff(n));
  }
  return d;
}

FourierSeries FourierSeries::reflected() const {
  FourierSeries r(n_max);
  for (int n = -n_max; n <= n_max; ++n) r.set_coeff(n, coeff(-n));
  return r;
}

double FourierSeries::max_conjugate_asymmetry() const {
  double worst = 0;
  for (int n = 1; n <= n_max; ++n) {
    worst = std::max(worst, std::abs(coeff(-n) - std::conj(coeff(n))));
  }
  worst = std::max(worst, std::abs(coeff(0).imag()));
  return worst;
}

void FourierSeries::enforce_conjugate_symmetry() {
  set_coeff(0, Complex(coeff(0).real(), 0.0));
  for (int n = 1; n <= n_max; ++n) {
    Complex avg = 0.5 * (coeff(n) + std::conj(coeff(-n)));
    set_coeff(n, avg);
    set_coeff(-n, std::conj(avg));
  }
}

FourierSeries convolve(const FourierSeries& a, const FourierSeries& b,
                       int n_max_out) {
  FourierSeries out(n_max_out);
  for (int n = -n_max_out; n <= n_max_out; ++n) {
    Complex acc = 0;
    for (int k = -a.n_max; k <= a.n_max; ++k) {
      acc += a.coeff(k) * b.coeff(n - k);
    }
    out.set_coeff(n, acc);
  }
  return out;
}

FourierSeries averaged_product(const FourierSeries& a, const FourierSeries& b) {
  // (2 pi)^{-1} int a(s) b(y+s) ds = sum_n a_n b_{-n} e^{-i n y}.
  const int nm = std::min(a.n_max, b.n_max);
  FourierSeries out(nm);
  for (int n = -nm; n <= nm; ++n) {
    out.set_coeff(-n, a.coeff(n) * b.coeff(-n));
  }
  return out;
}

Complex averaged_product_mean(const FourierSeries& a, const FourierSeries& b) {
  const int nm = std::min(a.n_max, b.n_max);
  Complex acc = 0;
  for (int n = -nm; n <= nm; ++n) acc += a.coeff(n) * b.coeff(-n);
  return acc;
}

}  // namespace pwlnet
