#include "pwlnet/phase_reduction.hpp"

#include <algorithm>
#include <cmath>

namespace pwlnet {

FourierSeries scalar_series(const PiecewiseCurve& curve, int component,
                            int n_max, double time_origin) {
  const double omega = 2.0 * M_PI / curve.period;
  FourierSeries out(n_max);
  for (int n = -n_max; n <= n_max; ++n) {
    const Complex cn = curve.fourier_coefficient(n)(component);
    out.set_coeff(n, cn * std::exp(Complex(0.0, n * omega * time_origin)));
  }
  return out;
}

FourierSeries interaction_fn(const PeriodicOrbit& orbit,
                             const PiecewiseCurve& Z,
                             const CouplingSpec& coupling, int n_max) {
  if (n_max < 1) throw ValidationError("interaction_fn: n_max must be >= 1");
  if (coupling.kind == CouplingKind::Biharmonic) {
    return biharmonic(coupling.a, coupling.r);
  }
  if (coupling.kind == CouplingKind::SynapticAlpha) {
    return synaptic_interaction_fn(orbit, Z, coupling.alpha, n_max);
  }

  const int m = orbit.system->dimension;
  Mat M = Mat::Zero(m, m);
  bool subtract_self = true;
  if (coupling.kind == CouplingKind::LinearVoltageDiffusive) {
    M(coupling.v_index, coupling.v_index) = 1.0;
  } else {
    M = coupling.H;
    subtract_self = coupling.laplacian_form;
    if (M.rows() != m || M.cols() != m) {
      throw DimensionError("interaction_fn: feedthrough must be m x m");
    }
  }

  PiecewiseCurve gamma = orbit_curve(orbit);
  FourierSeries H(n_max);
  Complex mean_term = 0;
  for (int n = -n_max; n <= n_max; ++n) {
    const VecC zn = Z.fourier_coefficient(n);
    const VecC xn = gamma.fourier_coefficient(-n).head(m);
    const Complex a = zn.transpose() * M.cast<Complex>() * xn;
    H.add_coeff(-n, a);
    mean_term += a;
  }
  if (subtract_self) H.add_coeff(0, -mean_term);
  H.enforce_conjugate_symmetry();
  return H;
}

FourierSeries synaptic_interaction_fn(const PeriodicOrbit& orbit,
                                      const PiecewiseCurve& Z, double alpha,
                                      int n_max, double spike_time) {
  if (alpha <= 0) throw ValidationError("synaptic_interaction_fn: alpha > 0");
  const double T = orbit.period;
  const double omega = 2.0 * M_PI / T;
  FourierSeries H(n_max);
  for (int n = -n_max; n <= n_max; ++n) {
    const Complex z_minus_n =
        Z.fourier_coefficient(-n)(0) *
        std::exp(Complex(0.0, -n * omega * spike_time));
    const Complex denom =
        Complex(alpha, 0.0) + Complex(0.0, 2.0 * M_PI * n / T);
    H.set_coeff(n, alpha * alpha * z_minus_n / (T * denom * denom));
  }
  H.enforce_conjugate_symmetry();
  return H;
}

double spike_phase_origin(const PeriodicOrbit& orbit, double level,
                          int v_index) {
  const int samples = 4096;
  double prev_t = 0.0;
  double prev_v = orbit.state(0.0)(v_index) - level;
  for (int s = 1; s <= samples; ++s) {
    const double t = orbit.period * s / samples;
    const double v = orbit.state(t)(v_index) - level;
    if (prev_v < 0 && v >= 0) {
      double lo = prev_t, hi = t;
      for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (orbit.state(mid)(v_index) - level < 0) lo = mid;
        else hi = mid;
      }
      return 0.5 * (lo + hi);
    }
    prev_t = t;
    prev_v = v;
  }
  throw NumericError("spike_phase_origin: no upward crossing of the level");
}

Mat phase_lock_jacobian(const FourierSeries& H, const Vec& phases, const Mat& w,
                        double sigma) {
  const int N = static_cast<int>(phases.size());
  if (w.rows() != N || w.cols() != N) {
    throw DimensionError("phase_lock_jacobian: adjacency size mismatch");
  }
  Mat jac = Mat::Zero(N, N);
  for (int i = 0; i < N; ++i) {
    double diag = 0;
    for (int j = 0; j < N; ++j) {
      const double hp = H.deriv(phases(j) - phases(i));
      if (j != i) jac(i, j) = sigma * hp * w(i, j);
      diag += hp * w(i, j);
    }
    jac(i, i) = sigma * (H.deriv(0.0) * w(i, i)) - sigma * diag;
  }
  return jac;
}

DeadZones dead_zones(const FourierSeries& H, double xi, int resolution) {
  if (xi < 0) throw ValidationError("dead_zones: xi must be nonnegative");
  if (resolution < 256) {
    throw ValidationError("dead_zones: resolution must be at least 256");
  }
  const double two_pi = 2.0 * M_PI;
  std::vector<bool> below(static_cast<size_t>(resolution));
  bool all_below = true;
  for (int s = 0; s < resolution; ++s) {
    below[static_cast<size_t>(s)] =
        std::abs(H.eval(two_pi * s / resolution)) <= xi;
    all_below = all_below && below[static_cast<size_t>(s)];
  }
  DeadZones dz;
  if (all_below) {
    dz.intervals.push_back({0.0, two_pi});
    dz.symmetric = true;
    return dz;
  }

  auto refine = [&](double inside, double outside) {
    for (int it = 0; it < 40 && std::abs(outside - inside) > 1e-6; ++it) {
      const double mid = 0.5 * (inside + outside);
      if (std::abs(H.eval(mid)) <= xi) inside = mid;
      else outside = mid;
    }
    return 0.5 * (inside + outside);
  };

  // Maximal runs of below-threshold samples, with wrap-around.
  std::vector<std::pair<int, int>> runs;  // [first, last] sample indices
  int s = 0;
  while (s < resolution) {
    if (!below[static_cast<size_t>(s)]) {
      ++s;
      continue;
    }
    int e = s;
    while (e + 1 < resolution && below[static_cast<size_t>(e) + 1]) ++e;
    runs.push_back({s, e});
    s = e + 1;
  }
  if (runs.size() >= 2 && runs.front().first == 0 &&
      runs.back().second == resolution - 1) {
    runs.front().first = runs.back().first - resolution;  // merged via wrap
    runs.pop_back();
  }
  for (auto [first, last] : runs) {
    if (last == first) continue;  // isolated zero, not an open interval
    const double a_in = two_pi * first / resolution;
    const double a_out = two_pi * (first - 1) / resolution;
    const double b_in = two_pi * last / resolution;
    const double b_out = two_pi * (last + 1) / resolution;
    double a = refine(a_in, a_out);
    double b = refine(b_in, b_out);
    dz.intervals.push_back({wrap_two_pi(a), wrap_two_pi(b)});
  }

  // Dead-zone symmetry: the interval set is invariant under theta -> -theta.
  const double tol = 4.0 * two_pi / resolution;
  auto wrapped_close = [&](double x, double y) {
    double d = std::abs(wrap_two_pi(x) - wrap_two_pi(y));
    return std::min(d, two_pi - d) <= tol;
  };
  dz.symmetric = !dz.intervals.empty();
  for (const auto& [a, b] : dz.intervals) {
    bool found = false;
    for (const auto& [c, d] : dz.intervals) {
      if (wrapped_close(-b, c) && wrapped_close(-a, d)) {
        found = true;
        break;
      }
    }
    dz.symmetric = dz.symmetric && found;
  }
  return dz;
}

FourierSeries biharmonic(double a, double r) {
  FourierSeries H(2);
  H.set_coeff(1, Complex(0.0, 0.5) * std::exp(Complex(0.0, -a)));
  H.set_coeff(-1, Complex(0.0, -0.5) * std::exp(Complex(0.0, a)));
  H.set_coeff(2, Complex(0.0, -0.5 * r));
  H.set_coeff(-2, Complex(0.0, 0.5 * r));
  return H;
}

double biharmonic_rc(double a) { return std::cos(a) / 2.0; }

}  // namespace pwlnet
