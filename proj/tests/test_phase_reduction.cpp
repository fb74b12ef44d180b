#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pwlnet/phase_reduction.hpp"
#include "pwlnet/graphs.hpp"

#include <cmath>
#include <functional>
#include <random>

using namespace pwlnet;

namespace {

// Quadrature oracle for the interaction coefficients H_n = Z_n . G_{-n}:
// the Fourier integrals of Z^v and v are evaluated by 4096-panel composite
// Simpson quadrature split at the event times (both curves are only
// piecewise smooth), independent of the closed-form coefficient algebra.
Complex simpson_fourier(const std::function<double(double)>& f, double T,
                        int n, const std::vector<double>& breaks,
                        int total_panels = 4096) {
  const double omega = 2.0 * M_PI / T;
  std::vector<double> edges = breaks;
  edges.push_back(0.0);
  edges.push_back(T);
  std::sort(edges.begin(), edges.end());
  Complex acc = 0;
  for (size_t e = 0; e + 1 < edges.size(); ++e) {
    const double a = edges[e], b = edges[e + 1];
    if (b - a < 1e-12) continue;
    const int panels =
        std::max(4, static_cast<int>(std::lround(total_panels * (b - a) / T)));
    const double h = (b - a) / panels;
    const double nudge = 1e-9 * h;  // keep samples inside the smooth piece
    for (int p = 0; p < panels; ++p) {
      const double t0 = a + p * h;
      auto g = [&](double t) {
        t = std::min(std::max(t, a + nudge), b - nudge);
        return f(t) * std::exp(Complex(0, -n * omega * t));
      };
      acc += (h / 6.0) * (g(t0) + 4.0 * g(t0 + h / 2) + g(t0 + h));
    }
  }
  return acc / T;
}

std::vector<Complex> h_coeffs_quadrature(const PeriodicOrbit& orbit,
                                         const PiecewiseCurve& Z,
                                         const std::vector<int>& harmonics,
                                         int v_index = 0) {
  const double T = orbit.period;
  std::vector<double> breaks;
  for (const auto& ev : orbit.events) breaks.push_back(ev.time);
  std::vector<Complex> out;
  for (int n : harmonics) {
    const Complex zn = simpson_fourier(
        [&](double t) { return Z.value(t)(v_index); }, T, n, breaks);
    const Complex vmn = simpson_fourier(
        [&](double t) { return orbit.state(t)(v_index); }, T, -n, breaks);
    // Diffusive coupling: H_{-n} picks Z_n v_{-n}; the mean subtraction only
    // moves the n = 0 coefficient, handled by the caller comparing H(-n).
    out.push_back(zn * vmn);
  }
  return out;
}

}  // namespace

TEST_CASE("diffusive interaction function vanishes at zero lag") {
  for (const char* name : {"absolute", "pwl_ml"}) {
    PeriodicOrbit orbit = zoo_orbit(name);
    PiecewiseCurve Z = iprc(orbit);
    FourierSeries H = interaction_fn(orbit, Z, CouplingSpec::diffusive(), 32);
    INFO(std::string(name));
    CHECK(std::abs(H.eval(0.0)) < 1e-12);
    CHECK(H.max_conjugate_asymmetry() < 1e-12);
  }
}

TEST_CASE("interaction coefficients match the quadrature oracle") {
  const std::vector<int> harmonics{1, 2, 3, 5};
  for (const char* name : {"absolute", "mckean2"}) {
    PeriodicOrbit orbit = zoo_orbit(name);
    PiecewiseCurve Z = iprc(orbit);
    FourierSeries H = interaction_fn(orbit, Z, CouplingSpec::diffusive(), 16);
    auto oracle = h_coeffs_quadrature(orbit, Z, harmonics);
    for (size_t k = 0; k < harmonics.size(); ++k) {
      INFO(std::string(name), " n=", harmonics[k]);
      // H_{-n} = Z_n v_{-n} for n != 0 under diffusive coupling.
      CHECK(std::abs(H.coeff(-harmonics[k]) - oracle[k]) < 1e-6);
    }
  }
}

TEST_CASE("pwl_ml has H'(0) < 0; absolute and McKean have H'(0) > 0") {
  {
    PeriodicOrbit orbit = zoo_orbit("pwl_ml");
    FourierSeries H =
        interaction_fn(orbit, iprc(orbit), CouplingSpec::diffusive(), 64);
    CHECK(H.deriv(0.0) < 0);
  }
  for (const char* name : {"absolute", "mckean2"}) {
    PeriodicOrbit orbit = zoo_orbit(name);
    FourierSeries H =
        interaction_fn(orbit, iprc(orbit), CouplingSpec::diffusive(), 64);
    INFO(std::string(name));
    CHECK(H.deriv(0.0) > 0);
  }
}

TEST_CASE("synaptic H0 equals Z0/T and the alpha to infinity limit") {
  PeriodicOrbit orbit = zoo_orbit("mckean3");
  PiecewiseCurve Z = iprc(orbit);
  const double T = orbit.period;
  FourierSeries H = synaptic_interaction_fn(orbit, Z, 1000.0, 32);
  CHECK(std::abs(H.coeff(0) - Z.fourier_coefficient(0)(0) / T) < 1e-12);

  FourierSeries Hbig = synaptic_interaction_fn(orbit, Z, 1e7, 16);
  for (int n = -16; n <= 16; ++n) {
    const Complex limit = Z.fourier_coefficient(-n)(0) / T;
    CHECK(std::abs(Hbig.coeff(n) - limit) < 2e-5 * std::max(1.0, std::abs(limit)));
  }
}

TEST_CASE("synaptic McKean interaction has two large dead zones") {
  PeriodicOrbit orbit = zoo_orbit("mckean3");
  PiecewiseCurve Z = iprc(orbit);
  const double t_spike = spike_phase_origin(orbit, 0.6);
  FourierSeries H = synaptic_interaction_fn(orbit, Z, 1000.0, 160, t_spike);

  double hmax = 0;
  for (int s = 0; s < 2048; ++s) {
    hmax = std::max(hmax, std::abs(H.eval(2 * M_PI * s / 2048.0)));
  }
  DeadZones dz = dead_zones(H, 3e-2 * hmax, 4096);
  std::vector<std::pair<double, double>> large;
  for (auto [a, b] : dz.intervals) {
    const double len = b > a ? b - a : 2 * M_PI - a + b;
    if (len > 0.5) large.push_back({a, b});
  }
  REQUIRE(large.size() == 2);
  // Approximate reflection symmetry: the two zones mirror each other about
  // theta = 0 up to a fraction of their (large) width.
  auto mid = [](std::pair<double, double> iv) {
    double len = iv.second > iv.first ? iv.second - iv.first
                                      : 2 * M_PI - iv.first + iv.second;
    return wrap_two_pi(iv.first + 0.5 * len);
  };
  const double m0 = mid(large[0]), m1 = mid(large[1]);
  double d = std::abs(wrap_two_pi(-m0) - m1);
  d = std::min(d, 2 * M_PI - d);
  CHECK(d < 0.35);

  // Slower synapses shrink the dead zones.
  FourierSeries H10 = synaptic_interaction_fn(orbit, Z, 10.0, 160, t_spike);
  double hmax10 = 0;
  for (int s = 0; s < 2048; ++s) {
    hmax10 = std::max(hmax10, std::abs(H10.eval(2 * M_PI * s / 2048.0)));
  }
  DeadZones dz10 = dead_zones(H10, 3e-2 * hmax10, 4096);
  auto total = [](const DeadZones& d) {
    double acc = 0;
    for (auto [a, b] : d.intervals) {
      acc += b > a ? b - a : 2 * M_PI - a + b;
    }
    return acc;
  };
  CHECK(total(dz10) < total(dz));
}

TEST_CASE("dead zones: isolated zeros are not dead zones; everything below "
          "a large threshold is one interval") {
  FourierSeries sine(2);
  sine.set_coeff(1, Complex(0, -0.5));
  sine.set_coeff(-1, Complex(0, 0.5));  // sin(theta)
  DeadZones none = dead_zones(sine, 0.0, 1024);
  CHECK(none.intervals.empty());
  DeadZones all = dead_zones(sine, 1.0, 1024);
  REQUIRE(all.intervals.size() == 1);
  CHECK(all.intervals[0].first == doctest::Approx(0.0));
  CHECK(all.intervals[0].second == doctest::Approx(2 * M_PI));
}

TEST_CASE("phase-lock Jacobian at synchrony is -sigma H'(0) L") {
  PeriodicOrbit orbit = zoo_orbit("absolute");
  FourierSeries H =
      interaction_fn(orbit, iprc(orbit), CouplingSpec::diffusive(), 32);
  Network net = make_network("star", {{"N", 5}, {"K", 4}});
  const double sigma = 0.3;
  Mat J = phase_lock_jacobian(H, Vec::Zero(5), net.w, sigma);
  Mat expect = -sigma * H.deriv(0.0) * net.laplacian();
  CHECK((J - expect).lpNorm<Eigen::Infinity>() < 1e-12);
  CHECK((J * Vec::Ones(5)).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("global coupling synchrony eigenvalues are 0 and -sigma H'(0)") {
  FourierSeries H = biharmonic(0.0, 0.3);
  Network net = make_network("global", {{"N", 6}});
  Mat J = phase_lock_jacobian(H, Vec::Zero(6), net.w, 0.7);
  auto pairs = eig(J);
  int zeros = 0, deg = 0;
  for (const auto& p : pairs) {
    if (std::abs(p.value) < 1e-12) ++zeros;
    if (std::abs(p.value - Complex(-0.7 * H.deriv(0.0), 0)) < 1e-12) ++deg;
  }
  CHECK(zeros == 1);
  CHECK(deg == 5);
}

TEST_CASE("splay-state eigenvalues approach -2 pi i n sigma H_{-n}") {
  PeriodicOrbit orbit = zoo_orbit("pwl_ml");
  FourierSeries H =
      interaction_fn(orbit, iprc(orbit), CouplingSpec::diffusive(), 24);
  const int N = 64;
  Network net = make_network("global", {{"N", N}});
  Vec splay(N);
  for (int i = 0; i < N; ++i) splay(i) = 2.0 * M_PI * i / N;
  const double sigma = 0.2;
  auto pairs = eig(phase_lock_jacobian(H, splay, net.w, sigma));
  // In the radian phase convention the splay eigenvalues are
  // -i n sigma H_{-n}; the reference's 2 pi factor belongs to its
  // unit-interval convention.
  for (int n = 1; n <= 4; ++n) {
    const Complex predicted = -Complex(0, n) * sigma * H.coeff(-n);
    double best = 1e300;
    for (const auto& p : pairs) best = std::min(best, std::abs(p.value - predicted));
    INFO("harmonic ", n);
    CHECK(best <= 0.05 * std::max(0.05, std::abs(predicted)));
  }
}

TEST_CASE("synchrony criterion sign matches -sign(sigma H'(0)) on random "
          "connected graphs") {
  FourierSeries H = biharmonic(0.3, 0.1);
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> uni(0.2, 1.0);
  for (int trial = 0; trial < 6; ++trial) {
    const int N = 6;
    Mat w = Mat::Zero(N, N);
    for (int i = 0; i + 1 < N; ++i) {
      w(i, i + 1) = w(i + 1, i) = uni(rng);  // path backbone keeps it connected
    }
    for (int i = 0; i < N; ++i) {
      for (int j = i + 2; j < N; ++j) {
        if (uni(rng) > 0.6) w(i, j) = w(j, i) = uni(rng);
      }
    }
    for (double sigma : {0.4, -0.4}) {
      auto pairs = eig(phase_lock_jacobian(H, Vec::Zero(N), w, sigma));
      double nonzero_max = -1e300;
      for (const auto& p : pairs) {
        if (std::abs(p.value) > 1e-10) {
          nonzero_max = std::max(nonzero_max, p.value.real());
        }
      }
      CHECK(nonzero_max * (-sigma * H.deriv(0.0)) > 0);
    }
  }
}

TEST_CASE("biharmonic series and critical coupling") {
  FourierSeries H0 = biharmonic(0.0, 0.0);
  CHECK(H0.eval(0.5) == doctest::Approx(-std::sin(0.5)).epsilon(1e-14));
  CHECK(H0.deriv(0.0) == doctest::Approx(-1.0).epsilon(1e-14));

  const double a = 0.1;
  CHECK(biharmonic_rc(a) == doctest::Approx(0.49750).epsilon(1e-4));
  FourierSeries Hc = biharmonic(a, biharmonic_rc(a));
  CHECK(std::abs(Hc.deriv(0.0)) < 1e-14);

  // The reference regime r = r_c - 1/2 destabilizes synchrony.
  FourierSeries Hu = biharmonic(a, biharmonic_rc(a) - 0.5);
  CHECK(Hu.deriv(0.0) < 0);
}

TEST_CASE("interaction_fn rejects silly harmonic counts") {
  PeriodicOrbit orbit = zoo_orbit("absolute");
  PiecewiseCurve Z = iprc(orbit);
  CHECK_THROWS_AS(interaction_fn(orbit, Z, CouplingSpec::diffusive(), 0),
                  ValidationError);
}
