// Acceptance suite: one check per release criterion, each printed as a
// PASS/FAIL line with its runtime. The process exit code is the number of
// failed criteria.

#include "pwlnet/cluster.hpp"
#include "pwlnet/msf.hpp"
#include "pwlnet/phase_amplitude.hpp"
#include "pwlnet/phase_reduction.hpp"
#include "pwlnet/simulate.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace pwlnet;

namespace {

int failures = 0;

void criterion(int id, const std::string& label,
               const std::function<bool(std::string&)>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  std::string detail;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - t0)
          .count() /
      1000.0;
  std::printf("%s criterion %2d: %s [%.1fs]%s%s\n", ok ? "PASS" : "FAIL", id,
              label.c_str(), secs, detail.empty() ? "" : " -- ",
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

Mat voltage_j() {
  Mat J = Mat::Zero(2, 2);
  J(0, 0) = 1.0;
  return J;
}

// Asymptotic phase by long simulation (see test_response.cpp for the
// derivation of the convention).
double measured_phase(const PeriodicOrbit& orbit, const Vec& x) {
  const double kappa = floquet_exponent_planar(orbit);
  const int periods = std::max(
      5,
      static_cast<int>(std::ceil(-9.0 * std::log(10.0) / (kappa * orbit.period))) +
          2);
  SimOptions opts;
  opts.t_max = periods * orbit.period;
  opts.dt_out = orbit.period / 128.0;
  Trajectory traj = simulate_single(orbit.system, x, opts);
  const auto& anchor = orbit.events.back();
  double t_last = -1;
  for (const auto& ev : traj.events) {
    if (ev.manifold == anchor.manifold && ev.direction == anchor.direction) {
      t_last = ev.time;
    }
  }
  if (t_last < 0) throw NumericError("acceptance: phase measurement failed");
  const double omega = 2.0 * M_PI / orbit.period;
  return wrap_two_pi(-omega * std::fmod(t_last, orbit.period));
}

double phase_diff(double a, double b) {
  double d = a - b;
  while (d > M_PI) d -= 2.0 * M_PI;
  while (d < -M_PI) d += 2.0 * M_PI;
  return d;
}

}  // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IONBF, 0);

  criterion(1, "absolute-model Floquet exponent -0.1534 by both routes",
            [](std::string& detail) {
              PeriodicOrbit orbit = zoo_orbit("absolute");
              const double kf = floquet_exponent_planar(orbit);
              const double km =
                  std::log(std::abs(orbit.floquet.nontrivial_multiplier())) /
                  orbit.period;
              char buf[128];
              std::snprintf(buf, sizeof(buf), "kappa=%.6f routes differ by %.2e",
                            kf, std::abs(kf - km));
              detail = buf;
              return std::abs(kf + 0.1534) <= 1e-3 &&
                     std::abs(km + 0.1534) <= 1e-3 && std::abs(kf - km) <= 1e-8;
            });

  criterion(2, "saltation identity S x'- = x'+ to 1e-10 on every zoo orbit",
            [](std::string& detail) {
              double worst = 0;
              for (const char* name :
                   {"absolute", "mckean2", "homoclinic", "planar_if", "pwl_ml",
                    "mckean3", "wilson_cowan", "franklin", "cow"}) {
                PeriodicOrbit orbit = zoo_orbit(name);
                for (const auto& ev : orbit.events) {
                  worst = std::max(
                      worst, (ev.saltation * ev.pre_velocity - ev.post_velocity)
                                 .lpNorm<Eigen::Infinity>());
                }
              }
              char buf[64];
              std::snprintf(buf, sizeof(buf), "worst residual %.2e", worst);
              detail = buf;
              return worst <= 1e-10;
            });

  criterion(
      3, "iPRC within 2% of the direct-perturbation oracle; Z.f = omega",
      [](std::string& detail) {
        double worst_rel = 0, worst_norm = 0;
        for (const char* name :
             {"absolute", "mckean2", "homoclinic", "pwl_ml"}) {
          PeriodicOrbit orbit = zoo_orbit(name);
          PiecewiseCurve Z = iprc(orbit);
          const double omega = 2.0 * M_PI / orbit.period;
          double zmax = 0;
          for (int s = 0; s < 64; ++s) {
            const double t = orbit.period * (s + 0.5) / 64.0;
            worst_norm = std::max(
                worst_norm, std::abs(Z.value(t).dot(orbit.velocity(t)) - omega));
            zmax = std::max(zmax, Z.value(t).lpNorm<Eigen::Infinity>());
          }
          for (double frac : {0.11, 0.23, 0.37, 0.52, 0.69, 0.83, 0.94}) {
            const double t0 = frac * orbit.period;
            const Vec base = orbit.state(t0);
            const double th0 = omega * t0;
            for (int c = 0; c < 2; ++c) {
              const double delta = 1e-6;
              Vec dp = base, dm = base;
              dp(c) += delta;
              dm(c) -= delta;
              const double oracle =
                  (phase_diff(measured_phase(orbit, dp), th0) -
                   phase_diff(measured_phase(orbit, dm), th0)) /
                  (2.0 * delta);
              worst_rel = std::max(
                  worst_rel, std::abs(Z.value(t0)(c) - oracle) / zmax);
            }
          }
        }
        char buf[96];
        std::snprintf(buf, sizeof(buf),
                      "worst oracle error %.2f%% of sup|Z|; |Z.f-w| %.1e",
                      100 * worst_rel, worst_norm);
        detail = buf;
        return worst_rel <= 0.02 && worst_norm <= 1e-9;
      });

  criterion(4, "phase-reduction synchrony signs (pwl_ml vs mckean2/absolute)",
            [](std::string& detail) {
              double hp_ml, hp_mk, hp_abs;
              {
                PeriodicOrbit o = zoo_orbit("pwl_ml");
                hp_ml = interaction_fn(o, iprc(o), CouplingSpec::diffusive(), 64)
                            .deriv(0.0);
              }
              {
                PeriodicOrbit o = zoo_orbit("mckean2");
                hp_mk = interaction_fn(o, iprc(o), CouplingSpec::diffusive(), 64)
                            .deriv(0.0);
              }
              {
                PeriodicOrbit o = zoo_orbit("absolute");
                hp_abs = interaction_fn(o, iprc(o), CouplingSpec::diffusive(), 64)
                             .deriv(0.0);
              }
              char buf[96];
              std::snprintf(buf, sizeof(buf),
                            "H'(0): pwl_ml %.4f, mckean2 %.4f, absolute %.4f",
                            hp_ml, hp_mk, hp_abs);
              detail = buf;
              return hp_ml < 0 && hp_mk > 0 && hp_abs > 0;
            });

  criterion(
      5, "phase-amplitude restabilization 0.2071 and the no-stable window",
      [](std::string& detail) {
        PeriodicOrbit orbit = zoo_orbit("pwl_ml");
        PASet pa = pa_interactions(orbit, response_set(orbit), 64);
        const double sc = sync_restabilization_sigma(pa, 0.05, 0.4);
        const double step = 0.005;
        PaScan scan = locked_state_scan(pa, 0.01, 0.30, 59, 32);
        double win_a = -1, win_b = -1;
        for (auto [a, b] : scan.no_stable_windows) {
          if (b - a > 0.01) {
            win_a = a;
            win_b = b;
          }
        }
        if (win_a < 0) {
          detail = "no window found";
          return false;
        }
        // Bisect the true edges inside the bracketing grid cells.
        auto has_stable = [&](double sigma) {
          for (const auto& fp : fixed_points_at(pa, sigma, 32)) {
            if (fp.type == "stable") return true;
          }
          return false;
        };
        double lo = win_a - step, hi = win_a;
        for (int it = 0; it < 12; ++it) {
          const double mid = 0.5 * (lo + hi);
          (has_stable(mid) ? lo : hi) = mid;
        }
        win_a = 0.5 * (lo + hi);
        lo = win_b - step;
        hi = win_b;
        for (int it = 0; it < 12; ++it) {
          const double mid = 0.5 * (lo + hi);
          (has_stable(mid) ? hi : lo) = mid;
        }
        win_b = 0.5 * (lo + hi);
        char buf[96];
        std::snprintf(buf, sizeof(buf), "sigma_c=%.4f window [%.4f, %.4f]", sc,
                      win_a, win_b);
        detail = buf;
        return std::abs(sc - 0.2071) <= 0.003 &&
               std::abs(win_a - 0.16) <= 0.0201 &&
               std::abs(win_b - 0.19) <= 0.0201;
      });

  criterion(
      6, "MSF: pwl_ml crossing 0.272; homoclinic windows to 2%",
      [](std::string& detail) {
        PeriodicOrbit ml = zoo_orbit("pwl_ml");
        auto z_ml = msf_real_axis_zeros(ml, voltage_j(), 0.05, 1.0, 400);
        const double sc = z_ml.empty() ? -1 : z_ml.front() / 2.0;

        PeriodicOrbit hc = zoo_orbit("homoclinic");
        auto z1 = msf_real_axis_zeros(hc, voltage_j(), 0.05, 0.2, 600);
        auto z2 = msf_real_axis_zeros(hc, voltage_j(), 1.0, 5.0, 400);
        char buf[160];
        if (z1.size() < 2 || z2.size() < 2) {
          detail = "missing zero crossings";
          return false;
        }
        const double e1 = z1[0] / 2, e2 = z1[1] / 2, e3 = z2[0] / 2,
                     e4 = z2[1] / 2;
        std::snprintf(buf, sizeof(buf),
                      "sigma_c=%.4f windows [%.4f, %.4f], [%.3f, %.3f]", sc, e1,
                      e2, e3, e4);
        detail = buf;
        auto within = [](double x, double ref, double frac) {
          return std::abs(x - ref) <= frac * std::abs(ref);
        };
        return std::abs(sc - 0.272) <= 0.003 && within(e1, 0.0395, 0.02) &&
               within(e2, 0.0439, 0.02) && within(e3, 1.178, 0.02) &&
               within(e4, 2.226, 0.02);
      });

  criterion(
      7, "IF balanced ring: verdicts, borders, and simulated growth/decay",
      [](std::string& detail) {
        PeriodicOrbit orbit = synaptic_if_orbit({}, 0.4);
        const Mat J = synaptic_feedthrough();
        Network net = make_network("balanced_ring", {{"N", 31}, {"d", 3}});

        const bool v_stable =
            network_sync_stability(orbit, J, net, -0.025, false).stable;
        const bool v_neg =
            !network_sync_stability(orbit, J, net, -0.1, false).stable;
        const bool v_pos =
            !network_sync_stability(orbit, J, net, 0.1, false).stable;
        const bool near_zero_a =
            network_sync_stability(orbit, J, net, -0.005, false).stable;
        const bool near_zero_b =
            !network_sync_stability(orbit, J, net, 0.005, false).stable;

        // Negative border from the real-axis zero and the extreme ring
        // eigenvalue.
        double lmax = -1e300;
        for (const auto& p : eig(net.w)) lmax = std::max(lmax, p.value.real());
        auto zeros = msf_real_axis_zeros(orbit, J, 0.001, 1.0, 2000);
        const double border = zeros.empty() ? 0 : -zeros.front() / lmax;

        // Exit sides at the unstable couplings.
        MsfEngine engine(orbit, J);
        auto dominant = [&](double sigma) {
          auto verdict = network_sync_stability(orbit, J, net, sigma, false);
          Complex worst;
          double exp_worst = -1e300;
          for (const auto& mv : verdict.modes) {
            if (mv.exponent > exp_worst) {
              exp_worst = mv.exponent;
              Complex big;
              for (const auto& mu : engine.multipliers(mv.beta)) {
                if (std::abs(mu) > std::abs(big)) big = mu;
              }
              worst = big;
            }
          }
          return worst;
        };
        const Complex mu_neg = dominant(-0.1);
        const Complex mu_pos = dominant(0.1);

        // Direct simulation: spike-wave dispersion decays or grows.
        auto sys = std::make_shared<PwlSystem>(builtin_model("planar_if"));
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> uni(-1e-4, 1e-4);
        auto dispersion_ratio = [&](double sigma) {
          Mat x0(4, 31);
          for (int i = 0; i < 31; ++i) {
            Vec s = orbit.state(0.0);
            s(0) += uni(rng);
            s(1) += uni(rng);
            x0.col(i) = s;
          }
          SimOptions opts;
          opts.t_max = 20.0 * orbit.period;
          opts.dt_out = orbit.period / 8.0;
          Trajectory traj = simulate_network(sys, net, sigma,
                                             CouplingSpec::synaptic(0.4), x0,
                                             opts);
          size_t waves = static_cast<size_t>(-1);
          for (const auto& s : traj.spikes) waves = std::min(waves, s.size());
          auto disp = [&](size_t k) {
            double lo = 1e300, hi = -1e300;
            for (const auto& s : traj.spikes) {
              lo = std::min(lo, s[k]);
              hi = std::max(hi, s[k]);
            }
            return hi - lo;
          };
          return disp(waves - 2) / disp(1);
        };
        const double r_stable = dispersion_ratio(-0.025);
        const double r_neg = dispersion_ratio(-0.1);
        const double r_pos = dispersion_ratio(0.1);

        char buf[200];
        std::snprintf(buf, sizeof(buf),
                      "border=%.4f exits (%.2f, %.2f) dispersion ratios "
                      "%.2f / %.0f / %.0f",
                      border, mu_neg.real(), mu_pos.real(), r_stable, r_neg,
                      r_pos);
        detail = buf;
        return v_stable && v_neg && v_pos && near_zero_a && near_zero_b &&
               std::abs(border + 0.05) <= 0.005 && mu_neg.real() < -1.0 &&
               std::abs(mu_neg.imag()) < 0.05 && mu_pos.real() > 1.0 &&
               std::abs(mu_pos.imag()) < 0.05 && r_stable < 3.0 &&
               r_neg > 10.0 && r_pos > 10.0;
      });

  criterion(
      8, "Wilson-Cowan ring: inside at 0.15, one negative-axis exit at 0.191",
      [](std::string& detail) {
        WilsonCowanMsf ok = wilson_cowan_msf({}, 31, 0.15);
        WilsonCowanMsf bad = wilson_cowan_msf({}, 31, 0.191);
        std::vector<Complex> outside;
        for (int p = 1; p < 31; ++p) {
          for (const auto& mu : bad.multipliers[static_cast<size_t>(p)]) {
            if (std::abs(mu) < 1.0) continue;
            bool dup = false;
            for (const auto& seen : outside) {
              if (std::abs(seen - mu) < 1e-8) dup = true;
            }
            if (!dup) outside.push_back(mu);
          }
        }
        char buf[128];
        std::snprintf(buf, sizeof(buf),
                      "stable@0.15=%d; %zu distinct outside, worst=(%.4f, %.4f)",
                      static_cast<int>(ok.stable), outside.size(),
                      outside.empty() ? 0 : outside[0].real(),
                      outside.empty() ? 0 : outside[0].imag());
        detail = buf;
        return ok.stable && outside.size() == 1 && outside[0].real() < -1.0 &&
               std::abs(outside[0].imag()) < 1e-6;
      });

  criterion(
      9, "five-node cluster state: closure 1e-9, stable, degenerate = MSF",
      [](std::string& detail) {
        const double sigma = -0.03;
        auto base = std::make_shared<PwlSystem>(builtin_model("absolute"));
        Mat L = five_node_demo_laplacian();
        ClusterPreset pre = five_node_demo_preset(sigma);
        PeriodicOrbit qorb =
            cluster_orbit(base, L, five_node_demo_partition(), sigma,
                          voltage_j(), pre.tmpl, pre.times_guess,
                          pre.state_guess);
        const double closure = (qorb.state(qorb.period) - qorb.state(0.0)).norm();
        ClusterFloquet cf =
            cluster_floquet(*base, L, five_node_demo_partition(), qorb, sigma,
                            voltage_j(), five_node_demo_q());

        // Degenerate single-cluster case against the standard MSF.
        ClusterPartition full{{{0, 1, 2, 3, 4}}, "laplacian-merge", {}};
        OrbitTemplate solo_tmpl;
        solo_tmpl.events = {{1, 0, +1}, {0, 0, -1}};
        PeriodicOrbit solo_q = cluster_orbit(
            base, L, full, 0.05, voltage_j(), solo_tmpl, {2.7535, 5.6779},
            (Vec(2) << 0.0, 1.7807).finished());
        Mat Q = Mat::Zero(5, 5);
        Q.row(0) = Vec::Constant(5, 1.0 / std::sqrt(5.0)).transpose();
        int r = 1;
        for (int c = 0; c < 5 && r < 5; ++c) {
          Vec v = Vec::Zero(5);
          v(c) = 1.0;
          for (int k = 0; k < r; ++k) {
            v -= Q.row(k).dot(v) * Q.row(k).transpose();
          }
          if (v.norm() > 1e-8) Q.row(r++) = v.normalized().transpose();
        }
        ClusterFloquet degen =
            cluster_floquet(*base, L, full, solo_q, 0.05, voltage_j(), Q);
        PeriodicOrbit solo = zoo_orbit("absolute");
        MsfEngine engine(solo, voltage_j());
        Mat w = -L;
        w.diagonal().setZero();
        Network net = network_from_adjacency(w, "custom");
        auto verdict = network_sync_stability(solo, voltage_j(), net, 0.05, true);
        std::vector<double> a, b;
        for (const auto& mu : degen.transverse_multipliers) {
          a.push_back(std::abs(mu));
        }
        for (const auto& mv : verdict.modes) {
          for (const auto& mu : engine.multipliers(mv.beta)) {
            b.push_back(std::abs(mu));
          }
        }
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        double degen_err = a.size() == b.size() ? 0.0 : 1.0;
        for (size_t k = 0; k < std::min(a.size(), b.size()); ++k) {
          degen_err = std::max(degen_err, std::abs(a[k] - b[k]));
        }
        char buf[128];
        std::snprintf(buf, sizeof(buf),
                      "closure=%.1e stable=%d maxTrans=%.3f degenerate err=%.1e",
                      closure, static_cast<int>(cf.stable),
                      cf.max_transverse_modulus, degen_err);
        detail = buf;
        return closure <= 1e-9 && cf.stable && degen_err <= 1e-8;
      });

  criterion(
      10, "cow herd: multiplier -q and sigma_c = 0.025 across architectures",
      [](std::string& detail) {
        PeriodicOrbit calm = cow_orbit({}, 0.0);
        const double mq =
            std::abs(calm.floquet.nontrivial_multiplier().real() + 0.95);
        std::map<std::string, double> q15{{"alpha2", 1.5 * 0.05}};
        std::vector<double> crits;
        for (int N : {5, 11, 21}) {
          Mat ring = Mat::Zero(N, N);
          for (int i = 0; i < N; ++i) {
            ring(i, (i + 1) % N) = 0.5;
            ring(i, (i + N - 1) % N) = 0.5;
          }
          crits.push_back(cow_herd_critical_sigma(q15, ring, 0.001, 0.04));
          Mat star = Mat::Zero(N, N);
          for (int j = 1; j < N; ++j) {
            star(0, j) = 1.0 / (N - 1);
            star(j, 0) = 1.0;
          }
          crits.push_back(cow_herd_critical_sigma(q15, star, 0.001, 0.04));
        }
        double lo = 1e300, hi = -1e300;
        for (double c : crits) {
          lo = std::min(lo, c);
          hi = std::max(hi, c);
        }
        char buf[128];
        std::snprintf(buf, sizeof(buf),
                      "|mult+q|=%.1e sigma_c in [%.4f, %.4f] spread %.4f", mq,
                      lo, hi, hi - lo);
        detail = buf;
        bool all_near = true;
        for (double c : crits) all_near = all_near && std::abs(c - 0.025) <= 2e-3;
        return mq <= 1e-8 && all_near && (hi - lo) <= 2e-3;
      });

  criterion(
      11, "property suite: monodromy, expm identities, quadrature, events, FD",
      [](std::string& detail) {
        // Trivial multipliers across the zoo.
        double worst_triv = 0;
        for (const char* name :
             {"absolute", "mckean2", "homoclinic", "planar_if", "pwl_ml",
              "mckean3", "wilson_cowan", "franklin", "cow"}) {
          PeriodicOrbit orbit = zoo_orbit(name);
          const auto& fd = orbit.floquet;
          worst_triv = std::max(
              worst_triv,
              std::abs(fd.multipliers[static_cast<size_t>(fd.trivial_index)] -
                       Complex(1, 0)));
        }
        // expm identities on seeded random matrices.
        std::mt19937 rng(29);
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        double worst_semi = 0, worst_det = 0;
        for (int trial = 0; trial < 12; ++trial) {
          const int n = 2 + trial % 4;
          Mat A(n, n);
          for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) A(i, j) = 1.4 * uni(rng);
          }
          worst_semi = std::max(
              worst_semi, (expm(A, 0.6) * expm(A, 0.9) - expm(A, 1.5))
                              .lpNorm<Eigen::Infinity>());
          worst_det = std::max(
              worst_det, std::abs(expm(A, 0.8).determinant() -
                                  std::exp(0.8 * A.trace())));
        }
        // Fourier coefficients vs jump-aware Simpson quadrature.
        PeriodicOrbit abs_orbit = zoo_orbit("absolute");
        PiecewiseCurve Z = iprc(abs_orbit);
        double worst_fourier = 0;
        {
          const double T = abs_orbit.period;
          const double omega = 2 * M_PI / T;
          std::vector<double> edges{0.0};
          for (const auto& ev : abs_orbit.events) edges.push_back(ev.time);
          std::sort(edges.begin(), edges.end());
          for (int n = 0; n <= 5; ++n) {
            for (int comp = 0; comp < 2; ++comp) {
              Complex acc = 0;
              for (size_t e = 0; e + 1 < edges.size() + 1; ++e) {
                const double a = edges[e];
                const double b = e + 1 < edges.size() ? edges[e + 1] : T;
                if (b - a < 1e-12) continue;
                const int panels =
                    std::max(8, static_cast<int>(4096 * (b - a) / T));
                const double h = (b - a) / panels;
                auto g = [&](double t) {
                  t = std::min(std::max(t, a + 1e-10), b - 1e-10);
                  return Z.value(t)(comp) * std::exp(Complex(0, -n * omega * t));
                };
                for (int p = 0; p < panels; ++p) {
                  const double t0 = a + p * h;
                  acc += (h / 6.0) * (g(t0) + 4.0 * g(t0 + h / 2) + g(t0 + h));
                }
              }
              worst_fourier = std::max(
                  worst_fourier,
                  std::abs(acc / T - Z.fourier_coefficient(n)(comp)));
            }
          }
        }
        // Simulator event residuals.
        auto sys = std::make_shared<PwlSystem>(builtin_model("planar_if"));
        SimOptions opts;
        opts.t_max = 40.0;
        opts.dt_out = 0.01;
        Trajectory traj =
            simulate_single(sys, (Vec(2) << 0.3, 0.2).finished(), opts);
        double worst_event = 0;
        for (const auto& ev : traj.events) {
          worst_event = std::max(
              worst_event,
              std::abs(sys->manifolds[static_cast<size_t>(ev.manifold)].h(
                  ev.pre_state)));
        }
        // Reduced-system Jacobian vs finite differences.
        PeriodicOrbit ml = zoo_orbit("pwl_ml");
        PASet pa = pa_interactions(ml, response_set(ml), 48);
        Vec s0 = (Vec(3) << 0.7, 0.04, -0.02).finished();
        Mat Jr = reduced_jacobian(s0, 0.15, pa);
        double worst_fd = 0;
        for (int j = 0; j < 3; ++j) {
          Vec sp = s0, sm = s0;
          sp(j) += 1e-6;
          sm(j) -= 1e-6;
          Vec col =
              (reduced_rhs(sp, 0.15, pa) - reduced_rhs(sm, 0.15, pa)) / 2e-6;
          for (int i = 0; i < 3; ++i) {
            worst_fd = std::max(worst_fd, std::abs(Jr(i, j) - col(i)));
          }
        }
        char buf[200];
        std::snprintf(buf, sizeof(buf),
                      "trivial %.1e semigroup %.1e det %.1e fourier %.1e "
                      "events %.1e jacobian %.1e",
                      worst_triv, worst_semi, worst_det, worst_fourier,
                      worst_event, worst_fd);
        detail = buf;
        return worst_triv <= 1e-6 && worst_semi <= 1e-10 &&
               worst_det <= 1e-9 && worst_fourier <= 1e-6 &&
               worst_event <= 1e-10 && worst_fd <= 1e-5;
      });

  std::printf("%d of 11 criteria failed\n", failures);
  return failures;
}
