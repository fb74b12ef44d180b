#include "pwlnet/phase_amplitude.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>

namespace pwlnet {

PASet pa_interactions(const PeriodicOrbit& orbit, const ResponseSet& rs,
                      int n_max) {
  if (orbit.system->dimension != 2) {
    throw ValidationError("pa_interactions: planar orbits only");
  }
  const int v = 0;
  FourierSeries zv = scalar_series(rs.Z, v, n_max);
  FourierSeries iv = scalar_series(rs.I, v, n_max);
  FourierSeries bv = scalar_series(rs.B, v, n_max);
  FourierSeries cv = scalar_series(rs.C, v, n_max);
  FourierSeries pv = scalar_series(rs.p, v, n_max);
  FourierSeries vg = scalar_series(orbit_curve(orbit), v, n_max);

  PASet pa;
  pa.kappa = rs.kappa;
  pa.omega = rs.omega;

  auto coupled = [&](const FourierSeries& a) {
    // (2 pi)^{-1} int a(s) [v(y+s) - v(s)] ds as a series in y.
    FourierSeries out = averaged_product(a, vg);
    out.add_coeff(0, -averaged_product_mean(a, vg));
    return out;
  };

  pa.H[0] = coupled(zv);                                   // H1
  pa.H[1] = coupled(bv);                                   // H2
  pa.H[1].add_coeff(0, -averaged_product_mean(zv, pv));
  pa.H[2] = averaged_product(zv, pv);                      // H3
  pa.H[3] = coupled(iv);                                   // H4
  pa.H[4] = coupled(cv);                                   // H5
  pa.H[4].add_coeff(0, -averaged_product_mean(iv, pv));
  pa.H[5] = averaged_product(iv, pv);                      // H6
  for (auto& series : pa.H) series.enforce_conjugate_symmetry();
  return pa;
}

Vec reduced_rhs(const Vec& s, double sigma, const PASet& pa) {
  const double chi = s(0), p1 = s(1), p2 = s(2);
  const auto& H1 = pa.h(1);
  const auto& H2 = pa.h(2);
  const auto& H3 = pa.h(3);
  const auto& H4 = pa.h(4);
  const auto& H5 = pa.h(5);
  const auto& H6 = pa.h(6);
  Vec d(3);
  d(0) = sigma * (H1.eval(-chi) - H1.eval(chi) +
                  p1 * (H3.eval(-chi) - H2.eval(chi)) +
                  p2 * (H2.eval(-chi) - H3.eval(chi)));
  d(1) = pa.kappa * p1 +
         sigma * (H4.eval(chi) + p1 * H5.eval(chi) + p2 * H6.eval(chi));
  d(2) = pa.kappa * p2 +
         sigma * (H4.eval(-chi) + p2 * H5.eval(-chi) + p1 * H6.eval(-chi));
  return d;
}

Mat reduced_jacobian(const Vec& s, double sigma, const PASet& pa) {
  const double chi = s(0), p1 = s(1), p2 = s(2);
  const auto& H1 = pa.h(1);
  const auto& H2 = pa.h(2);
  const auto& H3 = pa.h(3);
  const auto& H4 = pa.h(4);
  const auto& H5 = pa.h(5);
  const auto& H6 = pa.h(6);
  Mat J(3, 3);
  J(0, 0) = sigma * (-H1.deriv(-chi) - H1.deriv(chi) +
                     p1 * (-H3.deriv(-chi) - H2.deriv(chi)) +
                     p2 * (-H2.deriv(-chi) - H3.deriv(chi)));
  J(0, 1) = sigma * (H3.eval(-chi) - H2.eval(chi));
  J(0, 2) = sigma * (H2.eval(-chi) - H3.eval(chi));
  J(1, 0) = sigma * (H4.deriv(chi) + p1 * H5.deriv(chi) + p2 * H6.deriv(chi));
  J(1, 1) = pa.kappa + sigma * H5.eval(chi);
  J(1, 2) = sigma * H6.eval(chi);
  J(2, 0) = sigma * (-H4.deriv(-chi) - p2 * H5.deriv(-chi) -
                     p1 * H6.deriv(-chi));
  J(2, 1) = sigma * H6.eval(-chi);
  J(2, 2) = pa.kappa + sigma * H5.eval(-chi);
  return J;
}

Mat sync_jacobian_pa(double sigma, const PASet& pa) {
  const double h1p = pa.h(1).deriv(0.0);
  const double h3 = pa.h(3).eval(0.0);
  const double h4p = pa.h(4).deriv(0.0);
  const double h6 = pa.h(6).eval(0.0);
  Mat J(3, 3);
  J << -2 * sigma * h1p, 2 * sigma * h3, -2 * sigma * h3,
       sigma * h4p, pa.kappa - sigma * h6, sigma * h6,
       -sigma * h4p, sigma * h6, pa.kappa - sigma * h6;
  return J;
}

std::array<double, 3> sync_conditions(double sigma, const PASet& pa) {
  const double h1p = pa.h(1).deriv(0.0);
  const double h3 = pa.h(3).eval(0.0);
  const double h4p = pa.h(4).deriv(0.0);
  const double h6 = pa.h(6).eval(0.0);
  return {pa.kappa, pa.kappa - 2 * sigma * (h1p + h6),
          h1p * (pa.kappa - 2 * sigma * h6) + 2 * sigma * h3 * h4p};
}

namespace {

double max_re_eig(const Mat& J) {
  double worst = -1e300;
  for (const auto& p : eig(J)) worst = std::max(worst, p.value.real());
  return worst;
}

}  // namespace

double sync_restabilization_sigma(const PASet& pa, double lo, double hi,
                                  double tol) {
  auto crit = [&](double s) { return max_re_eig(sync_jacobian_pa(s, pa)); };
  double flo = crit(lo), fhi = crit(hi);
  if (flo <= 0 || fhi >= 0) {
    throw NumericError(
        "sync_restabilization_sigma: no sign change of the leading "
        "eigenvalue over the bracket");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (crit(mid) > 0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<FixedPointRecord> fixed_points_at(const PASet& pa, double sigma,
                                              int chi_starts) {
  std::vector<FixedPointRecord> points;
  for (int c = 0; c < chi_starts; ++c) {
    const double chi0 = 2.0 * M_PI * c / chi_starts;
    const double denom =
        pa.kappa + sigma * (pa.h(5).eval(chi0) + pa.h(6).eval(chi0));
    const double psi0 =
        std::abs(denom) > 1e-10 ? -sigma * pa.h(4).eval(chi0) / denom : 0.0;
    // Symmetric slaving seed plus an asymmetric one for the folded
    // chi != 0, pi branches where psi1 != psi2.
    const std::array<std::pair<double, double>, 2> seeds{
        std::pair<double, double>{psi0, psi0},
        std::pair<double, double>{1.6 * psi0, 0.4 * psi0}};
    for (auto [p1, p2] : seeds) {
      RootProblem problem;
      problem.dimension = 3;
      problem.x0 = (Vec(3) << chi0, p1, p2).finished();
      problem.residual = [&](const Vec& x) { return reduced_rhs(x, sigma, pa); };
      Vec sol;
      try {
        RootOptions opts;
        opts.max_iterations = 60;
        sol = solve_root(problem, 1e-11, opts);
      } catch (const NumericError&) {
        continue;  // per-start failures are expected and not fatal
      }
      sol(0) = wrap_two_pi(sol(0));
      bool duplicate = false;
      for (const auto& fp : points) {
        double dchi = std::abs(fp.state(0) - sol(0));
        dchi = std::min(dchi, 2.0 * M_PI - dchi);
        if (dchi < 1e-5 && std::abs(fp.state(1) - sol(1)) < 1e-7 &&
            std::abs(fp.state(2) - sol(2)) < 1e-7) {
          duplicate = true;
          break;
        }
      }
      if (duplicate) continue;
      FixedPointRecord rec;
      rec.state = sol;
      Mat J = reduced_jacobian(sol, sigma, pa);
      for (const auto& p : eig(J)) rec.eigenvalues.push_back(p.value);
      rec.max_re = max_re_eig(J);
      rec.type = rec.max_re < -1e-9 ? "stable"
                                    : (rec.max_re > 1e-9 ? "unstable"
                                                         : "neutral");
      points.push_back(std::move(rec));
    }
  }
  return points;
}

PaScan locked_state_scan(const PASet& pa, double sigma_lo, double sigma_hi,
                         int grid, int chi_starts) {
  if (grid < 16) throw ValidationError("locked_state_scan: grid must be >= 16");
  PaScan scan;
  for (int g = 0; g < grid; ++g) {
    const double sigma =
        sigma_lo + (sigma_hi - sigma_lo) * g / std::max(1, grid - 1);
    ScanRow row;
    row.sigma = sigma;
    row.points = fixed_points_at(pa, sigma, chi_starts);
    scan.rows.push_back(std::move(row));
  }

  // No-stable windows over the grid.
  double win_start = std::numeric_limits<double>::quiet_NaN();
  for (size_t g = 0; g < scan.rows.size(); ++g) {
    bool any_stable = false;
    for (const auto& fp : scan.rows[g].points) any_stable |= fp.type == "stable";
    if (!any_stable && std::isnan(win_start)) win_start = scan.rows[g].sigma;
    if ((any_stable || g + 1 == scan.rows.size()) && !std::isnan(win_start)) {
      const double win_end = scan.rows[g].sigma;
      scan.no_stable_windows.push_back({win_start, win_end});
      win_start = std::numeric_limits<double>::quiet_NaN();
    }
  }

  // Hopf brackets: match fixed points between neighboring sigma rows and
  // look for a leading complex pair crossing the imaginary axis.
  for (size_t g = 0; g + 1 < scan.rows.size(); ++g) {
    for (const auto& a : scan.rows[g].points) {
      const FixedPointRecord* match = nullptr;
      double best = 0.3;
      for (const auto& b : scan.rows[g + 1].points) {
        double dchi = std::abs(a.state(0) - b.state(0));
        dchi = std::min(dchi, 2.0 * M_PI - dchi);
        const double d = dchi + (a.state.tail(2) - b.state.tail(2)).norm();
        if (d < best) {
          best = d;
          match = &b;
        }
      }
      if (!match) continue;
      auto leading_complex = [](const FixedPointRecord& r) {
        for (const auto& ev : r.eigenvalues) {
          if (std::abs(ev.imag()) > 1e-8 &&
              std::abs(ev.real() - r.max_re) < 1e-10) {
            return true;
          }
        }
        return false;
      };
      if (leading_complex(a) && leading_complex(*match) &&
          a.max_re * match->max_re < 0) {
        scan.hopf_brackets.push_back(
            {scan.rows[g].sigma, scan.rows[g + 1].sigma});
      }
    }
  }
  return scan;
}

Vec reduced_flow(Vec state, double sigma, const PASet& pa, double t_max,
                 double dt) {
  double t = 0;
  while (t < t_max) {
    const double h = std::min(dt, t_max - t);
    Vec k1 = reduced_rhs(state, sigma, pa);
    Vec k2 = reduced_rhs(Vec(state + 0.5 * h * k1), sigma, pa);
    Vec k3 = reduced_rhs(Vec(state + 0.5 * h * k2), sigma, pa);
    Vec k4 = reduced_rhs(Vec(state + h * k3), sigma, pa);
    state += (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);
    t += h;
  }
  return state;
}

void export_pa_scan_csv(const PaScan& scan, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("export_pa_scan_csv: cannot open " + path);
  out << "sigma,chi,psi1,psi2,max_re,type\n";
  out.precision(12);
  for (const auto& row : scan.rows) {
    for (const auto& fp : row.points) {
      out << row.sigma << "," << fp.state(0) << "," << fp.state(1) << ","
          << fp.state(2) << "," << fp.max_re << "," << fp.type << "\n";
    }
  }
}

}  // namespace pwlnet
