#include "pwlnet/msf.hpp"
#include "pwlnet/simulate.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>

namespace pwlnet {

MsfEngine::MsfEngine(const PeriodicOrbit& orbit, const Mat& J) {
  const int m = orbit.system->dimension;
  if (J.rows() != m || J.cols() != m) {
    throw DimensionError("msf: coupling Jacobian must match the system size");
  }
  period_ = orbit.period;
  coupling_ = J.cast<Complex>();
  for (int i = 0; i < orbit.num_segments(); ++i) {
    const auto& seg = orbit.segments[static_cast<size_t>(i)];
    a_minus_bj_base_.push_back(
        orbit.system->zones[static_cast<size_t>(seg.zone)].A.cast<Complex>());
    lens_.push_back(seg.time_of_flight);
    saltations_.push_back(
        orbit.events[static_cast<size_t>(i)].saltation.cast<Complex>());
  }
  // Tangential eigenvector at beta = 0.
  auto pairs = eig(MatC(product(Complex(0, 0))));
  int best = -1;
  double dist = 1e300;
  for (size_t k = 0; k < pairs.size(); ++k) {
    const double d = std::abs(pairs[k].value - Complex(1, 0));
    if (d < dist) {
      dist = d;
      best = static_cast<int>(k);
    }
  }
  if (best < 0 || dist > 1e-6) {
    throw NumericError("msf: orbit has no clean tangential multiplier");
  }
  tangent_ = pairs[static_cast<size_t>(best)].vector;
}

MatC MsfEngine::product(Complex beta) const {
  const auto m = coupling_.rows();
  MatC psi = MatC::Identity(m, m);
  for (size_t i = 0; i < lens_.size(); ++i) {
    MatC gen = a_minus_bj_base_[i] - beta * coupling_;
    psi = saltations_[i] * expm(gen, lens_[i]) * psi;
  }
  return psi;
}

std::vector<Complex> MsfEngine::multipliers(Complex beta) const {
  auto pairs = eig(MatC(product(beta)));
  if (std::abs(beta) > 0) {
    // Off the synchronization manifold every direction is transverse, so
    // every multiplier counts; no mode is dropped.
    std::vector<Complex> out;
    for (const auto& p : pairs) out.push_back(p.value);
    return out;
  }
  // At beta = 0 the block is the single-oscillator variational problem and
  // the tangential multiplier (continuation of 1) is excluded, listed first.
  int drop = -1;
  double best = -1, second = -1;
  for (size_t k = 0; k < pairs.size(); ++k) {
    const double overlap = std::abs(pairs[k].vector.dot(tangent_)) /
                           (pairs[k].vector.norm() * tangent_.norm());
    if (overlap > best) {
      second = best;
      best = overlap;
      drop = static_cast<int>(k);
    } else if (overlap > second) {
      second = overlap;
    }
  }
  if (best - second < 1e-6) {
    // Eigenvector collision: fall back to dropping the multiplier nearest 1
    // in modulus.
    fallback_ = true;
    drop = -1;
    double d1 = 1e300;
    for (size_t k = 0; k < pairs.size(); ++k) {
      const double d = std::abs(std::abs(pairs[k].value) - 1.0);
      if (d < d1) {
        d1 = d;
        drop = static_cast<int>(k);
      }
    }
  }
  std::vector<Complex> out;
  out.push_back(pairs[static_cast<size_t>(drop)].value);
  for (size_t k = 0; k < pairs.size(); ++k) {
    if (static_cast<int>(k) != drop) out.push_back(pairs[k].value);
  }
  return out;
}

double MsfEngine::value(Complex beta) const {
  auto mults = multipliers(beta);
  double worst = -1e300;
  const size_t first = std::abs(beta) > 0 ? 0 : 1;
  for (size_t k = first; k < mults.size(); ++k) {
    worst = std::max(worst, std::log(std::abs(mults[k])) / period_);
  }
  return worst;
}

double msf_value(const PeriodicOrbit& orbit, const Mat& J, Complex beta) {
  return MsfEngine(orbit, J).value(beta);
}

namespace {

// Marching-squares zero contours on the sampled field.
std::vector<std::vector<std::pair<double, double>>> contours_of(
    const std::vector<double>& xs, const std::vector<double>& ys,
    const Mat& v) {
  struct Seg {
    double x0, y0, x1, y1;
  };
  std::vector<Seg> segs;
  auto interp = [](double a, double b, double fa, double fb) {
    return a + (b - a) * (0.0 - fa) / (fb - fa);
  };
  const int ny = static_cast<int>(ys.size());
  const int nx = static_cast<int>(xs.size());
  for (int i = 0; i + 1 < ny; ++i) {
    for (int j = 0; j + 1 < nx; ++j) {
      const double f00 = v(i, j), f01 = v(i, j + 1), f10 = v(i + 1, j),
                   f11 = v(i + 1, j + 1);
      std::vector<std::pair<double, double>> pts;
      if (f00 * f01 < 0) {
        pts.push_back({interp(xs[j], xs[j + 1], f00, f01), ys[i]});
      }
      if (f10 * f11 < 0) {
        pts.push_back({interp(xs[j], xs[j + 1], f10, f11), ys[i + 1]});
      }
      if (f00 * f10 < 0) {
        pts.push_back({xs[j], interp(ys[i], ys[i + 1], f00, f10)});
      }
      if (f01 * f11 < 0) {
        pts.push_back({xs[j + 1], interp(ys[i], ys[i + 1], f01, f11)});
      }
      if (pts.size() >= 2) {
        segs.push_back({pts[0].first, pts[0].second, pts[1].first,
                        pts[1].second});
        if (pts.size() == 4) {
          segs.push_back({pts[2].first, pts[2].second, pts[3].first,
                          pts[3].second});
        }
      }
    }
  }
  // Chain segments into polylines by endpoint proximity.
  const double tol =
      1e-9 + 1e-6 * (std::abs(xs.back() - xs.front()) +
                     std::abs(ys.back() - ys.front()));
  std::vector<bool> used(segs.size(), false);
  std::vector<std::vector<std::pair<double, double>>> polys;
  for (size_t s = 0; s < segs.size(); ++s) {
    if (used[s]) continue;
    used[s] = true;
    std::vector<std::pair<double, double>> poly{{segs[s].x0, segs[s].y0},
                                                {segs[s].x1, segs[s].y1}};
    bool grew = true;
    while (grew) {
      grew = false;
      for (size_t t = 0; t < segs.size(); ++t) {
        if (used[t]) continue;
        auto close = [&](double ax, double ay, double bx, double by) {
          return std::abs(ax - bx) + std::abs(ay - by) < tol;
        };
        auto& back = poly.back();
        auto& front = poly.front();
        if (close(back.first, back.second, segs[t].x0, segs[t].y0)) {
          poly.push_back({segs[t].x1, segs[t].y1});
        } else if (close(back.first, back.second, segs[t].x1, segs[t].y1)) {
          poly.push_back({segs[t].x0, segs[t].y0});
        } else if (close(front.first, front.second, segs[t].x1, segs[t].y1)) {
          poly.insert(poly.begin(), {segs[t].x0, segs[t].y0});
        } else if (close(front.first, front.second, segs[t].x0, segs[t].y0)) {
          poly.insert(poly.begin(), {segs[t].x1, segs[t].y1});
        } else {
          continue;
        }
        used[t] = true;
        grew = true;
      }
    }
    polys.push_back(std::move(poly));
  }
  return polys;
}

}  // namespace

MsfGrid msf_grid(const PeriodicOrbit& orbit, const Mat& J, double re_lo,
                 double re_hi, double im_lo, double im_hi, int n_re,
                 int n_im) {
  if (n_re < 16 || n_im < 16) {
    throw ValidationError("msf_grid: resolution must be at least 16 x 16");
  }
  MsfGrid grid;
  for (int j = 0; j < n_re; ++j) {
    grid.re_axis.push_back(re_lo + (re_hi - re_lo) * j / (n_re - 1));
  }
  for (int i = 0; i < n_im; ++i) {
    grid.im_axis.push_back(im_lo + (im_hi - im_lo) * i / (n_im - 1));
  }
  grid.values = Mat::Zero(n_im, n_re);
  MsfEngine engine(orbit, J);
  parallel_for(n_im, [&](int i) {
    for (int j = 0; j < n_re; ++j) {
      grid.values(i, j) =
          engine.value(Complex(grid.re_axis[static_cast<size_t>(j)],
                               grid.im_axis[static_cast<size_t>(i)]));
    }
  });
  grid.zero_contours = contours_of(grid.re_axis, grid.im_axis, grid.values);
  return grid;
}

void export_msf_grid_csv(const MsfGrid& grid, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("export_msf_grid_csv: cannot open " + path);
  out << "re_beta,im_beta,value\n";
  out.precision(12);
  for (size_t i = 0; i < grid.im_axis.size(); ++i) {
    for (size_t j = 0; j < grid.re_axis.size(); ++j) {
      out << grid.re_axis[j] << "," << grid.im_axis[i] << ","
          << grid.values(static_cast<Eigen::Index>(i),
                         static_cast<Eigen::Index>(j))
          << "\n";
    }
  }
}

std::string msf_contours_json(const MsfGrid& grid) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& poly : grid.zero_contours) {
    nlohmann::json pj = nlohmann::json::array();
    for (const auto& [x, y] : poly) pj.push_back({{"re", x}, {"im", y}});
    j.push_back(pj);
  }
  return j.dump(2);
}

std::vector<double> msf_real_axis_zeros(const PeriodicOrbit& orbit,
                                        const Mat& J, double beta_lo,
                                        double beta_hi, int scan) {
  MsfEngine engine(orbit, J);
  std::vector<double> values(static_cast<size_t>(scan) + 1);
  parallel_for(scan + 1, [&](int s) {
    const double b = beta_lo + (beta_hi - beta_lo) * s / scan;
    values[static_cast<size_t>(s)] = engine.value(Complex(b, 0));
  });
  std::vector<double> zeros;
  for (int s = 0; s < scan; ++s) {
    const double a = beta_lo + (beta_hi - beta_lo) * s / scan;
    const double b = beta_lo + (beta_hi - beta_lo) * (s + 1) / scan;
    double fa = values[static_cast<size_t>(s)];
    double fb = values[static_cast<size_t>(s) + 1];
    if (fa == 0.0) zeros.push_back(a);
    if (fa * fb >= 0) continue;
    double lo = a, hi = b;
    for (int it = 0; it < 60 && hi - lo > 1e-10; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = engine.value(Complex(mid, 0));
      if ((fm > 0) == (fa > 0)) {
        lo = mid;
        fa = fm;
      } else {
        hi = mid;
      }
    }
    zeros.push_back(0.5 * (lo + hi));
  }
  return zeros;
}

SyncVerdict network_sync_stability(const PeriodicOrbit& orbit, const Mat& J,
                                   const Network& net, double sigma,
                                   bool laplacian_form) {
  const Mat base = laplacian_form ? net.laplacian() : net.w;
  auto pairs = eig(base);
  // The tangential network mode is the one carried by the all-ones vector.
  const VecC ones = VecC::Constant(net.N, Complex(1.0, 0.0)) /
                    std::sqrt(static_cast<double>(net.N));
  int drop = -1;
  double best = -1;
  for (size_t k = 0; k < pairs.size(); ++k) {
    const double overlap =
        std::abs(pairs[k].vector.dot(ones)) / pairs[k].vector.norm();
    if (overlap > best) {
      best = overlap;
      drop = static_cast<int>(k);
    }
  }
  MsfEngine engine(orbit, J);
  SyncVerdict verdict;
  verdict.stable = true;
  double worst = -1e300;
  for (size_t k = 0; k < pairs.size(); ++k) {
    if (static_cast<int>(k) == drop) continue;
    ModeVerdict mv;
    mv.graph_eigenvalue = pairs[k].value;
    mv.beta = laplacian_form ? sigma * pairs[k].value : -sigma * pairs[k].value;
    mv.exponent = engine.value(mv.beta);
    if (mv.exponent >= 0) verdict.stable = false;
    if (mv.exponent > worst) {
      worst = mv.exponent;
      verdict.critical_mode = static_cast<int>(verdict.modes.size());
      verdict.critical_vector = pairs[k].vector;
    }
    verdict.modes.push_back(std::move(mv));
  }
  return verdict;
}

// ---------------------------------------------------------------------------
// Synaptic IF
// ---------------------------------------------------------------------------

Mat synaptic_feedthrough(int dim, int v_index) {
  Mat J = Mat::Zero(dim, dim);
  J(v_index, dim - 2) = 1.0;
  return J;
}

PeriodicOrbit synaptic_if_orbit(const std::map<std::string, double>& params,
                                double alpha, double self_drive) {
  PwlSystem base = builtin_model("planar_if", params);
  auto sys = std::make_shared<PwlSystem>(
      with_alpha_synapse(base, alpha, self_drive));
  // Seed from the planar tonic orbit plus the periodic synapse closed form;
  // if that misses (strong kicks reshape the orbit), harvest a settled
  // simulation instead.
  OrbitTemplate tmpl;
  tmpl.events = {{0, 1, +1}};
  try {
    PeriodicOrbit planar = zoo_orbit("planar_if", params);
    const double T = planar.period;
    const double u0 = alpha / (1.0 - std::exp(-alpha * T));
    Vec guess(4);
    guess << planar.segments[0].entry_state(0),
        planar.segments[0].entry_state(1), u0 * 0.8, u0;
    return find_periodic_orbit(sys, tmpl, {T}, guess);
  } catch (const NumericError&) {
    const double vr = sys->params.at("vr");
    Vec x0 = (Vec(4) << vr + 0.01, 0.0, 0.0, 0.0).finished();
    HarvestedCycle cyc = harvest_orbit_cycle(sys, x0, 80.0, 40.0, -1, 0.01);
    return find_periodic_orbit(sys, cyc.tmpl, cyc.times, cyc.entry_state);
  }
}

// ---------------------------------------------------------------------------
// Wilson-Cowan
// ---------------------------------------------------------------------------

WilsonCowanMsf wilson_cowan_msf(const std::map<std::string, double>& params,
                                int N, double sigma_scale) {
  WilsonCowanMsf out;
  out.orbit = zoo_orbit("wilson_cowan", params);
  const auto& sys = *out.orbit.system;
  const double eps = sys.params.at("epsilon");
  const double tau = sys.params.at("tau");
  const double wuu = sys.params.at("wuu");
  const double wvu = sys.params.at("wvu");
  const double wuv = sys.params.at("wuv");
  const double wvv = sys.params.at("wvv");

  Mat W0(2, 2);
  W0 << wuu, -wvu, wuv, -wvv;
  Mat Jt = Mat::Zero(2, 2);
  Jt(0, 0) = 1.0;
  Jt(1, 1) = 1.0 / tau;
  const Mat A = -W0 * Jt * W0.inverse();

  // Mode factors of the shared circulant profile (row-normalized).
  Mat profile(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      const int d = std::min(std::abs(i - j), N - std::abs(i - j));
      profile(i, j) = std::exp(-d / sigma_scale);
    }
  }
  profile /= profile.row(0).sum();
  std::vector<double> row(static_cast<size_t>(N));
  for (int j = 0; j < N; ++j) row[static_cast<size_t>(j)] = profile(0, j);
  std::vector<Complex> rho = circulant_eigenvalues(row);

  // Branch indicator per orbit segment: D = diag(F'(Xu), F'(Xv)).
  std::vector<Mat> dmats;
  std::vector<double> lens;
  for (const auto& seg : out.orbit.segments) {
    const int bu = seg.zone / 3, bv = seg.zone % 3;
    Mat D = Mat::Zero(2, 2);
    if (bu == 1) D(0, 0) = 1.0 / eps;
    if (bv == 1) D(1, 1) = 1.0 / eps;
    lens.push_back(seg.time_of_flight);
    dmats.push_back(D);
  }

  out.stable = true;
  double worst = -1e300;
  for (int p = 0; p < N; ++p) {
    const MatC lam_p = (rho[static_cast<size_t>(p)] * W0).cast<Complex>();
    MatC psi = MatC::Identity(2, 2);
    for (size_t s = 0; s < lens.size(); ++s) {
      MatC gen = A.cast<Complex>() +
                 lam_p * Jt.cast<Complex>() * dmats[s].cast<Complex>();
      psi = expm(gen, lens[s]) * psi;
    }
    std::vector<Complex> mults;
    for (const auto& pr : eig(psi)) mults.push_back(pr.value);
    if (p != 0) {
      for (const auto& mu : mults) {
        if (std::abs(mu) >= 1.0) out.stable = false;
        if (std::abs(mu) > worst) {
          worst = std::abs(mu);
          out.critical_mode = p;
          out.critical_multiplier = mu;
        }
      }
    }
    out.multipliers.push_back(std::move(mults));
  }
  // Mode 0 must reproduce the on-manifold Floquet data (trivial 1 present).
  bool has_one = false;
  for (const auto& mu : out.multipliers[0]) {
    if (std::abs(mu - Complex(1, 0)) < 1e-6) has_one = true;
  }
  if (!has_one) {
    throw NumericError(
        "wilson_cowan_msf: mean-field block lost the trivial multiplier");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Switched linear
// ---------------------------------------------------------------------------

SwitchedResult switched_linear_msf(const std::vector<SwitchedSegment>& segments,
                                   const Mat& H, Complex eta) {
  if (segments.empty()) {
    throw ValidationError("switched_linear_msf: empty segment list");
  }
  const auto m = segments.front().A.rows();
  MatC psi = MatC::Identity(m, m);
  double total = 0;
  for (const auto& seg : segments) {
    MatC gen = seg.A.cast<Complex>() - eta * H.cast<Complex>();
    psi = expm(gen, seg.dt) * psi;
    total += seg.dt;
  }
  SwitchedResult out;
  double worst = -1e300;
  for (const auto& p : eig(psi)) {
    if (std::abs(p.value) > std::abs(out.dominant)) out.dominant = p.value;
    worst = std::max(worst, std::log(std::abs(p.value)) / total);
  }
  out.exponent = worst;
  const double mod = std::abs(out.dominant);
  if (std::abs(mod - 1.0) < 5e-2) {
    if (std::abs(out.dominant.imag()) > 0.05 * mod) {
      out.bifurcation = "neimark_sacker";
    } else if (out.dominant.real() < 0) {
      out.bifurcation = "period_doubling";
    } else {
      out.bifurcation = "tangent";
    }
  } else {
    out.bifurcation = "none";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cow herd
// ---------------------------------------------------------------------------

PeriodicOrbit cow_orbit(const std::map<std::string, double>& params,
                        double sigma) {
  std::map<std::string, double> p = params;
  p["sigma"] = sigma;
  auto sys = std::make_shared<PwlSystem>(builtin_model("cow", p));
  const double a1 = sys->params.at("alpha1"), a2 = sys->params.at("alpha2"),
               b1 = sys->params.at("beta1"), b2 = sys->params.at("beta2"),
               delta = sys->params.at("delta");
  const double a2e = a2 - sigma;  // effective decay rates under coupling
  const double b2e = b2 - sigma;
  if (a2e <= 0 || b2e <= 0) {
    throw ValidationError("cow_orbit: coupling exceeds the decay rates");
  }
  // Closed-form grazing cycle for the initial guess.
  const double w0 = std::pow(delta, (1.0 + b1 / b2e) / (1.0 + a2e / a1));
  const double t1 = -std::log(w0) / b1;
  const double t2 = -std::log(delta) / b2e;
  const double v12 = std::exp(-a2e * t1) * std::exp(a1 * t2);
  const double t3 = -std::log(v12) / a1;
  if (!(delta < w0 && w0 < 1) || !(delta < v12 && v12 < 1)) {
    throw ValidationError("cow_orbit: no grazing cycle at these parameters");
  }
  OrbitTemplate tmpl;
  tmpl.events = {{0, 1, +1}, {1, 3, -1}, {2, 0, +1}};
  return find_periodic_orbit(sys, tmpl, {t1, t2, t3},
                             (Vec(2) << 1.0, w0).finished());
}

CowHerdResult cow_herd_monodromy(const std::map<std::string, double>& params,
                                 const Mat& w, double sigma) {
  const int N = static_cast<int>(w.rows());
  for (int i = 0; i < N; ++i) {
    if (std::abs(w.row(i).sum() - 1.0) > 1e-9) {
      throw ValidationError("cow_herd_monodromy: adjacency rows must sum to 1");
    }
  }
  PeriodicOrbit orbit = cow_orbit(params, sigma);
  const PwlSystem uncoupled = builtin_model("cow", params);

  auto chi = [&](int state) {
    Mat c = Mat::Zero(2, 2);
    if (state == 0) c(0, 0) = 1.0;  // eating drives hunger
    if (state == 1) c(1, 1) = 1.0;  // resting drives lying desire
    return c;
  };

  Mat psi = Mat::Identity(2 * N, 2 * N);
  const Mat IN = Mat::Identity(N, N);
  for (int i = 0; i < orbit.num_segments(); ++i) {
    const int state = orbit.segments[static_cast<size_t>(i)].zone;
    const Mat a_theta = uncoupled.zones[static_cast<size_t>(state)].A;
    Mat big = Mat::Zero(2 * N, 2 * N);
    // A(theta, sigma) = I_N (x) a(theta) + sigma w (x) chi(theta)
    for (int r = 0; r < N; ++r) {
      for (int c = 0; c < N; ++c) {
        Mat block = sigma * w(r, c) * chi(state);
        if (r == c) block += a_theta;
        big.block(2 * r, 2 * c, 2, 2) = block;
      }
    }
    psi = expm(big, orbit.segments[static_cast<size_t>(i)].time_of_flight) *
          psi;
    // K_mu(t_i) = I_N (x) S_mu(t_i)
    Mat ks = Mat::Zero(2 * N, 2 * N);
    const Mat& S = orbit.events[static_cast<size_t>(i)].saltation;
    for (int r = 0; r < N; ++r) ks.block(2 * r, 2 * r, 2, 2) = S;
    psi = ks * psi;
    (void)IN;
  }

  CowHerdResult out;
  auto pairs = eig(psi);
  int drop = -1;
  double dist = 1e300;
  for (size_t k = 0; k < pairs.size(); ++k) {
    out.eigenvalues.push_back(pairs[k].value);
    const double d = std::abs(pairs[k].value - Complex(1, 0));
    if (d < dist) {
      dist = d;
      drop = static_cast<int>(k);
    }
  }
  out.stable = true;
  for (size_t k = 0; k < pairs.size(); ++k) {
    if (static_cast<int>(k) == drop) continue;
    const double mod = std::abs(pairs[k].value);
    out.max_transverse_modulus = std::max(out.max_transverse_modulus, mod);
    if (mod >= 1.0) out.stable = false;
  }
  return out;
}

double cow_herd_critical_sigma(const std::map<std::string, double>& params,
                               const Mat& w, double lo, double hi,
                               double tol) {
  auto excess = [&](double s) {
    return cow_herd_monodromy(params, w, s).max_transverse_modulus - 1.0;
  };
  double flo = excess(lo), fhi = excess(hi);
  if (flo <= 0 || fhi >= 0) {
    throw NumericError(
        "cow_herd_critical_sigma: bracket does not straddle the transition");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (excess(mid) > 0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace pwlnet
