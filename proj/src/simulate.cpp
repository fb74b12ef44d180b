#include "pwlnet/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace pwlnet {

namespace {

// Exact affine propagation x' = A x + b by an adaptive-substep Taylor sum;
// substeps keep ||A|| h <= 0.5 so the series converges to round-off.
class ExactAffine {
 public:
  ExactAffine() = default;
  ExactAffine(Mat A, Vec b) : A_(std::move(A)), b_(std::move(b)) {
    scale_ = 0;
    for (Eigen::Index i = 0; i < A_.rows(); ++i) {
      scale_ = std::max(scale_, A_.row(i).cwiseAbs().sum());
    }
  }

  Vec advance(const Vec& x, double dt) const {
    if (dt == 0) return x;
    int steps = 1;
    const double need = scale_ * std::abs(dt);
    if (need > 0.5) steps = static_cast<int>(std::ceil(need / 0.5));
    const double h = dt / steps;
    Vec y = x;
    for (int s = 0; s < steps; ++s) y = step(y, h);
    return y;
  }

  Vec field(const Vec& x) const { return A_ * x + b_; }
  const Mat& A() const { return A_; }
  const Vec& b() const { return b_; }

 private:
  Vec step(const Vec& x, double h) const {
    Vec sum = x;
    Vec term = h * (A_ * x + b_);
    sum += term;
    for (int k = 2; k <= 80; ++k) {
      term = (h / k) * (A_ * term);
      sum += term;
      if (term.lpNorm<Eigen::Infinity>() <=
          1e-16 * std::max(1.0, sum.lpNorm<Eigen::Infinity>())) {
        break;
      }
    }
    return sum;
  }

  Mat A_;
  Vec b_;
  double scale_ = 0;
};

struct SimState {
  std::shared_ptr<const PwlSystem> sys;
  int N = 0;
  int m = 0;
  Mat w;
  double sigma = 0;
  Mat coupling;           // constant contribution to the stacked A
  Vec current_drive;      // forcing value over the active window
  std::vector<int> zone;  // per node
  std::vector<int> sliding;  // manifold id or -1
  bool dirty = true;
  ExactAffine prop;

  const ZoneDynamics& zdyn(int z) const {
    return sys->zones[static_cast<size_t>(z)];
  }
  const Manifold& mfd(int k) const {
    return sys->manifolds[static_cast<size_t>(k)];
  }

  void rebuild(const Vec& forcing_drive) {
    current_drive = forcing_drive;
    const int nm = N * m;
    Mat A = Mat::Zero(nm, nm);
    Vec b = Vec::Zero(nm);
    for (int i = 0; i < N; ++i) {
      const auto& z = zdyn(zone[static_cast<size_t>(i)]);
      A.block(i * m, i * m, m, m) = z.A;
      b.segment(i * m, m) = z.b + forcing_drive;
    }
    A += coupling;
    // Sliding nodes: replace the node's rows with the projected field that
    // stays tangent to the manifold (valid because the adjacent zones share
    // their A matrix).
    for (int i = 0; i < N; ++i) {
      const int k = sliding[static_cast<size_t>(i)];
      if (k < 0) continue;
      const auto& mf = mfd(k);
      const int up = mf.target_up >= 0 ? mf.target_up : 0;
      const int down = mf.target_down >= 0 ? mf.target_down : 1;
      const Vec d = zdyn(up).b - zdyn(down).b;  // f1 - f2, state-independent
      const double nd = mf.normal.dot(d);
      if (std::abs(nd) < 1e-14) {
        throw NumericError("simulate: degenerate sliding manifold");
      }
      if ((zdyn(up).A - zdyn(down).A).lpNorm<Eigen::Infinity>() > 1e-12) {
        throw NumericError(
            "simulate: sliding with zone-dependent A is unsupported");
      }
      const Mat P =
          Mat::Identity(m, m) - d * mf.normal.transpose() / nd;
      A.middleRows(i * m, m) = P * A.middleRows(i * m, m);
      b.segment(i * m, m) = P * b.segment(i * m, m);
    }
    prop = ExactAffine(std::move(A), std::move(b));
    dirty = false;
  }

  // Node-local field split into the zone part and the coupling remainder.
  // The coupling term comes from the unprojected coupling matrix so that
  // sliding projections do not leak into side-field queries.
  Vec node_field(const Vec& X, int i) const {
    return prop.field(X).segment(i * m, m);
  }
  Vec node_field_in_zone(const Vec& X, int i, int z) const {
    const Vec x = X.segment(i * m, m);
    Vec f = zdyn(z).A * x + zdyn(z).b + coupling.middleRows(i * m, m) * X;
    if (current_drive.size() == m) f += current_drive;
    return f;
  }
};

Mat coupling_matrix(const PwlSystem& sys, const Network& net, double sigma,
                    const CouplingSpec& coupling) {
  const int m = sys.dimension;
  const int N = net.N;
  Mat H;
  bool laplacian = false;
  switch (coupling.kind) {
    case CouplingKind::LinearVoltageDiffusive:
      H = Mat::Zero(m, m);
      H(coupling.v_index, coupling.v_index) = 1.0;
      laplacian = true;
      break;
    case CouplingKind::SynapticAlpha:
      H = Mat::Zero(m, m);
      H(coupling.v_index, m - 2) = 1.0;  // v driven by the presynaptic s
      laplacian = false;
      break;
    case CouplingKind::CustomPairwise:
      H = coupling.H;
      laplacian = coupling.laplacian_form;
      break;
    case CouplingKind::Biharmonic:
      throw ValidationError(
          "simulate: biharmonic coupling is phase-only; use phase_network_sim");
  }
  if (H.rows() != m || H.cols() != m) {
    throw DimensionError("simulate: coupling feedthrough must be m x m");
  }
  Mat big = Mat::Zero(N * m, N * m);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      if (net.w(i, j) != 0.0) {
        big.block(i * m, j * m, m, m) = sigma * net.w(i, j) * H;
      }
    }
    if (laplacian) {
      big.block(i * m, i * m, m, m) -= sigma * net.w.row(i).sum() * H;
    }
  }
  return big;
}

double bisect_event(const ExactAffine& prop, const Vec& Xa, double width,
                    const std::function<double(const Vec&)>& g, double ga,
                    double gb, double time_tol) {
  double a = 0, b = width, fa = ga, fb = gb;
  (void)fb;
  for (int it = 0; it < 120 && (b - a) > time_tol; ++it) {
    const double mid = 0.5 * (a + b);
    const double fm = g(prop.advance(Xa, mid));
    if (fm == 0.0) return mid;
    if ((fm > 0) == (fa > 0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

struct Candidate {
  double t = 0;  // absolute time
  int node = 0;
  int manifold = 0;   // or the sliding manifold for exits
  bool sliding_exit = false;
  int exit_side = 0;  // +1 leaves into the up zone, -1 into the down zone
};

}  // namespace

Trajectory simulate_network(std::shared_ptr<const PwlSystem> sys_in,
                            const Network& net, double sigma,
                            const CouplingSpec& coupling, const Mat& x0_in,
                            const SimOptions& opts) {
  if (net.N != static_cast<int>(x0_in.cols())) {
    throw DimensionError("simulate: x0 needs one column per node");
  }
  std::shared_ptr<const PwlSystem> sys = sys_in;
  Mat x0 = x0_in;
  if (coupling.kind == CouplingKind::SynapticAlpha) {
    if (sys->dimension == x0.rows()) {
      Mat ext = Mat::Zero(sys->dimension + 2, net.N);
      ext.topRows(sys->dimension) = x0;
      x0 = ext;
    }
    sys = std::make_shared<PwlSystem>(
        with_alpha_synapse(*sys_in, coupling.alpha, 0.0, coupling.v_index));
  }
  if (x0.rows() != sys->dimension) {
    throw DimensionError("simulate: x0 row count does not match the model");
  }

  SimState st;
  st.sys = sys;
  st.N = net.N;
  st.m = sys->dimension;
  st.w = net.w;
  st.sigma = sigma;
  st.coupling = coupling_matrix(*sys, net, sigma, coupling);
  st.zone.resize(static_cast<size_t>(net.N));
  st.sliding.assign(static_cast<size_t>(net.N), -1);

  Vec X(net.N * sys->dimension);
  for (int i = 0; i < net.N; ++i) X.segment(i * st.m, st.m) = x0.col(i);

  if (!opts.initial_zones.empty()) {
    if (static_cast<int>(opts.initial_zones.size()) != net.N) {
      throw ValidationError("simulate: initial_zones needs one entry per node");
    }
    st.zone = opts.initial_zones;
  } else {
    if (sys->smoothness == SmoothnessClass::Automaton) {
      throw ValidationError(
          "simulate: automaton systems need explicit initial zones");
    }
    for (int i = 0; i < net.N; ++i) {
      st.zone[static_cast<size_t>(i)] = zone_of(*sys, Vec(x0.col(i)));
    }
  }

  Trajectory traj;
  traj.nodes = net.N;
  traj.dim = st.m;
  traj.spikes.resize(static_cast<size_t>(net.N));

  const int K = sys->num_manifolds();
  auto monitored = [&](int node, int k) {
    const auto& mf = st.mfd(k);
    if (st.sliding[static_cast<size_t>(node)] == k) return false;
    if (mf.detector && !mf.fires && mf.jump.is_identity()) return false;
    return true;
  };

  auto eval_h = [&](const Vec& state, Mat* hv, Mat* sv) {
    for (int i = 0; i < st.N; ++i) {
      const Vec xi = state.segment(i * st.m, st.m);
      for (int k = 0; k < K; ++k) {
        (*hv)(i, k) = st.mfd(k).h(xi);
      }
      const int sk = st.sliding[static_cast<size_t>(i)];
      if (sk >= 0) {
        const auto& mf = st.mfd(sk);
        const int up = mf.target_up >= 0 ? mf.target_up : 0;
        const int down = mf.target_down >= 0 ? mf.target_down : 1;
        (*sv)(i, 0) = mf.normal.dot(st.node_field_in_zone(state, i, up));
        (*sv)(i, 1) = mf.normal.dot(st.node_field_in_zone(state, i, down));
      } else {
        (*sv)(i, 0) = (*sv)(i, 1) = 0.0;
      }
    }
  };

  long event_count = 0;
  // Last processed event time per (node, manifold); candidates within a
  // hair of it are bisection-overshoot echoes, not new events.
  Mat last_event = Mat::Constant(st.N, K, -1e300);
  const double echo_window = 1e-11;

  // Advances X from ta to tb, handling events; records nothing.
  std::function<void(double, double)> advance_span = [&](double ta, double tb) {
    double t = ta;
    while (t < tb - 1e-15 * std::max(1.0, tb)) {
      Vec drive = Vec::Zero(st.m);
      double seg_end = tb;
      if (!sys->forcing.empty()) {
        double local = std::fmod(t, sys->forcing.period);
        if (local < 0) local += sys->forcing.period;
        const int seg = sys->forcing.segment_at(local);
        drive = sys->forcing.values.col(seg);
        const double brk =
            (seg + 1 < static_cast<int>(sys->forcing.breaks.size()))
                ? sys->forcing.breaks[static_cast<size_t>(seg) + 1]
                : sys->forcing.period;
        seg_end = std::min(tb, t + (brk - local));
        if (seg_end <= t) seg_end = tb;
      }
      if (st.dirty || !sys->forcing.empty()) st.rebuild(drive);

      const double width = seg_end - t;
      const int pieces = std::max(1, opts.bracket_factor);
      const double h_sub = width / pieces;
      Mat h_prev(st.N, K), h_cur(st.N, K), s_prev(st.N, 2), s_cur(st.N, 2);
      eval_h(X, &h_prev, &s_prev);
      Vec Xc = X;
      double tc = t;
      bool had_event = false;

      for (int p = 0; p < pieces; ++p) {
        Vec Xn = st.prop.advance(Xc, h_sub);
        eval_h(Xn, &h_cur, &s_cur);
        std::vector<Candidate> cands;
        for (int i = 0; i < st.N; ++i) {
          for (int k = 0; k < K; ++k) {
            if (!monitored(i, k)) continue;
            const double ga = h_prev(i, k), gb = h_cur(i, k);
            if (ga == 0.0 || ga * gb >= 0) continue;
            const int node = i, mfid = k;
            auto g = [&st, node, mfid](const Vec& s) {
              return st.mfd(mfid).h(s.segment(node * st.m, st.m));
            };
            const double tau = bisect_event(st.prop, Xc, h_sub, g, ga, gb,
                                            opts.event_time_tol);
            if (tc + tau <= last_event(i, k) + echo_window) continue;
            cands.push_back({tc + tau, i, k, false, 0});
          }
          if (st.sliding[static_cast<size_t>(i)] >= 0) {
            for (int side = 0; side < 2; ++side) {
              const double ga = s_prev(i, side), gb = s_cur(i, side);
              if (ga == 0.0 || ga * gb >= 0) continue;
              const int node = i, sd = side;
              const int sk = st.sliding[static_cast<size_t>(i)];
              const auto& mf = st.mfd(sk);
              const int zup = mf.target_up >= 0 ? mf.target_up : 0;
              const int zdown = mf.target_down >= 0 ? mf.target_down : 1;
              auto g = [&st, node, sd, sk, zup, zdown](const Vec& s) {
                const auto& mfl = st.mfd(sk);
                return mfl.normal.dot(st.node_field_in_zone(
                    s, node, sd == 0 ? zup : zdown));
              };
              const double tau = bisect_event(st.prop, Xc, h_sub, g, ga, gb,
                                              opts.event_time_tol);
              if (tc + tau <= last_event(i, sk) + echo_window) continue;
              cands.push_back({tc + tau, i, sk, true, side == 0 ? +1 : -1});
            }
          }
        }
        if (!cands.empty()) {
          double t_star = std::numeric_limits<double>::infinity();
          for (const auto& c : cands) t_star = std::min(t_star, c.t);
          X = st.prop.advance(Xc, t_star - tc);
          t = t_star;
          for (const auto& c : cands) {
            if (c.t - t_star > opts.event_group_tol) continue;
            if (++event_count > opts.max_events) {
              throw NumericError(
                  "simulate: event cap exceeded (Zeno-like accumulation)");
            }
            TrajectoryEvent ev;
            ev.time = t_star;
            ev.node = c.node;
            ev.manifold = c.manifold;
            last_event(c.node, c.manifold) = t_star;
            if (!c.sliding_exit) {
              // Snap the node onto the manifold it just reached.
              const auto& mfs = st.mfd(c.manifold);
              Vec xi = X.segment(c.node * st.m, st.m);
              xi -= mfs.normal * (mfs.h(xi) / mfs.normal.squaredNorm());
              X.segment(c.node * st.m, st.m) = xi;
            }
            ev.pre_state = X.segment(c.node * st.m, st.m);
            const int zi = st.zone[static_cast<size_t>(c.node)];
            if (c.sliding_exit) {
              const auto& mf = st.mfd(c.manifold);
              st.sliding[static_cast<size_t>(c.node)] = -1;
              st.zone[static_cast<size_t>(c.node)] =
                  c.exit_side > 0
                      ? (mf.target_up >= 0 ? mf.target_up : 0)
                      : (mf.target_down >= 0 ? mf.target_down : 1);
              ev.exited_sliding = true;
              ev.post_state = ev.pre_state;
            } else {
              const auto& mf = st.mfd(c.manifold);
              const Vec vel = st.node_field(X, c.node);
              const int dir = mf.normal.dot(vel) > 0 ? +1 : -1;
              ev.direction = dir;
              const bool fire_ok = mf.fires;
              if (mf.detector) {
                ev.post_state = ev.pre_state;
                if (dir > 0 && !mf.jump.is_identity()) {
                  ev.post_state = mf.jump.apply(ev.pre_state);
                  X.segment(c.node * st.m, st.m) = ev.post_state;
                }
                if (fire_ok && dir > 0) {
                  traj.spikes[static_cast<size_t>(c.node)].push_back(t_star);
                }
              } else if (mf.jump.is_identity() &&
                         sys->smoothness == SmoothnessClass::Filippov) {
                const int zup = mf.target_up >= 0 ? mf.target_up : 0;
                const int zdown = mf.target_down >= 0 ? mf.target_down : 1;
                const double fu =
                    mf.normal.dot(st.node_field_in_zone(X, c.node, zup));
                const double fd =
                    mf.normal.dot(st.node_field_in_zone(X, c.node, zdown));
                if (fu < 0 && fd > 0) {
                  st.sliding[static_cast<size_t>(c.node)] = c.manifold;
                  st.zone[static_cast<size_t>(c.node)] = zdown;
                  ev.entered_sliding = true;
                } else {
                  st.zone[static_cast<size_t>(c.node)] =
                      sys->event_target(c.manifold, dir, zi);
                }
                ev.post_state = ev.pre_state;
              } else {
                ev.post_state = mf.jump.is_identity()
                                    ? ev.pre_state
                                    : mf.jump.apply(ev.pre_state);
                X.segment(c.node * st.m, st.m) = ev.post_state;
                st.zone[static_cast<size_t>(c.node)] =
                    sys->event_target(c.manifold, dir, zi);
                if (fire_ok) {
                  traj.spikes[static_cast<size_t>(c.node)].push_back(t_star);
                }
              }
            }
            traj.events.push_back(std::move(ev));
          }
          st.dirty = true;
          had_event = true;
          break;
        }
        Xc = Xn;
        tc += h_sub;
        h_prev.swap(h_cur);
        s_prev.swap(s_cur);
      }
      if (!had_event) {
        X = Xc;
        t = seg_end;
      }
    }
  };

  traj.times.push_back(0.0);
  traj.states.push_back(X);
  const int steps = static_cast<int>(std::ceil(opts.t_max / opts.dt_out));
  for (int s = 0; s < steps; ++s) {
    const double t0 = s * opts.dt_out;
    const double t1 = std::min(opts.t_max, (s + 1) * opts.dt_out);
    advance_span(t0, t1);
    traj.times.push_back(t1);
    traj.states.push_back(X);
    if (t1 >= opts.t_max) break;
  }
  return traj;
}

Trajectory simulate_single(std::shared_ptr<const PwlSystem> sys, const Vec& x0,
                           const SimOptions& opts) {
  Network net;
  net.N = 1;
  net.w = Mat::Zero(1, 1);
  net.kind = "single";
  return simulate_network(std::move(sys), net, 0.0, CouplingSpec::diffusive(),
                          Mat(x0), opts);
}

HarvestedCycle harvest_orbit_cycle(std::shared_ptr<const PwlSystem> sys,
                                   const Vec& x0, double settle_time,
                                   double record_time, int initial_zone,
                                   double dt_out) {
  SimOptions opts;
  opts.t_max = settle_time + record_time;
  opts.dt_out = dt_out;
  if (initial_zone >= 0) opts.initial_zones = {initial_zone};
  Trajectory traj = simulate_single(sys, x0, opts);

  // Non-detector events after the transient, annotated with zone info by
  // replaying the target logic.
  struct Ev {
    double t;
    int manifold;
    int direction;
    int zone_after;
    Vec post;
  };
  std::vector<Ev> evs;
  int zone = initial_zone >= 0 ? initial_zone : zone_of(*sys, x0);
  for (const auto& e : traj.events) {
    const auto& mf = sys->manifolds[static_cast<size_t>(e.manifold)];
    if (mf.detector) continue;
    // Direction from the pre-event velocity in the current zone.
    const auto& z = sys->zones[static_cast<size_t>(zone)];
    const double speed = mf.normal.dot(z.A * e.pre_state + z.b);
    const int dir = speed > 0 ? +1 : -1;
    zone = sys->event_target(e.manifold, dir, zone);
    if (e.time >= settle_time) {
      evs.push_back({e.time, e.manifold, dir, zone, e.post_state});
    }
  }
  if (evs.size() < 2) {
    throw NumericError("harvest_orbit_cycle: not enough events recorded");
  }

  auto sig_equal = [&](const Ev& a, const Ev& b) {
    return a.manifold == b.manifold && a.direction == b.direction &&
           a.zone_after == b.zone_after;
  };
  const Ev& last = evs.back();
  for (int back = static_cast<int>(evs.size()) - 2; back >= 0; --back) {
    if (!sig_equal(evs[static_cast<size_t>(back)], last)) continue;
    const int L = static_cast<int>(evs.size()) - 1 - back;
    // Verify one more repetition when available.
    bool ok = true;
    for (int j = back; j + L < static_cast<int>(evs.size()); ++j) {
      if (!sig_equal(evs[static_cast<size_t>(j)],
                     evs[static_cast<size_t>(j + L)])) {
        ok = false;
        break;
      }
    }
    if (back - L >= 0) {
      for (int j = back - L; j < back && ok; ++j) {
        if (!sig_equal(evs[static_cast<size_t>(j)],
                       evs[static_cast<size_t>(j + L)])) {
          ok = false;
        }
      }
    }
    if (!ok) continue;
    HarvestedCycle cyc;
    const int first = back;
    cyc.entry_state = evs[static_cast<size_t>(first)].post;
    cyc.period = last.t - evs[static_cast<size_t>(first)].t;
    for (int j = first + 1; j <= first + L; ++j) {
      const auto& e = evs[static_cast<size_t>(j)];
      OrbitEvent oe;
      oe.zone = evs[static_cast<size_t>(j - 1)].zone_after;
      oe.manifold = e.manifold;
      oe.direction = e.direction;
      cyc.tmpl.events.push_back(oe);
      cyc.times.push_back(e.t - evs[static_cast<size_t>(j - 1)].t);
    }
    return cyc;
  }
  throw NumericError("harvest_orbit_cycle: no repeating event cycle found");
}

// ---------------------------------------------------------------------------
// Phase networks
// ---------------------------------------------------------------------------

PhaseTrajectory phase_network_sim(const FourierSeries& H, const Network& net,
                                  double sigma, double omega, const Vec& theta0,
                                  double t_max, double dt_out) {
  const int N = net.N;
  if (theta0.size() != N) throw DimensionError("phase sim: theta0 size mismatch");

  double max_dH = 0;
  for (int n = -H.n_max; n <= H.n_max; ++n) {
    max_dH += std::abs(n) * std::abs(H.coeff(n));
  }
  double row_abs = 0;
  for (int i = 0; i < N; ++i) {
    row_abs = std::max(row_abs, net.w.row(i).cwiseAbs().sum());
  }
  const double dt =
      std::min(1e-2, 2.0 * M_PI /
                         (200.0 * omega * (1.0 + std::abs(sigma) * row_abs *
                                                     max_dH)));

  const bool uniform_global =
      (net.w.array() - 1.0 / N).abs().maxCoeff() < 1e-14;

  auto deriv = [&](const Vec& th) -> Vec {
    Vec d = Vec::Constant(N, omega);
    if (uniform_global) {
      // Mean-field evaluation through the harmonic order parameters.
      for (int n = 1; n <= H.n_max; ++n) {
        Complex Zn = 0;
        for (int j = 0; j < N; ++j) Zn += std::exp(Complex(0, n * th(j)));
        Zn /= static_cast<double>(N);
        const Complex cn = H.coeff(n);
        const Complex cmn = H.coeff(-n);
        for (int i = 0; i < N; ++i) {
          const Complex e = std::exp(Complex(0, -n * th(i)));
          d(i) += sigma * (cn * Zn * e + cmn * std::conj(Zn * e)).real();
        }
      }
      for (int i = 0; i < N; ++i) d(i) += sigma * H.coeff(0).real();
    } else {
      for (int i = 0; i < N; ++i) {
        double acc = 0;
        for (int j = 0; j < N; ++j) {
          if (net.w(i, j) != 0.0) acc += net.w(i, j) * H.eval(th(j) - th(i));
        }
        d(i) += sigma * acc;
      }
    }
    return d;
  };

  PhaseTrajectory out;
  Vec th = theta0;
  double t = 0;
  double next_out = 0;
  while (t <= t_max + 1e-12) {
    if (t >= next_out - 1e-12) {
      out.times.push_back(t);
      Vec wrapped(N);
      for (int i = 0; i < N; ++i) wrapped(i) = wrap_two_pi(th(i));
      out.phases.push_back(wrapped);
      next_out += dt_out;
    }
    const double h = std::min(dt, t_max - t + 1e-15);
    if (h <= 1e-15) break;
    Vec k1 = deriv(th);
    Vec k2 = deriv(th + 0.5 * h * k1);
    Vec k3 = deriv(th + 0.5 * h * k2);
    Vec k4 = deriv(th + h * k3);
    th += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
  }
  return out;
}

double order_parameter(const Vec& phases) {
  Complex acc = 0;
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    acc += std::exp(Complex(0, phases(i)));
  }
  return std::abs(acc) / static_cast<double>(phases.size());
}

Mat fc_matrix(const PhaseTrajectory& traj, double burn_in) {
  if (traj.times.empty()) throw ValidationError("fc_matrix: empty trajectory");
  if (traj.times.back() <= burn_in) {
    throw ValidationError("fc_matrix: trajectory shorter than burn-in");
  }
  const int N = static_cast<int>(traj.phases.front().size());
  Mat acc = Mat::Zero(N, N);
  long count = 0;
  for (size_t s = 0; s < traj.times.size(); ++s) {
    if (traj.times[s] < burn_in) continue;
    const Vec& th = traj.phases[s];
    for (int i = 0; i < N; ++i) {
      for (int j = i; j < N; ++j) {
        acc(i, j) += std::cos(th(i) - th(j));
      }
    }
    ++count;
  }
  Mat fc(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = i; j < N; ++j) {
      fc(i, j) = fc(j, i) = std::abs(acc(i, j) / static_cast<double>(count));
    }
    fc(i, i) = 1.0;
  }
  return fc;
}

Vec phases_from_states(const Trajectory& traj, int sample, const Vec& center,
                       int v_index, int w_index) {
  Vec out(traj.nodes);
  for (int i = 0; i < traj.nodes; ++i) {
    const Vec x = traj.node_state(sample, i);
    out(i) = wrap_two_pi(
        std::atan2(x(w_index) - center(1), x(v_index) - center(0)));
  }
  return out;
}

double sync_error(const Trajectory& traj, int sample) {
  const Vec& X = traj.states.at(static_cast<size_t>(sample));
  Vec mean = Vec::Zero(traj.dim);
  for (int i = 0; i < traj.nodes; ++i) mean += X.segment(i * traj.dim, traj.dim);
  mean /= traj.nodes;
  double worst = 0;
  for (int i = 0; i < traj.nodes; ++i) {
    worst = std::max(worst,
                     (X.segment(i * traj.dim, traj.dim) - mean).norm());
  }
  return worst;
}

void export_trajectory_csv(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("export_trajectory_csv: cannot open " + path);
  out << "t";
  for (int i = 0; i < traj.nodes; ++i) {
    for (int j = 0; j < traj.dim; ++j) out << ",n" << i << "_x" << j;
  }
  out << "\n";
  out.precision(15);
  for (size_t s = 0; s < traj.times.size(); ++s) {
    out << traj.times[s];
    for (Eigen::Index k = 0; k < traj.states[s].size(); ++k) {
      out << "," << traj.states[s](k);
    }
    out << "\n";
  }
}

void export_spikes_csv(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("export_spikes_csv: cannot open " + path);
  out << "node,time\n";
  out.precision(15);
  for (size_t i = 0; i < traj.spikes.size(); ++i) {
    for (double t : traj.spikes[i]) out << i << "," << t << "\n";
  }
}

}  // namespace pwlnet
