#include "pwlnet/orbit.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace pwlnet {

namespace {

Mat tangent_basis(const Vec& normal) {
  Eigen::HouseholderQR<Mat> qr{Mat(normal)};
  Mat q = qr.householderQ();
  return q.rightCols(normal.size() - 1);
}

void check_template(const PwlSystem& sys, const OrbitTemplate& tmpl) {
  if (tmpl.events.empty()) {
    throw ValidationError("orbit template: empty event list");
  }
  const int M = tmpl.size();
  for (int i = 0; i < M; ++i) {
    const auto& ev = tmpl.events[static_cast<size_t>(i)];
    if (ev.zone < 0 || ev.zone >= sys.num_zones()) {
      throw ValidationError("orbit template: unknown zone id " +
                            std::to_string(ev.zone));
    }
    if (ev.manifold < 0 || ev.manifold >= sys.num_manifolds()) {
      throw ValidationError("orbit template: unknown manifold id " +
                            std::to_string(ev.manifold));
    }
    if (sys.manifolds[static_cast<size_t>(ev.manifold)].detector) {
      throw ValidationError("orbit template: manifold " +
                            std::to_string(ev.manifold) + " is a detector");
    }
    // Cyclic consistency: each event must lead into the next segment's zone.
    const auto& next = tmpl.events[static_cast<size_t>((i + 1) % M)];
    const int target = sys.event_target(ev.manifold, ev.direction, ev.zone);
    if (target != next.zone) {
      throw ValidationError(
          "orbit template: event " + std::to_string(i) + " (manifold " +
          std::to_string(ev.manifold) + ", direction " +
          std::to_string(ev.direction) + ") leads to zone " +
          std::to_string(target) + " but the next segment declares zone " +
          std::to_string(next.zone));
    }
  }
}

struct Propagation {
  std::vector<Vec> entries;      // entry state per segment
  std::vector<Vec> exits;        // pre-event state per segment
  Vec closure_state;             // post-jump state after the final event
};

Propagation propagate(const PwlSystem& sys, const OrbitTemplate& tmpl,
                      const Vec& x0, const Vec& times) {
  Propagation out;
  const int M = tmpl.size();
  out.entries.resize(static_cast<size_t>(M));
  out.exits.resize(static_cast<size_t>(M));
  Vec x = x0;
  for (int i = 0; i < M; ++i) {
    const auto& ev = tmpl.events[static_cast<size_t>(i)];
    out.entries[static_cast<size_t>(i)] = x;
    x = flow(sys, ev.zone, x, times(i));
    out.exits[static_cast<size_t>(i)] = x;
    const auto& mf = sys.manifolds[static_cast<size_t>(ev.manifold)];
    if (!mf.jump.is_identity()) x = mf.jump.apply(x);
  }
  out.closure_state = x;
  return out;
}

// Multiple-shooting polish for segments whose propagator growth exceeds e^3:
// interior matching states join the unknowns so no residual is evaluated
// through more than one chunk of growth. Refines entries, times and events
// in place; benign orbits are untouched.
void refine_long_segments(PeriodicOrbit& orbit, const OrbitOptions& opts) {
  (void)opts;
  const PwlSystem& sys = *orbit.system;
  const int M = orbit.num_segments();
  const int m = sys.dimension;
  std::vector<int> nch(static_cast<size_t>(M), 1);
  int n_interior = 0;
  for (int i = 0; i < M; ++i) {
    const Mat& A = sys.zones[static_cast<size_t>(orbit.segments[i].zone)].A;
    double amax = -1e300, amin = 1e300;
    for (const auto& p : eig(A)) {
      amax = std::max(amax, p.value.real());
      amin = std::min(amin, p.value.real());
    }
    const double rate = std::max({0.0, amax, -amin});
    const double g = rate * orbit.segments[static_cast<size_t>(i)].time_of_flight;
    if (g > 3.0) {
      nch[static_cast<size_t>(i)] =
          std::min(64, static_cast<int>(std::ceil(g / 3.0)));
    }
    n_interior += nch[static_cast<size_t>(i)] - 1;
  }
  if (n_interior == 0) return;

  OrbitTemplate tmpl;
  for (int i = 0; i < M; ++i) {
    tmpl.events.push_back({orbit.segments[static_cast<size_t>(i)].zone,
                           orbit.events[static_cast<size_t>(i)].manifold,
                           orbit.events[static_cast<size_t>(i)].direction});
  }
  Vec base;
  Mat frame;
  entry_frame(sys, tmpl, &base, &frame);

  const int nu = M + (m - 1) + m * n_interior;
  Vec u0(nu);
  for (int i = 0; i < M; ++i) {
    u0(i) = orbit.segments[static_cast<size_t>(i)].time_of_flight;
  }
  u0.segment(M, m - 1) =
      frame.transpose() * (orbit.segments[0].entry_state - base);
  {
    int ofs = M + m - 1;
    for (int i = 0; i < M; ++i) {
      const auto& seg = orbit.segments[static_cast<size_t>(i)];
      const double dt = seg.time_of_flight / nch[static_cast<size_t>(i)];
      for (int c = 1; c < nch[static_cast<size_t>(i)]; ++c) {
        u0.segment(ofs, m) = flow(sys, seg.zone, seg.entry_state, c * dt);
        ofs += m;
      }
    }
  }

  RootProblem problem;
  problem.dimension = nu;
  problem.x0 = u0;
  problem.residual = [&](const Vec& u) -> Vec {
    Vec r(nu);
    Vec x = base + frame * u.segment(M, m - 1);
    const Vec x0 = x;
    int ofs = M + m - 1;
    int ridx = 0;
    for (int i = 0; i < M; ++i) {
      const auto& ev = tmpl.events[static_cast<size_t>(i)];
      const double dt = u(i) / nch[static_cast<size_t>(i)];
      for (int c = 1; c < nch[static_cast<size_t>(i)]; ++c) {
        Vec x_end = flow(sys, ev.zone, x, dt);
        r.segment(ridx, m) = x_end - u.segment(ofs, m);
        x = u.segment(ofs, m);
        ofs += m;
        ridx += m;
      }
      Vec exit = flow(sys, ev.zone, x, dt);
      r(ridx++) = sys.manifolds[static_cast<size_t>(ev.manifold)].h(exit);
      const auto& mf = sys.manifolds[static_cast<size_t>(ev.manifold)];
      x = mf.jump.is_identity() ? exit : mf.jump.apply(exit);
    }
    r.segment(ridx, m - 1) = frame.transpose() * (x - x0);
    return r;
  };

  RootOptions ropts;
  ropts.best_effort = true;
  Vec sol = solve_root(problem, 1e-14, ropts);

  // Rebuild segment and event data from the refined solution.
  Vec x = base + frame * sol.segment(M, m - 1);
  int ofs = M + m - 1;
  double t_acc = 0;
  for (int i = 0; i < M; ++i) {
    auto& seg = orbit.segments[static_cast<size_t>(i)];
    auto& ev = orbit.events[static_cast<size_t>(i)];
    const auto& zone = sys.zones[static_cast<size_t>(seg.zone)];
    const auto& mf = sys.manifolds[static_cast<size_t>(ev.manifold)];
    const int n = nch[static_cast<size_t>(i)];
    const double dt = sol(i) / n;
    seg.entry_state = x;
    seg.time_of_flight = sol(i);
    seg.start_time = t_acc;
    seg.propagator = expm(zone.A, sol(i));
    seg.chunk_states.clear();
    seg.chunk_len = dt;
    if (n > 1) {
      seg.chunk_states.push_back(x);
      for (int c = 1; c < n; ++c) {
        seg.chunk_states.push_back(sol.segment(ofs, m));
        ofs += m;
      }
      x = seg.chunk_states.back();
    }
    Vec exit = flow(sys, seg.zone, x, dt);
    ev.time = t_acc + sol(i);
    ev.pre_state = exit;
    ev.post_state = mf.jump.is_identity() ? exit : mf.jump.apply(exit);
    ev.pre_velocity = zone.A * exit + zone.b;
    const int next_zone =
        orbit.segments[static_cast<size_t>((i + 1) % M)].zone;
    const auto& nz = sys.zones[static_cast<size_t>(next_zone)];
    ev.post_velocity = nz.A * ev.post_state + nz.b;
    const double speed = mf.normal.dot(ev.pre_velocity);
    const Mat dj = mf.jump.is_identity() ? Mat::Identity(m, m) : mf.jump.M;
    ev.saltation = dj + (ev.post_velocity - dj * ev.pre_velocity) *
                            mf.normal.transpose() / speed;
    x = ev.post_state;
    t_acc += sol(i);
  }
  orbit.period = t_acc;
}

}  // namespace

void entry_frame(const PwlSystem& sys, const OrbitTemplate& tmpl, Vec* base,
                 Mat* frame) {
  const auto& last = tmpl.events.back();
  const auto& mf = sys.manifolds[static_cast<size_t>(last.manifold)];
  const Vec z0 = mf.offset * mf.normal / mf.normal.squaredNorm();
  Mat tangent = tangent_basis(mf.normal);
  Vec b = z0;
  Mat dirs = tangent;
  if (!mf.jump.is_identity()) {
    b = mf.jump.apply(z0);
    dirs = mf.jump.M * tangent;
  }
  // Orthonormalize the direction set; a rank drop means the jump collapses
  // the manifold image and the template cannot pin the initial state.
  Eigen::ColPivHouseholderQR<Mat> qr(dirs);
  if (qr.rank() < dirs.cols()) {
    throw ValidationError("orbit template: final jump collapses the entry set");
  }
  Mat q = qr.householderQ();
  *frame = q.leftCols(dirs.cols());
  *base = b;
}

PeriodicOrbit find_periodic_orbit(std::shared_ptr<const PwlSystem> sys,
                                  const OrbitTemplate& tmpl,
                                  const std::vector<double>& times_guess,
                                  const Vec& state_guess,
                                  const OrbitOptions& opts) {
  check_template(*sys, tmpl);
  Vec base;
  Mat frame;
  entry_frame(*sys, tmpl, &base, &frame);
  Vec u(tmpl.size() + sys->dimension - 1);
  if (static_cast<int>(times_guess.size()) != tmpl.size()) {
    throw ValidationError("orbit guess: need one time of flight per segment");
  }
  for (int i = 0; i < tmpl.size(); ++i) u(i) = times_guess[static_cast<size_t>(i)];
  u.tail(sys->dimension - 1) = frame.transpose() * (state_guess - base);
  return find_periodic_orbit(std::move(sys), tmpl, u, opts);
}

PeriodicOrbit find_periodic_orbit(std::shared_ptr<const PwlSystem> sys,
                                  const OrbitTemplate& tmpl, const Vec& guess,
                                  const OrbitOptions& opts) {
  check_template(*sys, tmpl);
  if (!sys->forcing.empty()) {
    throw ValidationError(
        "find_periodic_orbit: forced systems are out of scope here; use the "
        "switched-linear machinery");
  }
  const int M = tmpl.size();
  const int m = sys->dimension;
  if (guess.size() != M + m - 1) {
    throw ValidationError("orbit guess: expected " + std::to_string(M + m - 1) +
                          " unknowns, got " + std::to_string(guess.size()));
  }

  Vec base;
  Mat frame;
  entry_frame(*sys, tmpl, &base, &frame);

  auto unpack = [&](const Vec& u) {
    Vec times = u.head(M);
    Vec x0 = base + frame * u.tail(m - 1);
    return std::make_pair(times, x0);
  };

  RootProblem problem;
  problem.dimension = M + m - 1;
  problem.x0 = guess;
  problem.residual = [&](const Vec& u) -> Vec {
    auto [times, x0] = unpack(u);
    Propagation prop = propagate(*sys, tmpl, x0, times);
    Vec r(M + m - 1);
    for (int i = 0; i < M; ++i) {
      const auto& ev = tmpl.events[static_cast<size_t>(i)];
      r(i) = sys->manifolds[static_cast<size_t>(ev.manifold)].h(
          prop.exits[static_cast<size_t>(i)]);
    }
    r.tail(m - 1) = frame.transpose() * (prop.closure_state - x0);
    return r;
  };

  Vec solution = solve_root(problem, opts.residual_tol);
  auto [times, x0] = unpack(solution);

  for (int i = 0; i < M; ++i) {
    if (times(i) <= 0) {
      throw ValidationError(
          "find_periodic_orbit: negative time of flight in segment " +
          std::to_string(i) + "; the template order is wrong");
    }
  }

  Propagation prop = propagate(*sys, tmpl, x0, times);
  if ((prop.closure_state - x0).norm() > opts.closure_tol) {
    throw NumericError("find_periodic_orbit: closure failed");
  }

  PeriodicOrbit orbit;
  orbit.system = sys;
  orbit.period = times.sum();
  double t_acc = 0;
  for (int i = 0; i < M; ++i) {
    const auto& ev = tmpl.events[static_cast<size_t>(i)];
    const auto& zone = sys->zones[static_cast<size_t>(ev.zone)];
    OrbitSegment seg;
    seg.zone = ev.zone;
    seg.entry_state = prop.entries[static_cast<size_t>(i)];
    seg.time_of_flight = times(i);
    seg.start_time = t_acc;
    seg.propagator = expm(zone.A, times(i));
    orbit.segments.push_back(std::move(seg));
    t_acc += times(i);

    const auto& mf = sys->manifolds[static_cast<size_t>(ev.manifold)];
    OrbitEventData ed;
    ed.manifold = ev.manifold;
    ed.direction = ev.direction;
    ed.time = t_acc;
    ed.pre_state = prop.exits[static_cast<size_t>(i)];
    ed.post_state = mf.jump.is_identity() ? ed.pre_state
                                          : mf.jump.apply(ed.pre_state);
    ed.pre_velocity = zone.A * ed.pre_state + zone.b;
    const int next_zone = tmpl.events[static_cast<size_t>((i + 1) % M)].zone;
    const auto& nz = sys->zones[static_cast<size_t>(next_zone)];
    ed.post_velocity = nz.A * ed.post_state + nz.b;

    const double speed = mf.normal.dot(ed.pre_velocity);
    if (ed.direction * speed <= 0) {
      throw ValidationError(
          "find_periodic_orbit: event " + std::to_string(i) +
          " crosses its manifold against the declared direction");
    }
    if (std::abs(speed) <= opts.grazing_tol) {
      throw GrazingError("find_periodic_orbit: grazing event at segment " +
                         std::to_string(i));
    }
    const Mat dj = mf.jump.is_identity() ? Mat::Identity(m, m) : mf.jump.M;
    ed.saltation =
        dj + (ed.post_velocity - dj * ed.pre_velocity) * mf.normal.transpose() /
                 speed;
    orbit.events.push_back(std::move(ed));
  }

  // Mid-segment validity: no undeclared manifold crossing, sampled densely.
  for (int i = 0; i < M; ++i) {
    const auto& seg = orbit.segments[static_cast<size_t>(i)];
    for (int k = 0; k < sys->num_manifolds(); ++k) {
      const auto& mf = sys->manifolds[static_cast<size_t>(k)];
      if (mf.detector) continue;
      double prev = 0;
      bool have_prev = false;
      for (int s = 1; s < opts.validity_samples; ++s) {
        const double t =
            seg.time_of_flight * s / static_cast<double>(opts.validity_samples);
        const double h = mf.h(flow(*sys, seg.zone, seg.entry_state, t));
        if (std::abs(h) < 1e-10) continue;  // touching near an endpoint
        if (have_prev && h * prev < 0) {
          throw ValidationError(
              "find_periodic_orbit: segment " + std::to_string(i) +
              " crosses undeclared manifold " + std::to_string(k) +
              "; the template misses an event");
        }
        prev = h;
        have_prev = true;
      }
    }
  }

  refine_long_segments(orbit, opts);

  orbit.floquet = monodromy(orbit);
  return orbit;
}

int PeriodicOrbit::segment_index(double t) const {
  double local = std::fmod(t, period);
  if (local < 0) local += period;
  int idx = num_segments() - 1;
  while (idx > 0 && local < segments[static_cast<size_t>(idx)].start_time) --idx;
  return idx;
}

Vec PeriodicOrbit::state(double t) const {
  double local = std::fmod(t, period);
  if (local < 0) local += period;
  const int i = segment_index(t);
  const auto& seg = segments[static_cast<size_t>(i)];
  const double tau = local - seg.start_time;
  if (seg.n_chunks() > 1) {
    int j = std::min(seg.n_chunks() - 1,
                     static_cast<int>(std::floor(tau / seg.chunk_len)));
    return flow(*system, seg.zone, seg.chunk_states[static_cast<size_t>(j)],
                tau - j * seg.chunk_len);
  }
  return flow(*system, seg.zone, seg.entry_state, tau);
}

Vec PeriodicOrbit::velocity(double t) const {
  const auto& seg = segments[static_cast<size_t>(segment_index(t))];
  const auto& z = system->zones[static_cast<size_t>(seg.zone)];
  return z.A * state(t) + z.b;
}

int PeriodicOrbit::zone_at(double t) const {
  return segments[static_cast<size_t>(segment_index(t))].zone;
}

Mat saltation_matrix(const PwlSystem& sys, const PeriodicOrbit& orbit,
                     int event_index) {
  const auto& ed = orbit.events.at(static_cast<size_t>(event_index));
  const auto& mf = sys.manifolds[static_cast<size_t>(ed.manifold)];
  const double speed = mf.normal.dot(ed.pre_velocity);
  if (std::abs(speed) <= 1e-8) {
    throw GrazingError("saltation_matrix: transversality violated");
  }
  const Mat dj = mf.jump.is_identity()
                     ? Mat::Identity(sys.dimension, sys.dimension)
                     : mf.jump.M;
  return dj +
         (ed.post_velocity - dj * ed.pre_velocity) * mf.normal.transpose() /
             speed;
}

FloquetData monodromy(const PeriodicOrbit& orbit) {
  const int m = orbit.system->dimension;
  Mat psi = Mat::Identity(m, m);
  for (int i = 0; i < orbit.num_segments(); ++i) {
    psi = orbit.events[static_cast<size_t>(i)].saltation *
          orbit.segments[static_cast<size_t>(i)].propagator * psi;
  }
  FloquetData fd;
  fd.monodromy = psi;
  fd.period = orbit.period;
  auto pairs = eig(psi);
  std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
    return std::abs(a.value) > std::abs(b.value);
  });
  double best = 1e300;
  for (size_t k = 0; k < pairs.size(); ++k) {
    fd.multipliers.push_back(pairs[k].value);
    fd.vectors.push_back(pairs[k].vector);
    const double d = std::abs(pairs[k].value - Complex(1.0, 0.0));
    if (d < best) {
      best = d;
      fd.trivial_index = static_cast<int>(k);
    }
  }
  if (best > 1e-6) {
    throw NumericError(
        "monodromy: no multiplier within 1e-6 of 1 (closest misses by " +
        std::to_string(best) + ")");
  }
  return fd;
}

Complex FloquetData::exponent(int k) const {
  return std::log(multipliers.at(static_cast<size_t>(k))) / period;
}

Complex FloquetData::nontrivial_multiplier() const {
  for (size_t k = 0; k < multipliers.size(); ++k) {
    if (static_cast<int>(k) != trivial_index) return multipliers[k];
  }
  throw NumericError("FloquetData: no nontrivial multiplier");
}

Vec FloquetData::nontrivial_vector() const {
  for (size_t k = 0; k < multipliers.size(); ++k) {
    if (static_cast<int>(k) != trivial_index) {
      VecC v = vectors[k];
      if (v.imag().norm() > 1e-9 * v.norm()) {
        throw NumericError("FloquetData: nontrivial eigenvector is complex");
      }
      Vec rv = v.real();
      return rv / rv.norm();
    }
  }
  throw NumericError("FloquetData: no nontrivial multiplier");
}

double floquet_exponent_planar(const PeriodicOrbit& orbit) {
  if (orbit.system->dimension != 2) {
    throw ValidationError("floquet_exponent_planar: planar systems only");
  }
  double acc = 0;
  for (int i = 0; i < orbit.num_segments(); ++i) {
    const auto& seg = orbit.segments[static_cast<size_t>(i)];
    const auto& ev = orbit.events[static_cast<size_t>(i)];
    acc += seg.time_of_flight *
           orbit.system->zones[static_cast<size_t>(seg.zone)].A.trace();
    acc += std::log(std::abs(ev.saltation.determinant()));
  }
  return acc / orbit.period;
}

// ---------------------------------------------------------------------------
// Zoo presets
// ---------------------------------------------------------------------------

OrbitPreset zoo_orbit_preset(const std::string& name) {
  OrbitPreset p;
  auto ev = [](int zone, int manifold, int dir) {
    return OrbitEvent{zone, manifold, dir};
  };
  // Guesses harvested from settled event-exact simulations at the default
  // parameter sets.
  if (name == "absolute") {
    p.tmpl.events = {ev(1, 0, +1), ev(0, 0, -1)};
    p.times_guess = {2.7535, 5.6779};
    p.state_guess = (Vec(2) << 0.0, 1.7807).finished();
  } else if (name == "mckean2") {
    p.tmpl.events = {ev(1, 0, +1), ev(0, 0, -1)};
    p.times_guess = {2.7139, 2.0894};
    p.state_guess = (Vec(2) << 0.3, 4.2292).finished();
  } else if (name == "homoclinic") {
    p.tmpl.events = {ev(1, 0, +1), ev(0, 0, -1)};
    p.times_guess = {22.698, 2.8428};
    p.state_guess = (Vec(2) << 0.0, 2.7261).finished();
  } else if (name == "planar_if") {
    p.tmpl.events = {ev(0, 1, +1)};
    p.times_guess = {3.6816};
    p.state_guess = (Vec(2) << 0.2, 0.4101).finished();
  } else if (name == "pwl_ml") {
    // Anchored at x(0) = (b, w(0)) so the first and third pieces sit in R2.
    p.tmpl.events = {ev(1, 0, +1), ev(0, 0, -1), ev(1, 1, -1), ev(2, 1, +1)};
    p.times_guess = {0.5051, 0.8268, 0.7057, 3.5202};
    p.state_guess = (Vec(2) << 0.5, 0.163438).finished();
  } else if (name == "mckean3") {
    p.tmpl.events = {ev(0, 0, -1), ev(1, 1, -1), ev(2, 1, +1), ev(1, 0, +1)};
    p.times_guess = {1.1169, 0.046559, 1.1169, 0.046559};
    p.state_guess = (Vec(2) << 0.25, 0.24049).finished();
  } else if (name == "wilson_cowan") {
    // Eight-piece synchronous orbit; zone ids are bu*3+bv with branches
    // 0=low, 1=mid, 2=high for (Xu, Xv).
    p.tmpl.events = {ev(6, 2, +1), ev(7, 3, +1), ev(8, 1, -1), ev(5, 0, -1),
                     ev(2, 3, -1), ev(1, 2, -1), ev(0, 0, +1), ev(3, 1, +1)};
    p.times_guess = {0.188987, 0.090200, 0.028488, 0.015008,
                     0.005888, 0.087623, 0.863087, 0.184655};
    p.state_guess = (Vec(2) << 0.162356, 0.036178).finished();
  } else if (name == "franklin") {
    p.tmpl.events = {ev(0, 1, +1), ev(1, 2, -1)};
    p.times_guess = {0.51349, 0.51349};
    p.state_guess = (Vec(2) << -0.5, 1.6912).finished();
  } else if (name == "cow") {
    p.tmpl.events = {ev(0, 1, +1), ev(1, 3, -1), ev(2, 0, +1)};
    p.times_guess = {19.906, 11.090, 7.8203};
    p.state_guess = (Vec(2) << 1.0, 0.36961).finished();
  } else {
    throw ValidationError("zoo_orbit_preset: no preset for '" + name + "'");
  }
  return p;
}

PeriodicOrbit zoo_orbit(const std::string& name,
                        const std::map<std::string, double>& params) {
  auto sys = std::make_shared<PwlSystem>(builtin_model(name, params));
  OrbitPreset preset = zoo_orbit_preset(name);
  return find_periodic_orbit(sys, preset.tmpl, preset.times_guess,
                             preset.state_guess);
}

void export_orbit_csv(const PeriodicOrbit& orbit, const std::string& path,
                      int samples_per_period) {
  std::ofstream out(path);
  if (!out) throw ValidationError("export_orbit_csv: cannot open '" + path + "'");
  out << "t";
  for (int j = 0; j < orbit.system->dimension; ++j) out << ",x" << j;
  out << "\n";
  out.precision(15);
  for (int s = 0; s <= samples_per_period; ++s) {
    const double t = orbit.period * s / samples_per_period;
    Vec x = orbit.state(t);
    out << t;
    for (int j = 0; j < orbit.system->dimension; ++j) out << "," << x(j);
    out << "\n";
  }
}

std::string orbit_summary_json(const PeriodicOrbit& orbit) {
  nlohmann::json j;
  j["period"] = orbit.period;
  j["times_of_flight"] = nlohmann::json::array();
  j["entry_states"] = nlohmann::json::array();
  for (const auto& seg : orbit.segments) {
    j["times_of_flight"].push_back(seg.time_of_flight);
    nlohmann::json st = nlohmann::json::array();
    for (Eigen::Index i = 0; i < seg.entry_state.size(); ++i) {
      st.push_back(seg.entry_state(i));
    }
    j["entry_states"].push_back(st);
  }
  j["multipliers"] = nlohmann::json::array();
  for (const auto& lam : orbit.floquet.multipliers) {
    j["multipliers"].push_back({{"re", lam.real()}, {"im", lam.imag()}});
  }
  return j.dump(2);
}

}  // namespace pwlnet
