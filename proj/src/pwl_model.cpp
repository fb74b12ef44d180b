#include "pwlnet/pwl_model.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace pwlnet {

using nlohmann::json;

bool JumpRule::is_identity() const {
  if (M.size() == 0) return true;
  return M.isIdentity(0.0) && (q.size() == 0 || q.isZero(0.0));
}

JumpRule JumpRule::identity(int m) {
  return JumpRule{Mat::Identity(m, m), Vec::Zero(m)};
}

std::string to_string(SmoothnessClass c) {
  switch (c) {
    case SmoothnessClass::Continuous: return "continuous";
    case SmoothnessClass::Filippov: return "filippov";
    case SmoothnessClass::Impacting: return "impacting";
    case SmoothnessClass::Automaton: return "automaton";
  }
  return "unknown";
}

SmoothnessClass smoothness_from_string(const std::string& s) {
  if (s == "continuous") return SmoothnessClass::Continuous;
  if (s == "filippov") return SmoothnessClass::Filippov;
  if (s == "impacting") return SmoothnessClass::Impacting;
  if (s == "automaton") return SmoothnessClass::Automaton;
  throw ValidationError("unknown smoothness class '" + s + "'");
}

Vec Forcing::at(double t) const {
  if (empty()) throw ValidationError("forcing: empty drive queried");
  double local = std::fmod(t, period);
  if (local < 0) local += period;
  return values.col(segment_at(local));
}

int Forcing::segment_at(double local) const {
  int k = static_cast<int>(breaks.size()) - 1;
  while (k > 0 && local < breaks[static_cast<size_t>(k)]) --k;
  return k;
}

// ---------------------------------------------------------------------------

void PwlSystem::validate() const {
  if (dimension <= 0) throw ValidationError("system: dimension must be positive");
  if (zones.empty()) throw ValidationError("system: no zones");
  for (const auto& z : zones) {
    if (z.A.rows() != dimension || z.A.cols() != dimension ||
        z.b.size() != dimension) {
      throw DimensionError("system: zone dynamics dimension mismatch");
    }
    if (!z.signs.empty() &&
        z.signs.size() != static_cast<size_t>(num_manifolds())) {
      throw DimensionError("system: zone sign vector length mismatch");
    }
  }
  for (const auto& mf : manifolds) {
    if (mf.normal.size() != dimension) {
      throw DimensionError("system: manifold normal dimension mismatch");
    }
    if (mf.normal.norm() <= 0) {
      throw ValidationError("system: manifold normal must be nonzero");
    }
    if (!mf.jump.is_identity() &&
        (mf.jump.M.rows() != dimension || mf.jump.q.size() != dimension)) {
      throw DimensionError("system: jump rule dimension mismatch");
    }
    if (mf.target_up >= num_zones() || mf.target_down >= num_zones()) {
      throw ValidationError("system: manifold targets reference missing zones");
    }
  }
  if (!forcing.empty()) {
    if (forcing.values.rows() != dimension ||
        forcing.values.cols() != static_cast<Eigen::Index>(forcing.breaks.size())) {
      throw DimensionError("system: forcing table dimension mismatch");
    }
  }

  if (smoothness != SmoothnessClass::Continuous) return;

  // Field agreement on each plain manifold, sampled at 100 points.
  for (int k = 0; k < num_manifolds(); ++k) {
    const auto& mf = manifolds[static_cast<size_t>(k)];
    if (mf.detector || !mf.jump.is_identity()) continue;
    // Orthonormal tangent basis from the QR factorization of the normal.
    Eigen::HouseholderQR<Mat> qr{Mat(mf.normal)};
    Mat qfull = qr.householderQ();
    Mat tangent = qfull.rightCols(dimension - 1);
    const Vec x_base = mf.offset * mf.normal / mf.normal.squaredNorm();

    unsigned state = 0x9e3779b9u + static_cast<unsigned>(k);
    auto next_unit = [&state]() {
      state = state * 1664525u + 1013904223u;
      return (static_cast<double>(state >> 8) / 16777216.0) * 2.0 - 1.0;
    };
    int checked = 0;
    for (int s = 0; s < 400 && checked < 100; ++s) {
      Vec y(dimension - 1);
      for (int i = 0; i < dimension - 1; ++i) y(i) = 2.0 * next_unit();
      Vec x = x_base + tangent * y;
      const double eps = 1e-7 * std::max(1.0, x.norm());
      try {
        int up = zone_of(*this, x + eps * mf.normal / mf.normal.norm());
        int down = zone_of(*this, x - eps * mf.normal / mf.normal.norm());
        Vec fu = zones[static_cast<size_t>(up)].A * x +
                 zones[static_cast<size_t>(up)].b;
        Vec fd = zones[static_cast<size_t>(down)].A * x +
                 zones[static_cast<size_t>(down)].b;
        if ((fu - fd).lpNorm<Eigen::Infinity>() > 1e-9) {
          throw ValidationError(
              "system: vector field discontinuous across manifold " +
              std::to_string(k) + " in a class-continuous system");
        }
        ++checked;
      } catch (const BoundaryError&) {
        continue;  // sampled too close to another manifold; try again
      } catch (const ValidationError& e) {
        if (std::string(e.what()).find("no zone") != std::string::npos) continue;
        throw;
      }
    }
  }
}

int PwlSystem::event_target(int manifold, int direction, int from_zone) const {
  const auto& mf = manifolds[static_cast<size_t>(manifold)];
  if (mf.detector) return from_zone;
  if (direction > 0 && mf.target_up >= 0) return mf.target_up;
  if (direction < 0 && mf.target_down >= 0) return mf.target_down;
  if (!mf.jump.is_identity()) {
    throw ValidationError("system: jump manifold " + std::to_string(manifold) +
                          " needs an explicit target for this direction");
  }
  // Plain crossing: flip this manifold's sign slot and find the match.
  const auto& from = zones[static_cast<size_t>(from_zone)].signs;
  if (from.empty()) {
    throw ValidationError("system: cannot derive event target without zone signs");
  }
  std::vector<int> want = from;
  want[static_cast<size_t>(manifold)] = direction > 0 ? 1 : -1;
  for (int z = 0; z < num_zones(); ++z) {
    const auto& zs = zones[static_cast<size_t>(z)].signs;
    bool ok = true;
    for (size_t i = 0; i < zs.size(); ++i) {
      int a = zs[i], b = want[i];
      if (a != 0 && b != 0 && a != b) { ok = false; break; }
    }
    if (ok && z != from_zone) return z;
    if (ok && num_zones() == 1) return z;
  }
  throw ValidationError("system: no zone on the far side of manifold " +
                        std::to_string(manifold));
}

int zone_of(const PwlSystem& sys, const Vec& x) {
  if (sys.smoothness == SmoothnessClass::Automaton) {
    throw ValidationError(
        "zone_of: zones of an automaton system are not state-space regions");
  }
  if (x.size() != sys.dimension) throw DimensionError("zone_of: bad state size");
  std::vector<double> h(static_cast<size_t>(sys.num_manifolds()));
  for (int k = 0; k < sys.num_manifolds(); ++k) {
    h[static_cast<size_t>(k)] = sys.manifolds[static_cast<size_t>(k)].h(x);
    if (!sys.manifolds[static_cast<size_t>(k)].detector &&
        std::abs(h[static_cast<size_t>(k)]) <= kBoundaryTol) {
      throw BoundaryError("zone_of: state lies on manifold " +
                              std::to_string(k),
                          k);
    }
  }
  int found = -1;
  for (int z = 0; z < sys.num_zones(); ++z) {
    const auto& signs = sys.zones[static_cast<size_t>(z)].signs;
    bool ok = true;
    for (size_t k = 0; k < signs.size(); ++k) {
      if (signs[k] == 0) continue;
      if (signs[k] * h[k] <= 0) { ok = false; break; }
    }
    if (ok) {
      if (found >= 0) {
        throw ValidationError("zone_of: state matches more than one zone");
      }
      found = z;
    }
  }
  if (found < 0) throw ValidationError("zone_of: no zone contains the state");
  return found;
}

namespace {

// Affine flow over one constant-drive window via the augmented exponential.
Vec affine_step(const Mat& A, const Vec& drive, const Vec& x0, double dt) {
  return expm(A, dt) * x0 + cap_k(A, dt) * drive;
}

}  // namespace

Vec flow(const PwlSystem& sys, int zone, const Vec& x0, double t, double t0) {
  if (zone < 0 || zone >= sys.num_zones()) {
    throw ValidationError("flow: unknown zone id " + std::to_string(zone));
  }
  const auto& z = sys.zones[static_cast<size_t>(zone)];
  if (sys.forcing.empty()) {
    return affine_step(z.A, z.b, x0, t);
  }
  // Piecewise-constant forcing: advance window by window.
  Vec x = x0;
  double now = t0;
  double remaining = t;
  while (remaining > 0) {
    double local = std::fmod(now, sys.forcing.period);
    if (local < 0) local += sys.forcing.period;
    int seg = sys.forcing.segment_at(local);
    double seg_end = (seg + 1 < static_cast<int>(sys.forcing.breaks.size()))
                         ? sys.forcing.breaks[static_cast<size_t>(seg) + 1]
                         : sys.forcing.period;
    double dt = std::min(remaining, seg_end - local);
    if (dt <= 0) dt = remaining;  // numerical guard at window edges
    x = affine_step(z.A, Vec(z.b + sys.forcing.values.col(seg)), x, dt);
    now += dt;
    remaining -= dt;
  }
  return x;
}

Vec vector_field_in_zone(const PwlSystem& sys, int zone, const Vec& x,
                         double t) {
  const auto& z = sys.zones.at(static_cast<size_t>(zone));
  Vec f = z.A * x + z.b;
  if (!sys.forcing.empty()) f += sys.forcing.at(t);
  return f;
}

double sliding_weight(const PwlSystem& sys, int manifold, const Vec& x,
                      double t) {
  const auto& mf = sys.manifolds.at(static_cast<size_t>(manifold));
  const int up = mf.target_up >= 0 ? mf.target_up : 0;
  const int down = mf.target_down >= 0 ? mf.target_down : 1;
  Vec f1 = vector_field_in_zone(sys, up, x, t);
  Vec f2 = vector_field_in_zone(sys, down, x, t);
  const double denom = mf.normal.dot(f2 - f1);
  if (std::abs(denom) < 1e-14) {
    throw NumericError("sliding_weight: fields agree along the normal");
  }
  return mf.normal.dot(f2) / denom;
}

Vec vector_field(const PwlSystem& sys, const Vec& x, double t) {
  if (sys.smoothness == SmoothnessClass::Automaton) {
    throw ValidationError("vector_field: automaton systems need a zone id");
  }
  // Find the manifold (if any) that x sits on.
  int on = -1;
  for (int k = 0; k < sys.num_manifolds(); ++k) {
    const auto& mf = sys.manifolds[static_cast<size_t>(k)];
    if (!mf.detector && std::abs(mf.h(x)) <= kBoundaryTol) {
      on = k;
      break;
    }
  }
  if (on < 0) return vector_field_in_zone(sys, zone_of(sys, x), x, t);

  if (sys.smoothness != SmoothnessClass::Filippov) {
    throw BoundaryError("vector_field: state lies on manifold " +
                            std::to_string(on),
                        on);
  }
  const auto& mf = sys.manifolds[static_cast<size_t>(on)];
  const int up = mf.target_up >= 0 ? mf.target_up : 0;
  const int down = mf.target_down >= 0 ? mf.target_down : 1;
  Vec f1 = vector_field_in_zone(sys, up, x, t);
  Vec f2 = vector_field_in_zone(sys, down, x, t);
  const double a1 = mf.normal.dot(f1);
  const double a2 = mf.normal.dot(f2);
  if (a1 * a2 < 0) {
    // Opposing normal components (attracting or repulsive): the convex
    // extension selects the sliding field.
    const double s = sliding_weight(sys, on, x, t);
    return s * f1 + (1.0 - s) * f2;
  }
  // Transversal crossing: field of the side being entered.
  return a1 > 0 ? f1 : f2;
}

// ---------------------------------------------------------------------------
// Model zoo
// ---------------------------------------------------------------------------

namespace {

struct ParamReader {
  std::map<std::string, double> resolved;
  const std::map<std::string, double>& user;
  explicit ParamReader(const std::map<std::string, double>& u) : user(u) {}
  double operator()(const std::string& key, double fallback) {
    auto it = user.find(key);
    double v = it != user.end() ? it->second : fallback;
    resolved[key] = v;
    return v;
  }
  void reject_unknown(const std::string& model) const {
    for (const auto& [k, v] : user) {
      if (!resolved.count(k)) {
        throw ValidationError("builtin_model(" + model + "): unknown parameter '" +
                              k + "'");
      }
    }
  }
};

Manifold plane(int dim, int axis, double c, const std::string& name) {
  Manifold mf;
  mf.normal = Vec::Zero(dim);
  mf.normal(axis) = 1.0;
  mf.offset = c;
  mf.jump = JumpRule::identity(dim);
  mf.name = name;
  return mf;
}

PwlSystem make_mckean2(ParamReader& p) {
  const double a = p("a", 0.3), b = p("b", 2.0), gamma = p("gamma", 1.0),
               I = p("I", 3.0);
  PwlSystem sys;
  sys.dimension = 2;
  sys.smoothness = SmoothnessClass::Filippov;
  Mat A(2, 2);
  A << -gamma, -1.0, b, 0.0;
  sys.zones = {{A, (Vec(2) << I, 0.0).finished(), {+1}, "R1"},
               {A, Vec::Zero(2), {-1}, "R2"}};
  Manifold mf = plane(2, 0, a, "v=a");
  mf.target_up = 0;
  mf.target_down = 1;
  sys.manifolds = {mf};
  sys.name = "mckean2";
  return sys;
}

PwlSystem make_absolute(ParamReader& p) {
  const double a = p("a", 0.0), wbar = p("wbar", -0.1), vbar = p("vbar", 0.1),
               d = p("d", 0.5);
  PwlSystem sys;
  sys.dimension = 2;
  sys.smoothness = SmoothnessClass::Continuous;
  Mat A1(2, 2), A2(2, 2);
  A1 << 1.0, -1.0, 1.0, -d;
  A2 << -1.0, -1.0, 1.0, -d;
  Vec b1(2), b2(2);
  b1 << -a, d * wbar - vbar;
  b2 << a, d * wbar - vbar;
  sys.zones = {{A1, b1, {+1}, "R1"}, {A2, b2, {-1}, "R2"}};
  Manifold mf = plane(2, 0, a, "v=a");
  mf.target_up = 0;
  mf.target_down = 1;
  sys.manifolds = {mf};
  sys.name = "absolute";
  return sys;
}

PwlSystem make_homoclinic(ParamReader& p) {
  const double a = p("a", 0.0), d1 = p("delta1", 2.0),
               d2 = p("delta2", -0.3667), t1 = p("tau1", 0.5),
               t2 = p("tau2", -0.6333);
  PwlSystem sys;
  sys.dimension = 2;
  sys.smoothness = SmoothnessClass::Continuous;
  Mat A1(2, 2), A2(2, 2);
  A1 << t1, -1.0, d1, 0.0;
  A2 << t2, -1.0, d2, 0.0;
  Vec b(2);
  b << 0.0, -1.0;
  sys.zones = {{A1, b, {+1}, "R1"}, {A2, b, {-1}, "R2"}};
  Manifold mf = plane(2, 0, a, "v=a");
  mf.target_up = 0;
  mf.target_down = 1;
  sys.manifolds = {mf};
  sys.name = "homoclinic";
  return sys;
}

PwlSystem make_planar_if(ParamReader& p) {
  const double vth = p("vth", 1.0), vr = p("vr", 0.2), aw = p("aw", 0.0),
               bw = p("bw", -1.0), a1 = p("a1", 1.0), a2 = p("a2", -1.0),
               I = p("I", 0.1), a = p("a", 0.0);
  // kappa and tau are not fixed by the reference figures; these defaults
  // give the tonic single-zone orbit whose synaptic-ring instability
  // borders sit at sigma = 0 and sigma = -0.05.
  const double tau = p("tau", 2.0), kappa = p("kappa", 0.69);
  PwlSystem sys;
  sys.dimension = 2;
  sys.smoothness = SmoothnessClass::Impacting;
  Mat A1(2, 2), A2(2, 2);
  A1 << a1, -1.0, aw / tau, bw / tau;
  A2 << a2, -1.0, aw / tau, bw / tau;
  Vec b(2);
  b << I, 0.0;
  sys.zones = {{A1, b, {+1, -1}, "R1"}, {A2, b, {-1, -1}, "R2"}};
  Manifold zone_split = plane(2, 0, a, "v=a");
  zone_split.target_up = 0;
  zone_split.target_down = 1;
  Manifold threshold = plane(2, 0, vth, "v=vth");
  threshold.jump.M = (Mat(2, 2) << 0.0, 0.0, 0.0, 1.0).finished();
  threshold.jump.q = (Vec(2) << vr, kappa / tau).finished();
  threshold.target_up = vr > a ? 0 : 1;
  threshold.fires = true;
  sys.manifolds = {zone_split, threshold};
  sys.name = "planar_if";
  return sys;
}

PwlSystem make_pwl_ml(ParamReader& p) {
  const double C = p("C", 0.825), I = p("I", 0.1), a = p("a", 0.25),
               b = p("b", 0.5), bstar = p("bstar", 0.2), g1 = p("gamma1", 2.0),
               g2 = p("gamma2", 0.25);
  if (!(a / 2 < b && b < (1 + a) / 2)) {
    throw ValidationError("builtin_model(pwl_ml): constraint a/2 < b < (1+a)/2 violated");
  }
  if (!(-a / 2 < bstar && bstar < (1 - a) / 2)) {
    throw ValidationError("builtin_model(pwl_ml): constraint -a/2 < b* < (1-a)/2 violated");
  }
  if (g2 <= 0) throw ValidationError("builtin_model(pwl_ml): gamma2 must be positive");
  PwlSystem sys;
  sys.dimension = 2;
  sys.smoothness = SmoothnessClass::Continuous;
  auto zone = [&](double rho_slope, double rho_off, double g,
                  const std::vector<int>& signs, const std::string& name) {
    Mat A(2, 2);
    A << rho_slope / C, -1.0 / C, 1.0 / g, -1.0;
    Vec bb(2);
    bb << (rho_off + I) / C, bstar - b / g;
    return ZoneDynamics{A, bb, signs, name};
  };
  // rho(v): 1-v above (1+a)/2, v-a on [a/2,(1+a)/2], -v below a/2;
  // recovery time scale gamma2 for v > b and gamma1 for v < b.
  sys.zones = {zone(-1.0, 1.0, g2, {+1, +1, +1}, "R1"),
               zone(1.0, -a, g2, {-1, +1, +1}, "R2"),
               zone(1.0, -a, g1, {-1, -1, +1}, "R3"),
               zone(-1.0, 0.0, g1, {-1, -1, -1}, "R4")};
  sys.manifolds = {plane(2, 0, (1 + a) / 2, "v=(1+a)/2"),
                   plane(2, 0, b, "v=b"), plane(2, 0, a / 2, "v=a/2")};
  sys.name = "pwl_ml";
  return sys;
}

PwlSystem make_mckean3(ParamReader& p) {
  const double C = p("C", 0.01), I = p("I", 0.0), gamma = p("gamma", 0.0),
               a = p("a", -0.5), vspike = p("vspike", 0.6);
  PwlSystem sys;
  sys.dimension = 2;
  sys.smoothness = SmoothnessClass::Continuous;
  auto zone = [&](double slope, double off, const std::vector<int>& signs,
                  const std::string& name) {
    Mat A(2, 2);
    A << slope / C, -1.0 / C, 1.0, -gamma;
    Vec bb(2);
    bb << (off + I) / C, 0.0;
    return ZoneDynamics{A, bb, signs, name};
  };
  sys.zones = {zone(-1.0, 1.0, {+1, +1, 0}, "R"),
               zone(1.0, -a, {-1, +1, 0}, "M"),
               zone(-1.0, 0.0, {-1, -1, 0}, "L")};
  Manifold spike = plane(2, 0, vspike, "v=vspike");
  spike.detector = true;
  spike.fires = true;
  sys.manifolds = {plane(2, 0, (1 + a) / 2, "v=(1+a)/2"),
                   plane(2, 0, a / 2, "v=a/2"), spike};
  sys.name = "mckean3";
  return sys;
}

PwlSystem make_wilson_cowan(ParamReader& p) {
  const double eps = p("epsilon", 0.04), tau = p("tau", 0.6),
               Iu = p("Iu", -0.05), Iv = p("Iv", -0.3), wuu = p("wuu", 1.0),
               wvu = p("wvu", 2.0), wuv = p("wuv", 1.0), wvv = p("wvv", 0.25);
  PwlSystem sys;
  sys.dimension = 2;
  sys.smoothness = SmoothnessClass::Continuous;
  // Arguments of the firing-rate function: Xu = Iu + wuu*u - wvu*v and
  // Xv = Iv + wuv*u - wvv*v, each with branches 0 / x/eps / 1.
  Vec nu(2), nv(2);
  nu << wuu, -wvu;
  nv << wuv, -wvv;
  auto branch_zone = [&](int bu, int bv) {
    Mat A = Mat::Zero(2, 2);
    Vec bb = Vec::Zero(2);
    A(0, 0) = -1.0;
    A(1, 1) = -1.0 / tau;
    if (bu == 1) {
      A.row(0) += (nu / eps).transpose();
      bb(0) += Iu / eps;
    } else if (bu == 2) {
      bb(0) += 1.0;
    }
    if (bv == 1) {
      A.row(1) += (nv / (eps * tau)).transpose();
      bb(1) += Iv / (eps * tau);
    } else if (bv == 2) {
      bb(1) += 1.0 / tau;
    }
    auto slot = [](int b) {
      return b == 0 ? std::vector<int>{-1, -1}
                    : (b == 1 ? std::vector<int>{+1, -1}
                              : std::vector<int>{+1, +1});
    };
    std::vector<int> signs;
    for (int s : slot(bu)) signs.push_back(s);
    for (int s : slot(bv)) signs.push_back(s);
    const char* names = "LMH";
    return ZoneDynamics{A, bb, signs,
                        std::string(1, names[bu]) + std::string(1, names[bv])};
  };
  for (int bu = 0; bu < 3; ++bu)
    for (int bv = 0; bv < 3; ++bv) sys.zones.push_back(branch_zone(bu, bv));
  auto mk = [&](const Vec& n, double c, const std::string& name) {
    Manifold mf;
    mf.normal = n;
    mf.offset = c;
    mf.jump = JumpRule::identity(2);
    mf.name = name;
    return mf;
  };
  sys.manifolds = {mk(nu, -Iu, "Xu=0"), mk(nu, eps - Iu, "Xu=eps"),
                   mk(nv, -Iv, "Xv=0"), mk(nv, eps - Iv, "Xv=eps")};
  sys.name = "wilson_cowan";
  return sys;
}

PwlSystem make_franklin(ParamReader& p) {
  // gamma1/gamma2/f/a/k are not fixed by the reference text; defaults give a
  // robust two-impact orbit.
  const double g1 = p("gamma1", 0.1), g2 = p("gamma2", 1.0), f = p("f", 1.0),
               a = p("a", 0.5), k = p("k", 0.8);
  PwlSystem sys;
  sys.dimension = 2;  // (u, v) with v = du/dt
  sys.smoothness = SmoothnessClass::Impacting;
  Mat A(2, 2);
  A << 0.0, 1.0, -g2, -g1;
  sys.zones = {{A, (Vec(2) << 0.0, f).finished(), {+1, -1, +1}, "v>0"},
               {A, (Vec(2) << 0.0, -f).finished(), {-1, -1, +1}, "v<0"}};
  Manifold vsign = plane(2, 1, 0.0, "v=0");
  vsign.target_up = 0;
  vsign.target_down = 1;
  Manifold right = plane(2, 0, a, "u=a");
  right.jump.M = (Mat(2, 2) << 1.0, 0.0, 0.0, -k).finished();
  right.jump.q = Vec::Zero(2);
  right.target_up = 1;  // impact reverses the velocity
  right.fires = true;
  Manifold left = plane(2, 0, -a, "u=-a");
  left.jump = right.jump;
  left.target_down = 0;
  left.fires = true;
  sys.manifolds = {vsign, right, left};
  sys.name = "franklin";
  return sys;
}

PwlSystem make_cow(ParamReader& p) {
  const double delta = p("delta", 0.25), a1 = p("alpha1", 0.05),
               b1 = p("beta1", 0.05);
  const double a2 = p("alpha2", 0.95 * a1), b2 = p("beta2", 0.125),
               sigma = p("sigma", 0.0);
  if (delta <= 0 || delta >= 1) {
    throw ValidationError("builtin_model(cow): delta must lie in (0,1)");
  }
  PwlSystem sys;
  sys.dimension = 2;  // (v, w): hunger and desire to lie down
  sys.smoothness = SmoothnessClass::Automaton;
  auto diag_zone = [&](double av, double bw, const std::string& name) {
    Mat A = Mat::Zero(2, 2);
    A(0, 0) = av;
    A(1, 1) = bw;
    return ZoneDynamics{A, Vec::Zero(2), {}, name};
  };
  // Row-normalized network coupling adds sigma to the active-state rate.
  sys.zones = {diag_zone(-a2 + sigma, b1, "E"),
               diag_zone(a1, -b2 + sigma, "R"), diag_zone(a1, b1, "S")};
  Manifold h1 = plane(2, 0, 1.0, "v=1");
  h1.target_up = 0;  // g1: start eating
  Manifold h2 = plane(2, 1, 1.0, "w=1");
  h2.target_up = 1;  // g2: lie down
  Manifold h3 = plane(2, 0, delta, "v=delta");
  h3.target_down = 2;  // g3: stand
  Manifold h4 = plane(2, 1, delta, "w=delta");
  h4.target_down = 2;  // g4: stand
  sys.manifolds = {h1, h2, h3, h4};
  sys.name = "cow";
  return sys;
}

}  // namespace

PwlSystem builtin_model(const std::string& name,
                        const std::map<std::string, double>& params) {
  ParamReader p(params);
  PwlSystem sys;
  if (name == "mckean2") sys = make_mckean2(p);
  else if (name == "absolute") sys = make_absolute(p);
  else if (name == "homoclinic") sys = make_homoclinic(p);
  else if (name == "planar_if") sys = make_planar_if(p);
  else if (name == "pwl_ml") sys = make_pwl_ml(p);
  else if (name == "mckean3") sys = make_mckean3(p);
  else if (name == "wilson_cowan") sys = make_wilson_cowan(p);
  else if (name == "franklin") sys = make_franklin(p);
  else if (name == "cow") sys = make_cow(p);
  else throw ValidationError("builtin_model: unknown model '" + name + "'");
  p.reject_unknown(name);
  sys.params = p.resolved;
  sys.validate();
  return sys;
}

std::vector<std::string> builtin_model_names() {
  return {"mckean2", "absolute",     "homoclinic", "planar_if", "pwl_ml",
          "mckean3", "wilson_cowan", "franklin",   "cow"};
}

PwlSystem with_alpha_synapse(const PwlSystem& sys, double alpha,
                             double self_drive, int v_index) {
  if (alpha <= 0) throw ValidationError("with_alpha_synapse: alpha must be positive");
  const int m = sys.dimension;
  PwlSystem out = sys;
  out.dimension = m + 2;
  out.name = sys.name + "+synapse";
  out.params["alpha"] = alpha;
  for (auto& z : out.zones) {
    Mat A = Mat::Zero(m + 2, m + 2);
    A.topLeftCorner(m, m) = z.A;
    A(m, m) = -alpha;
    A(m, m + 1) = alpha;
    A(m + 1, m + 1) = -alpha;
    A(v_index, m) = self_drive;
    Vec b = Vec::Zero(m + 2);
    b.head(m) = z.b;
    z.A = A;
    z.b = b;
  }
  for (auto& mf : out.manifolds) {
    Vec n = Vec::Zero(m + 2);
    n.head(m) = mf.normal;
    mf.normal = n;
    const bool had_jump = !mf.jump.is_identity();
    Mat M = Mat::Identity(m + 2, m + 2);
    Vec q = Vec::Zero(m + 2);
    if (had_jump) {
      M.topLeftCorner(m, m) = mf.jump.M;
      q.head(m) = mf.jump.q;
    }
    if (mf.fires) {
      q(m + 1) = alpha;  // impulse kick of the synaptic u variable
    }
    if (had_jump || mf.fires) {
      mf.jump.M = M;
      mf.jump.q = q;
    } else {
      mf.jump = JumpRule::identity(m + 2);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

namespace {

json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Mat mat_from_json(const json& j) {
  const auto rows = j.size();
  if (rows == 0) return Mat(0, 0);
  const auto cols = j.at(0).size();
  Mat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (size_t i = 0; i < rows; ++i)
    for (size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
          j.at(i).at(c).get<double>();
  return m;
}

json vec_to_json(const Vec& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Vec vec_from_json(const json& j) {
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = j.at(i).get<double>();
  return v;
}

}  // namespace

json to_json(const PwlSystem& sys) {
  json j;
  j["dimension"] = sys.dimension;
  j["class"] = to_string(sys.smoothness);
  j["name"] = sys.name;
  if (!sys.params.empty()) j["params"] = sys.params;
  j["zones"] = json::array();
  for (const auto& z : sys.zones) {
    json zj;
    zj["A"] = mat_to_json(z.A);
    zj["b"] = vec_to_json(z.b);
    zj["signs"] = z.signs;
    if (!z.name.empty()) zj["name"] = z.name;
    j["zones"].push_back(zj);
  }
  j["manifolds"] = json::array();
  for (const auto& mf : sys.manifolds) {
    json mj;
    mj["normal"] = vec_to_json(mf.normal);
    mj["offset"] = mf.offset;
    if (!mf.jump.is_identity()) {
      mj["jump"] = {{"M", mat_to_json(mf.jump.M)}, {"q", vec_to_json(mf.jump.q)}};
    }
    mj["targets"] = {{"up", mf.target_up}, {"down", mf.target_down}};
    if (mf.fires) mj["fires"] = true;
    if (mf.detector) mj["detector"] = true;
    if (!mf.name.empty()) mj["name"] = mf.name;
    j["manifolds"].push_back(mj);
  }
  if (!sys.forcing.empty()) {
    j["forcing"] = {{"period", sys.forcing.period},
                    {"breaks", sys.forcing.breaks},
                    {"values", mat_to_json(sys.forcing.values)}};
  }
  return j;
}

PwlSystem system_from_json(const json& j) {
  PwlSystem sys;
  sys.dimension = j.at("dimension").get<int>();
  sys.smoothness = smoothness_from_string(j.at("class").get<std::string>());
  sys.name = j.value("name", std::string{});
  if (j.contains("params")) {
    sys.params = j.at("params").get<std::map<std::string, double>>();
  }
  for (const auto& zj : j.at("zones")) {
    ZoneDynamics z;
    z.A = mat_from_json(zj.at("A"));
    z.b = vec_from_json(zj.at("b"));
    if (zj.contains("signs")) z.signs = zj.at("signs").get<std::vector<int>>();
    z.name = zj.value("name", std::string{});
    sys.zones.push_back(std::move(z));
  }
  for (const auto& mj : j.at("manifolds")) {
    Manifold mf;
    mf.normal = vec_from_json(mj.at("normal"));
    mf.offset = mj.at("offset").get<double>();
    if (mj.contains("jump")) {
      mf.jump.M = mat_from_json(mj.at("jump").at("M"));
      mf.jump.q = vec_from_json(mj.at("jump").at("q"));
    } else {
      mf.jump = JumpRule::identity(sys.dimension);
    }
    if (mj.contains("targets")) {
      mf.target_up = mj.at("targets").value("up", -1);
      mf.target_down = mj.at("targets").value("down", -1);
    }
    mf.fires = mj.value("fires", false);
    mf.detector = mj.value("detector", false);
    mf.name = mj.value("name", std::string{});
    sys.manifolds.push_back(std::move(mf));
  }
  if (j.contains("forcing")) {
    sys.forcing.period = j.at("forcing").at("period").get<double>();
    sys.forcing.breaks = j.at("forcing").at("breaks").get<std::vector<double>>();
    sys.forcing.values = mat_from_json(j.at("forcing").at("values"));
  }
  sys.validate();
  return sys;
}

PwlSystem load_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("load_system: cannot open '" + path + "'");
  json j;
  in >> j;
  return system_from_json(j);
}

void save_system(const PwlSystem& sys, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("save_system: cannot open '" + path + "'");
  out << to_json(sys).dump(2) << "\n";
}

}  // namespace pwlnet
