#include "pwlnet/response.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>

namespace pwlnet {

Vec PiecewiseCurve::value(double t) const {
  const int i = segment_index(t);
  double local = std::fmod(t, period);
  if (local < 0) local += period;
  const auto& seg = segments[static_cast<size_t>(i)];
  const double tau = local - seg.start;
  if (seg.dichotomy) {
    VecC weighted(seg.coef.size());
    for (Eigen::Index k = 0; k < weighted.size(); ++k) {
      const Complex lam = seg.eig_values(k);
      const double shift = lam.real() <= 0 ? tau : tau - seg.length;
      weighted(k) = seg.coef(k) * std::exp(lam * shift);
    }
    return (seg.eig_vectors * weighted).real();
  }
  return expm(seg.generator, tau) * seg.init;
}

int PiecewiseCurve::segment_index(double t) const {
  double local = std::fmod(t, period);
  if (local < 0) local += period;
  int idx = static_cast<int>(segments.size()) - 1;
  while (idx > 0 && local < segments[static_cast<size_t>(idx)].start) --idx;
  return idx;
}

double PiecewiseCurve::segment_length(int i) const {
  return segments[static_cast<size_t>(i)].length;
}

Vec PiecewiseCurve::end_of_segment(int i) const {
  const auto& seg = segments[static_cast<size_t>(i)];
  if (seg.end_init.size() > 0) return seg.end_init;
  return expm(seg.generator, seg.length) * seg.init;
}

VecC PiecewiseCurve::fourier_coefficient(int n) const {
  const double omega = 2.0 * M_PI / period;
  const Complex iomega(0.0, n * omega);
  VecC acc = VecC::Zero(segments.front().init.size());
  for (size_t i = 0; i < segments.size(); ++i) {
    const auto& seg = segments[i];
    const Complex phase = std::exp(-iomega * seg.start);
    if (seg.dichotomy) {
      // Per-eigencomponent closed forms with bounded weights.
      VecC ifac(seg.coef.size());
      for (Eigen::Index k = 0; k < ifac.size(); ++k) {
        const Complex lam = seg.eig_values(k);
        const Complex dl = lam - iomega;
        if (std::abs(dl) < 1e-12) {
          ifac(k) = lam.real() <= 0
                        ? Complex(seg.length, 0)
                        : seg.length * std::exp(-lam * seg.length);
        } else if (lam.real() <= 0) {
          ifac(k) = (std::exp(dl * seg.length) - 1.0) / dl;
        } else {
          ifac(k) = (std::exp(-iomega * seg.length) -
                     std::exp(-lam * seg.length)) /
                    dl;
        }
      }
      acc += phase * (seg.eig_vectors * ifac.cwiseProduct(seg.coef));
    } else {
      MatC Q = seg.generator.cast<Complex>();
      Q.diagonal().array() -= iomega;
      acc += phase * (cap_k(Q, seg.length) * seg.init.cast<Complex>());
    }
  }
  return acc / period;
}

namespace {

struct AdjointChain {
  // Per-segment transposed-inverse saltations and propagators for the
  // backward-adjoint style period maps.
  std::vector<Mat> s_inv_t;  // (S_i^T)^{-1}
  std::vector<Mat> prop;     // expm(generator_i * T_i)
};

Mat inverse_transpose_saltation(const Mat& S) {
  if (std::abs(S.determinant()) <= 1e-10) {
    throw SingularityError("response: singular saltation matrix");
  }
  return S.transpose().inverse();
}

// Periodic initial vector: null direction of (P - I), taken from the SVD
// (robust for the strongly non-normal period maps of near-homoclinic
// orbits, where the eigensolver's unit eigenvalue drifts).
Vec periodic_eigenvector(const Mat& P, const char* who) {
  const Mat A = P - Mat::Identity(P.rows(), P.cols());
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  const double smax = sv(0);
  if (smin > 1e-6 * std::max(1.0, smax)) {
    throw NumericError(std::string(who) +
                       ": periodicity system is degenerate (no unit "
                       "eigenvalue of the period map)");
  }
  return svd.matrixV().col(sv.size() - 1);
}

// Extreme real eigenvalue parts, for growth estimates of e^{G t}.
void growth_rates(const Mat& G, double* fwd, double* bwd) {
  double amax = -1e300, amin = 1e300;
  for (const auto& p : eig(G)) {
    amax = std::max(amax, p.value.real());
    amin = std::min(amin, p.value.real());
  }
  *fwd = std::max(0.0, amax);
  *bwd = std::max(0.0, -amin);
}

// Unit-norm periodic chain v_{i+1} = J_i expm(G_i len_i) v_i, solved as one
// cyclic least-squares system in the eigenbasis of each generator with the
// expanding directions written backward. This keeps every coefficient
// bounded by 1, so near-homoclinic and stiff relaxation orbits (propagator
// growth e^{100}+) stay solvable where the one-period product saturates at
// its own rounding floor.
std::vector<Vec> cyclic_null_chain(const std::vector<Mat>& gens,
                                   const std::vector<Mat>& jumps,
                                   const std::vector<double>& lens,
                                   const char* who) {
  const int M = static_cast<int>(gens.size());
  const int m = static_cast<int>(gens.front().rows());
  std::vector<MatC> winv(static_cast<size_t>(M)), jinv(static_cast<size_t>(M));
  std::vector<VecC> lam(static_cast<size_t>(M));
  for (int i = 0; i < M; ++i) {
    Eigen::EigenSolver<Mat> es(gens[static_cast<size_t>(i)], true);
    if (es.info() != Eigen::Success) {
      throw NumericError(std::string(who) + ": generator eigensolve failed");
    }
    MatC W = es.eigenvectors();
    const double cond = W.jacobiSvd().singularValues()(0) /
                        W.jacobiSvd().singularValues()(m - 1);
    if (!(cond < 1e8)) {
      throw NumericError(std::string(who) +
                         ": defective generator; cyclic route unavailable");
    }
    winv[static_cast<size_t>(i)] = W.inverse();
    lam[static_cast<size_t>(i)] = es.eigenvalues();
    jinv[static_cast<size_t>(i)] =
        jumps[static_cast<size_t>(i)].inverse().cast<Complex>();
  }

  Mat A = Mat::Zero(2 * m * M, m * M);
  int r = 0;
  for (int i = 0; i < M; ++i) {
    const int j = (i + 1) % M;
    for (int k = 0; k < m; ++k) {
      const Complex l = lam[static_cast<size_t>(i)](k);
      const Eigen::RowVectorXcd wrow = winv[static_cast<size_t>(i)].row(k);
      Eigen::RowVectorXcd row_i, row_j;
      if (l.real() <= 0) {
        row_i = std::exp(l * lens[static_cast<size_t>(i)]) * wrow;
        row_j = -(wrow * jinv[static_cast<size_t>(i)]);
      } else {
        row_i = wrow;
        row_j = -std::exp(-l * lens[static_cast<size_t>(i)]) *
                (wrow * jinv[static_cast<size_t>(i)]);
      }
      const double scale =
          std::max(row_i.cwiseAbs().maxCoeff(), row_j.cwiseAbs().maxCoeff());
      if (scale <= 0) continue;
      A.block(r, i * m, 1, m) = row_i.real() / scale;
      A.block(r, j * m, 1, m) = row_j.real() / scale;
      A.block(r + 1, i * m, 1, m) = row_i.imag() / scale;
      A.block(r + 1, j * m, 1, m) = row_j.imag() / scale;
      r += 2;
    }
  }
  Eigen::JacobiSVD<Mat> svd(A.topRows(r), Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double s_null = sv(m * M - 1);
  const double s_next = sv(m * M - 2);
  if (s_null > 1e-6 * std::max(1.0, sv(0)) || s_next < 1e-6 * sv(0)) {
    throw NumericError(std::string(who) +
                       ": cyclic periodicity system is degenerate");
  }
  Vec u = svd.matrixV().col(m * M - 1);
  std::vector<Vec> inits(static_cast<size_t>(M));
  for (int i = 0; i < M; ++i) {
    inits[static_cast<size_t>(i)] = u.segment(i * m, m);
  }
  return inits;
}

// Chunked chain layout shared by the adjoint-style curves: one link per
// orbit chunk, with the event jump attached to the final chunk of each
// orbit segment and identity jumps in between.
struct ResponseChain {
  std::vector<Mat> gens, jumps;
  std::vector<double> starts, lens;
  std::vector<int> event_of;  // orbit event index closing the chunk, or -1
};

ResponseChain make_chain(const PeriodicOrbit& orbit,
                         const std::function<Mat(const Mat&)>& gen_of_zone,
                         const std::function<Mat(const Mat&)>& jump_of_salt) {
  ResponseChain chain;
  const int m = orbit.system->dimension;
  for (int i = 0; i < orbit.num_segments(); ++i) {
    const auto& seg = orbit.segments[static_cast<size_t>(i)];
    const Mat gen =
        gen_of_zone(orbit.system->zones[static_cast<size_t>(seg.zone)].A);
    const int n = seg.n_chunks();
    const double dt = seg.time_of_flight / n;
    for (int c = 0; c < n; ++c) {
      chain.gens.push_back(gen);
      chain.starts.push_back(seg.start_time + c * dt);
      chain.lens.push_back(dt);
      if (c + 1 < n) {
        chain.jumps.push_back(Mat::Identity(m, m));
        chain.event_of.push_back(-1);
      } else {
        chain.jumps.push_back(
            jump_of_salt(orbit.events[static_cast<size_t>(i)].saltation));
        chain.event_of.push_back(i);
      }
    }
  }
  return chain;
}

PiecewiseCurve curve_from_inits(const PeriodicOrbit& orbit,
                                const ResponseChain& chain,
                                const std::vector<Vec>& inits) {
  const int K = static_cast<int>(chain.gens.size());
  PiecewiseCurve curve;
  curve.period = orbit.period;
  for (int i = 0; i < K; ++i) {
    CurveSegment seg;
    seg.start = chain.starts[static_cast<size_t>(i)];
    seg.length = chain.lens[static_cast<size_t>(i)];
    seg.generator = chain.gens[static_cast<size_t>(i)];
    seg.init = inits[static_cast<size_t>(i)];
    double af = 0, ab = 0;
    growth_rates(seg.generator, &af, &ab);
    if (af * seg.length > std::log(1e3)) {
      seg.end_init = chain.jumps[static_cast<size_t>(i)].inverse() *
                     inits[static_cast<size_t>((i + 1) % K)];
      Eigen::EigenSolver<Mat> es(seg.generator, true);
      if (es.info() == Eigen::Success) {
        MatC W = es.eigenvectors();
        Eigen::JacobiSVD<MatC> wsvd(W);
        if (wsvd.singularValues()(0) <
            1e7 * wsvd.singularValues()(wsvd.singularValues().size() - 1)) {
          const MatC winv = W.inverse();
          const VecC c_init = winv * seg.init.cast<Complex>();
          const VecC c_end = winv * seg.end_init.cast<Complex>();
          VecC coef(c_init.size());
          for (Eigen::Index k = 0; k < coef.size(); ++k) {
            coef(k) =
                es.eigenvalues()(k).real() <= 0 ? c_init(k) : c_end(k);
          }
          seg.dichotomy = true;
          seg.eig_vectors = W;
          seg.eig_values = es.eigenvalues();
          seg.coef = coef;
        }
      }
    }
    curve.segments.push_back(std::move(seg));
  }
  return curve;
}

// Periodic chain of chunk inits: the one-period product route for benign
// growth, the cyclic eigen-coordinate route otherwise.
std::vector<Vec> periodic_chain(const ResponseChain& chain, const char* who) {
  const int K = static_cast<int>(chain.gens.size());
  const int m = static_cast<int>(chain.gens.front().rows());
  double total_growth = 0;
  for (int i = 0; i < K; ++i) {
    double af = 0, ab = 0;
    growth_rates(chain.gens[static_cast<size_t>(i)], &af, &ab);
    total_growth += af * chain.lens[static_cast<size_t>(i)];
  }
  if (total_growth > std::log(1e3)) {
    try {
      return cyclic_null_chain(chain.gens, chain.jumps, chain.lens, who);
    } catch (const NumericError&) {
      // defective generator; fall back to the product route below
    }
  }
  Mat P = Mat::Identity(m, m);
  for (int i = 0; i < K; ++i) {
    P = chain.jumps[static_cast<size_t>(i)] *
        expm(chain.gens[static_cast<size_t>(i)],
             chain.lens[static_cast<size_t>(i)]) *
        P;
  }
  std::vector<Vec> inits;
  inits.push_back(periodic_eigenvector(P, who));
  for (int i = 0; i + 1 < K; ++i) {
    inits.push_back(chain.jumps[static_cast<size_t>(i)] *
                    (expm(chain.gens[static_cast<size_t>(i)],
                          chain.lens[static_cast<size_t>(i)]) *
                     inits.back()));
  }
  return inits;
}

double nontrivial_exponent_real(const PeriodicOrbit& orbit, const char* who) {
  const Complex lam = orbit.floquet.nontrivial_multiplier();
  if (lam.real() <= 0 || std::abs(lam.imag()) > 1e-9 * std::abs(lam)) {
    throw NumericError(std::string(who) +
                       ": nontrivial multiplier is not positive real; "
                       "isostable coordinates need a 2T covering here");
  }
  // The closed-form planar exponent is exact where the eigenvalue route
  // saturates at the monodromy's noise floor.
  if (orbit.system->dimension == 2) return floquet_exponent_planar(orbit);
  return std::log(lam.real()) / orbit.period;
}

}  // namespace

PiecewiseCurve iprc(const PeriodicOrbit& orbit) {
  ResponseChain chain = make_chain(
      orbit, [](const Mat& A) { return Mat(-A.transpose()); },
      [](const Mat& S) { return inverse_transpose_saltation(S); });
  std::vector<Vec> inits = periodic_chain(chain, "iprc");
  const double omega = 2.0 * M_PI / orbit.period;
  const Vec f0 = orbit.velocity(0.0);
  const double scale = inits.front().dot(f0);
  if (std::abs(scale) < 1e-14 * f0.norm() * inits.front().norm()) {
    throw NumericError("iprc: normalization direction orthogonal to the flow");
  }
  for (auto& v : inits) v *= omega / scale;
  PiecewiseCurve curve = curve_from_inits(orbit, chain, inits);

  // Z.f = omega along the whole period (checked at 64 samples). The gate
  // scales with the attainable double-precision floor ||Z|| ||f|| eps.
  double floor_scale = 1.0;
  for (int s = 0; s < 64; ++s) {
    const double t = orbit.period * (s + 0.25) / 64.0;
    floor_scale = std::max(floor_scale, curve.value(t).norm() *
                                            orbit.velocity(t).norm());
  }
  const double gate = std::max(1e-9, 2e-13 * floor_scale);
  for (int s = 0; s < 64; ++s) {
    const double t = orbit.period * (s + 0.25) / 64.0;
    const double err =
        std::abs(curve.value(t).dot(orbit.velocity(t)) - omega);
    if (err > gate) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.3e", err);
      throw NumericError(std::string("iprc: normalization identity failed "
                                     "(residual ") + buf + ")");
    }
  }
  return curve;
}

PiecewiseCurve iirc(const PeriodicOrbit& orbit) {
  const int m = orbit.system->dimension;
  const double kappa = nontrivial_exponent_real(orbit, "iirc");
  ResponseChain chain = make_chain(
      orbit,
      [&](const Mat& A) {
        return Mat(kappa * Mat::Identity(m, m) - A.transpose());
      },
      [](const Mat& S) { return inverse_transpose_saltation(S); });
  std::vector<Vec> inits = periodic_chain(chain, "iirc");
  const Vec vtilde = floquet_mode(orbit).value(0.0);
  const double scale = inits.front().dot(vtilde);
  if (std::abs(scale) < 1e-14 * vtilde.norm() * inits.front().norm()) {
    throw NumericError("iirc: normalization direction orthogonal to vtilde");
  }
  for (auto& v : inits) v /= scale;
  return curve_from_inits(orbit, chain, inits);
}

PiecewiseCurve floquet_mode(const PeriodicOrbit& orbit) {
  const int m = orbit.system->dimension;
  const double kappa = nontrivial_exponent_real(orbit, "floquet_mode");
  ResponseChain chain = make_chain(
      orbit,
      [&](const Mat& A) { return Mat(A - kappa * Mat::Identity(m, m)); },
      [](const Mat& S) { return S; });
  std::vector<Vec> inits = periodic_chain(chain, "floquet_mode");
  // Align with the monodromy eigenvector where it is meaningful; otherwise
  // fix the gauge by unit norm with a deterministic sign.
  Vec v0 = inits.front();
  double scale = 1.0 / v0.norm();
  bool aligned = false;
  if (std::abs(orbit.floquet.nontrivial_multiplier()) > 1e-9) {
    const Vec vtilde = orbit.floquet.nontrivial_vector();
    const double overlap = v0.dot(vtilde);
    if (std::abs(overlap) > 1e-6 * v0.norm()) {
      scale = 1.0 / overlap;  // p(0) = vtilde (unit norm) up to round-off
      aligned = true;
    }
  }
  if (!aligned) {
    Eigen::Index imax = 0;
    v0.cwiseAbs().maxCoeff(&imax);
    if (v0(imax) < 0) scale = -scale;
  }
  for (auto& v : inits) v *= scale;
  PiecewiseCurve curve = curve_from_inits(orbit, chain, inits);
  // Periodicity after the final saltation.
  Vec wrap = chain.jumps.back() *
             curve.end_of_segment(static_cast<int>(curve.segments.size()) - 1);
  if ((wrap - curve.segments.front().init).norm() >
      1e-8 * std::max(1.0, curve.segments.front().init.norm())) {
    throw NumericError("floquet_mode: p(T) does not return to p(0)");
  }
  return curve;
}

namespace {

// Chunk index whose right endpoint is the orbit event at time t_event.
int chunk_before(const PiecewiseCurve& c, double t_event) {
  return c.segment_index(t_event - 1e-9 * c.period);
}

}  // namespace

std::pair<PiecewiseCurve, PiecewiseCurve> curvature_responses(
    const PeriodicOrbit& orbit, const PiecewiseCurve& Z,
    const PiecewiseCurve& I, const PiecewiseCurve& p) {
  if (orbit.system->dimension != 2) {
    throw ValidationError("curvature_responses: planar orbits only");
  }
  const int M = orbit.num_segments();
  const double kappa = nontrivial_exponent_real(orbit, "curvature_responses");
  const Mat I2 = Mat::Identity(2, 2);

  // Per-event jump data shared by B and C.
  std::vector<Mat> sinvt(static_cast<size_t>(M));
  std::vector<Mat> cinv(static_cast<size_t>(M));
  std::vector<Vec> eta(static_cast<size_t>(M)), zeta(static_cast<size_t>(M));
  for (int i = 0; i < M; ++i) {
    const auto& ev = orbit.events[static_cast<size_t>(i)];
    sinvt[static_cast<size_t>(i)] = inverse_transpose_saltation(ev.saltation);
    Mat C_ev(2, 2);
    C_ev << ev.post_velocity(0), ev.post_velocity(1), 0.0, 1.0;
    if (std::abs(ev.post_velocity(0)) < 1e-10) {
      throw SingularityError(
          "curvature_responses: v-velocity vanishes after event " +
          std::to_string(i));
    }
    cinv[static_cast<size_t>(i)] = C_ev.inverse();

    const Mat& A_pre =
        orbit.system->zones[static_cast<size_t>(orbit.segments[i].zone)].A;
    const int next = (i + 1) % M;
    const Mat& A_post =
        orbit.system->zones[static_cast<size_t>(orbit.segments[next].zone)].A;
    const double t_ev = ev.time;
    const int zc = chunk_before(Z, t_ev);
    const int zc_next = (zc + 1) % static_cast<int>(Z.segments.size());
    const Vec z_pre = Z.end_of_segment(zc);
    const Vec z_post = Z.segments[static_cast<size_t>(zc_next)].init;
    const int ic = chunk_before(I, t_ev);
    const int ic_next = (ic + 1) % static_cast<int>(I.segments.size());
    const Vec i_pre = I.end_of_segment(ic);
    const Vec i_post = I.segments[static_cast<size_t>(ic_next)].init;
    const int pc = chunk_before(p, t_ev);
    const int pc_next = (pc + 1) % static_cast<int>(p.segments.size());
    const Vec p_pre = p.end_of_segment(pc);
    const Vec p_post = p.segments[static_cast<size_t>(pc_next)].init;

    const double lead = p_pre(0) / ev.pre_velocity(0);
    Vec e(2);
    e(0) = z_pre.dot(A_pre * p_pre) - z_post.dot(A_post * p_post);
    e(1) = lead * (A_pre.transpose() * z_pre -
                   A_post.transpose() * z_post)(1);
    eta[static_cast<size_t>(i)] = e;

    Vec zt(2);
    zt(0) = i_post.dot((kappa * I2 - A_post) * p_post) -
            i_pre.dot((kappa * I2 - A_pre) * p_pre);
    zt(1) = lead * ((A_pre.transpose() - kappa * I2) * i_pre -
                    (A_post.transpose() - kappa * I2) * i_post)(1);
    zeta[static_cast<size_t>(i)] = zt;
  }

  auto assemble = [&](const std::vector<Mat>& gens,
                      const std::vector<Vec>& inhom) {
    // Period map and accumulated inhomogeneity: x0 -> P x0 + d.
    Mat P = I2;
    Vec d = Vec::Zero(2);
    for (int i = 0; i < M; ++i) {
      const Mat step = sinvt[static_cast<size_t>(i)] *
                       expm(gens[static_cast<size_t>(i)],
                            orbit.segments[i].time_of_flight);
      P = step * P;
      d = step * d + cinv[static_cast<size_t>(i)] * inhom[static_cast<size_t>(i)];
    }
    return std::make_pair(P, d);
  };

  auto build_curve = [&](const std::vector<Mat>& gens,
                         const std::vector<Vec>& inhom, const Vec& x0) {
    PiecewiseCurve curve;
    curve.period = orbit.period;
    Vec v = x0;
    for (int i = 0; i < M; ++i) {
      CurveSegment seg;
      seg.start = orbit.segments[static_cast<size_t>(i)].start_time;
      seg.length = orbit.segments[static_cast<size_t>(i)].time_of_flight;
      seg.generator = gens[static_cast<size_t>(i)];
      seg.init = v;
      curve.segments.push_back(seg);
      v = sinvt[static_cast<size_t>(i)] *
              (expm(gens[static_cast<size_t>(i)],
                    orbit.segments[i].time_of_flight) *
               v) +
          cinv[static_cast<size_t>(i)] * inhom[static_cast<size_t>(i)];
    }
    return curve;
  };

  // B: generators K_mu = -(A^T + kappa I); periodicity alone pins B(0).
  std::vector<Mat> gens_b, gens_c;
  for (int i = 0; i < M; ++i) {
    const Mat& A =
        orbit.system->zones[static_cast<size_t>(orbit.segments[i].zone)].A;
    gens_b.push_back(Mat(-(A.transpose() + kappa * I2)));
    gens_c.push_back(Mat(-A.transpose()));
  }
  auto [Pb, db] = assemble(gens_b, eta);
  Eigen::PartialPivLU<Mat> lu_b(I2 - Pb);
  if (lu_b.rcond() < 1e-12) {
    throw SingularityError("curvature_responses: degenerate B periodicity");
  }
  Vec b0 = lu_b.solve(db);
  PiecewiseCurve B = build_curve(gens_b, eta, b0);

  // C: the period map has a unit eigenvalue, so the side condition at t = 0
  // supplies the missing row of the bordered system.
  auto [Pc, dc] = assemble(gens_c, zeta);
  const Mat& A0 =
      orbit.system->zones[static_cast<size_t>(orbit.segments[0].zone)].A;
  Mat bordered(3, 2);
  bordered.topRows(2) = I2 - Pc;
  bordered.row(2) = orbit.velocity(0.0).transpose();
  Vec rhs(3);
  rhs.head(2) = dc;
  rhs(2) = I.segments[0].init.dot((kappa * I2 - A0) * p.segments[0].init);
  Vec c0 = bordered.colPivHouseholderQr().solve(rhs);
  if ((bordered * c0 - rhs).norm() > 1e-7) {
    throw NumericError("curvature_responses: inconsistent C periodicity system");
  }
  PiecewiseCurve C = build_curve(gens_c, zeta, c0);

  // Side conditions at 64 samples.
  for (int s = 0; s < 64; ++s) {
    const double t = orbit.period * (s + 0.31) / 64.0;
    const Mat& A =
        orbit.system->zones[static_cast<size_t>(orbit.zone_at(t))].A;
    const Vec f = orbit.velocity(t);
    const double res_b =
        std::abs(f.dot(B.value(t)) + Z.value(t).dot(A * p.value(t)));
    const double res_c = std::abs(
        f.dot(C.value(t)) - I.value(t).dot((kappa * I2 - A) * p.value(t)));
    if (res_b > 1e-7 || res_c > 1e-7) {
      throw NumericError("curvature_responses: side condition violated (B " +
                         std::to_string(res_b) + ", C " +
                         std::to_string(res_c) + ")");
    }
  }
  return {B, C};
}

ResponseSet response_set(const PeriodicOrbit& orbit) {
  ResponseSet rs;
  rs.omega = 2.0 * M_PI / orbit.period;
  rs.kappa = nontrivial_exponent_real(orbit, "response_set");
  rs.vtilde = orbit.floquet.nontrivial_vector();
  rs.Z = iprc(orbit);
  rs.I = iirc(orbit);
  rs.p = floquet_mode(orbit);
  auto bc = curvature_responses(orbit, rs.Z, rs.I, rs.p);
  rs.B = bc.first;
  rs.C = bc.second;
  return rs;
}

PiecewiseCurve orbit_curve(const PeriodicOrbit& orbit) {
  const int m = orbit.system->dimension;
  PiecewiseCurve curve;
  curve.period = orbit.period;
  for (int i = 0; i < orbit.num_segments(); ++i) {
    const auto& seg = orbit.segments[static_cast<size_t>(i)];
    const auto& z = orbit.system->zones[static_cast<size_t>(seg.zone)];
    CurveSegment cs;
    cs.start = seg.start_time;
    cs.length = seg.time_of_flight;
    cs.generator = Mat::Zero(m + 1, m + 1);
    cs.generator.topLeftCorner(m, m) = z.A;
    cs.generator.topRightCorner(m, 1) = z.b;
    cs.init = Vec::Ones(m + 1);
    cs.init.head(m) = seg.entry_state;
    curve.segments.push_back(std::move(cs));
  }
  return curve;
}

void export_curve_csv(const PiecewiseCurve& curve, const std::string& path,
                      int samples) {
  std::ofstream out(path);
  if (!out) throw ValidationError("export_curve_csv: cannot open " + path);
  const auto dim = curve.segments.front().init.size();
  out << "t";
  for (Eigen::Index j = 0; j < dim; ++j) out << ",c" << j;
  out << "\n";
  out.precision(15);
  for (int s = 0; s <= samples; ++s) {
    const double t = curve.period * s / samples;
    const Vec v = curve.value(t);
    out << t;
    for (Eigen::Index j = 0; j < dim; ++j) out << "," << v(j);
    out << "\n";
  }
}

std::string curve_summary_json(const PiecewiseCurve& curve) {
  nlohmann::json j;
  j["period"] = curve.period;
  j["segments"] = nlohmann::json::array();
  for (const auto& seg : curve.segments) {
    nlohmann::json sj;
    sj["start"] = seg.start;
    sj["generator"] = nlohmann::json::array();
    for (Eigen::Index r = 0; r < seg.generator.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index c = 0; c < seg.generator.cols(); ++c) {
        row.push_back(seg.generator(r, c));
      }
      sj["generator"].push_back(row);
    }
    nlohmann::json iv = nlohmann::json::array();
    for (Eigen::Index r = 0; r < seg.init.size(); ++r) iv.push_back(seg.init(r));
    sj["init"] = iv;
    j["segments"].push_back(sj);
  }
  return j.dump(2);
}

}  // namespace pwlnet
