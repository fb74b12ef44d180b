#pragma once

// Closed-form piecewise response curves on a periodic orbit: the iPRC Z(t),
// iIRC I(t), Floquet mode p(t), and the curvature responses B(t), C(t) with
// their manifold jump conditions.

#include "pwlnet/orbit.hpp"

#include <string>
#include <utility>
#include <vector>

namespace pwlnet {

struct CurveSegment {
  double start = 0;  // segment start time within [0, T)
  double length = 0;
  Mat generator;     // value(t) = expm(generator, t - start) * init
  Vec init;
  Vec end_init;      // value at the segment's right end (pre-jump)
  // Dichotomy evaluation for segments with large propagator growth:
  // decaying eigencomponents anchored at init, growing ones at end_init.
  bool dichotomy = false;
  MatC eig_vectors;
  VecC eig_values;
  VecC coef;
};

/// T-periodic curve assembled from matrix-exponential segments. Evaluation
/// wraps t modulo the period; Fourier coefficients are exact segment-wise
/// integrals (no quadrature).
struct PiecewiseCurve {
  std::vector<CurveSegment> segments;
  double period = 0;

  Vec value(double t) const;
  int segment_index(double t) const;
  /// Value approached from within segment i at its right endpoint.
  Vec end_of_segment(int i) const;
  double segment_length(int i) const;

  /// c_n = (1/T) int_0^T value(t) e^{-i n omega t} dt, one entry per state
  /// component.
  VecC fourier_coefficient(int n) const;
};

struct ResponseSet {
  PiecewiseCurve Z, I, p, B, C;
  double kappa = 0;
  Vec vtilde;
  double omega = 0;
};

/// iPRC: segments propagate with G(t; -A^T); events apply (S^T)^{-1}; the
/// initial vector is the periodic eigenvector scaled so Z(0).f(x(0)) = omega.
PiecewiseCurve iprc(const PeriodicOrbit& orbit);

/// iIRC: as iprc with generators kappa I - A^T and normalization
/// I(0).vtilde = 1. Requires a positive nontrivial multiplier.
PiecewiseCurve iirc(const PeriodicOrbit& orbit);

/// Floquet mode p(t) = e^{-kappa t} Phi(t) vtilde, T-periodic with jumps S.
PiecewiseCurve floquet_mode(const PeriodicOrbit& orbit);

/// Curvature responses (B, C) for planar orbits; initial data solve the
/// periodicity systems with the inhomogeneous manifold jumps, and the side
/// conditions are verified at 64 sample times.
std::pair<PiecewiseCurve, PiecewiseCurve> curvature_responses(
    const PeriodicOrbit& orbit, const PiecewiseCurve& Z,
    const PiecewiseCurve& I, const PiecewiseCurve& p);

ResponseSet response_set(const PeriodicOrbit& orbit);

/// The orbit itself in curve form (augmented-affine segments); component
/// m is identically 1 and value(t).head(m) = x(t).
PiecewiseCurve orbit_curve(const PeriodicOrbit& orbit);

void export_curve_csv(const PiecewiseCurve& curve, const std::string& path,
                      int samples = 512);
std::string curve_summary_json(const PiecewiseCurve& curve);

}  // namespace pwlnet
