#pragma once

// Phase-only network machinery: the interaction function H from exact
// segment-wise Fourier integrals, phase-locked-state Jacobians, dead-zone
// detection and the biharmonic example.

#include "pwlnet/coupling.hpp"
#include "pwlnet/fourier.hpp"
#include "pwlnet/response.hpp"

#include <utility>
#include <vector>

namespace pwlnet {

/// Component `component` of a piecewise curve as a 2*pi-periodic Fourier
/// series in the phase. `time_origin` shifts the phase reference so that
/// t = time_origin maps to phase 0.
FourierSeries scalar_series(const PiecewiseCurve& curve, int component,
                            int n_max, double time_origin = 0.0);

/// Phase-interaction function H(theta) = (1/T) int Z(t).G(x(t), x(t+theta/w)) dt
/// with coefficients H_n = Z_n . G_{-n} from closed-form segment integrals.
/// Diffusive coupling guarantees H(0) = 0 exactly.
FourierSeries interaction_fn(const PeriodicOrbit& orbit,
                             const PiecewiseCurve& Z,
                             const CouplingSpec& coupling, int n_max);

/// Event-driven alpha-synapse interaction H_n = alpha^2 Z^v_{-n} /
/// (T (alpha + 2 pi i n / T)^2), with the phase origin at `spike_time`
/// (the presynaptic firing event on the orbit).
FourierSeries synaptic_interaction_fn(const PeriodicOrbit& orbit,
                                      const PiecewiseCurve& Z, double alpha,
                                      int n_max, double spike_time = 0.0);

/// Time on the orbit of the first upward crossing of component `v_index`
/// through `level`; the firing reference for synaptic interactions.
double spike_phase_origin(const PeriodicOrbit& orbit, double level,
                          int v_index = 0);

/// Jacobian of the phase-locked state: [J]_ij = sigma [H'(phi_j - phi_i) w_ij
/// - delta_ij sum_k H'(phi_k - phi_i) w_ik]. Rows sum to zero.
Mat phase_lock_jacobian(const FourierSeries& H, const Vec& phases, const Mat& w,
                        double sigma);

struct DeadZones {
  std::vector<std::pair<double, double>> intervals;  // [start, end) in [0, 2pi)
  bool symmetric = false;  // U = -U within grid tolerance
};

/// Maximal intervals with |H| <= xi on a `resolution`-point grid, endpoints
/// refined by bisection to 1e-6.
DeadZones dead_zones(const FourierSeries& H, double xi, int resolution = 1024);

/// H(theta) = -sin(theta - a) + r sin(2 theta) as an exact two-harmonic
/// series; the synchrony boundary is r_c = cos(a)/2.
FourierSeries biharmonic(double a, double r);
double biharmonic_rc(double a);

}  // namespace pwlnet
