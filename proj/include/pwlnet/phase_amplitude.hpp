#pragma once

// Second-order (phase-amplitude) reduction for a pair of linearly coupled
// planar oscillators: the six averaged interaction functions, the reduced
// three-equation system, its Jacobians, and parameter scans.

#include "pwlnet/phase_reduction.hpp"

#include <array>
#include <string>
#include <vector>

namespace pwlnet {

struct PASet {
  std::array<FourierSeries, 6> H;  // H1..H6 at indices 0..5
  double kappa = 0;
  double omega = 0;

  const FourierSeries& h(int k) const { return H[static_cast<size_t>(k - 1)]; }
};

/// Averages the pairwise interaction integrands against the response set in
/// coefficient space (products of series average to coefficient products at
/// matched harmonics; no quadrature).
PASet pa_interactions(const PeriodicOrbit& orbit, const ResponseSet& rs,
                      int n_max = 64);

/// Right-hand side of the averaged system in (chi, psi1, psi2).
Vec reduced_rhs(const Vec& state, double sigma, const PASet& pa);

/// Analytic Jacobian of reduced_rhs.
Mat reduced_jacobian(const Vec& state, double sigma, const PASet& pa);

/// Jacobian at the synchronous 0-amplitude solution (chi, psi) = 0.
Mat sync_jacobian_pa(double sigma, const PASet& pa);

/// The three closed-form stability conditions for synchrony; all negative
/// means linearly stable.
std::array<double, 3> sync_conditions(double sigma, const PASet& pa);

/// Smallest sigma in [lo, hi] at which the synchronous state restabilizes
/// (max Re eigenvalue of sync_jacobian_pa crosses zero downward).
double sync_restabilization_sigma(const PASet& pa, double lo, double hi,
                                  double tol = 1e-6);

struct FixedPointRecord {
  Vec state;  // (chi, psi1, psi2), chi in [0, 2 pi)
  std::vector<Complex> eigenvalues;
  double max_re = 0;
  std::string type;  // "stable", "unstable", "neutral"
};

struct ScanRow {
  double sigma = 0;
  std::vector<FixedPointRecord> points;
};

struct PaScan {
  std::vector<ScanRow> rows;
  // sigma brackets where a matched branch's leading complex pair crosses
  // the imaginary axis.
  std::vector<std::pair<double, double>> hopf_brackets;
  // maximal sigma windows with no stable fixed point.
  std::vector<std::pair<double, double>> no_stable_windows;
};

/// Fixed points of the reduced system at one sigma by multi-start Newton
/// (chi grid plus symmetric and asymmetric amplitude-slaving seeds).
std::vector<FixedPointRecord> fixed_points_at(const PASet& pa, double sigma,
                                              int chi_starts = 32);

/// Multi-start fixed-point scan of the reduced system over a sigma grid.
PaScan locked_state_scan(const PASet& pa, double sigma_lo, double sigma_hi,
                         int grid, int chi_starts = 32);

/// Fixed-step RK4 flow of the reduced system (for post-Hopf orbits).
Vec reduced_flow(Vec state, double sigma, const PASet& pa, double t_max,
                 double dt);

void export_pa_scan_csv(const PaScan& scan, const std::string& path);

}  // namespace pwlnet
