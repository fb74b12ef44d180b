#pragma once

// Nonsmooth master stability function: saltation-augmented variational
// products over complex beta, grids with zero contours, network verdicts,
// and the structurally special applications (Wilson-Cowan rings,
// switched-linear sequences, cow herds).

#include "pwlnet/graphs.hpp"
#include "pwlnet/orbit.hpp"
#include "pwlnet/pwl_model.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace pwlnet {

/// Reusable evaluator for one orbit and coupling Jacobian. The tangential
/// multiplier is identified at beta = 0 and tracked by eigenvector overlap
/// as beta moves; at collisions the rule degrades to dropping the
/// multiplier nearest 1 in modulus (flagged).
class MsfEngine {
 public:
  MsfEngine(const PeriodicOrbit& orbit, const Mat& J);

  /// max_k Re(ln lambda_k)/T over the multipliers of Psi(beta), excluding
  /// the tangential mode.
  double value(Complex beta) const;

  /// Full multiplier set of Psi(beta), tangential mode first.
  std::vector<Complex> multipliers(Complex beta) const;

  bool tie_fallback_seen() const { return fallback_; }
  double period() const { return period_; }

 private:
  std::vector<MatC> a_minus_bj_base_;  // zone matrices, cast complex
  std::vector<MatC> saltations_;
  std::vector<double> lens_;
  MatC coupling_;
  VecC tangent_;
  double period_ = 0;
  mutable bool fallback_ = false;

  MatC product(Complex beta) const;
};

double msf_value(const PeriodicOrbit& orbit, const Mat& J, Complex beta);

struct MsfGrid {
  std::vector<double> re_axis, im_axis;
  Mat values;  // values(i, j) at (re_axis[j], im_axis[i])
  std::vector<std::vector<std::pair<double, double>>> zero_contours;
};

MsfGrid msf_grid(const PeriodicOrbit& orbit, const Mat& J, double re_lo,
                 double re_hi, double im_lo, double im_hi, int n_re = 201,
                 int n_im = 201);

void export_msf_grid_csv(const MsfGrid& grid, const std::string& path);
std::string msf_contours_json(const MsfGrid& grid);

/// Zero crossings of beta -> msf_value on the real axis, bracketed on a
/// uniform scan and bisected.
std::vector<double> msf_real_axis_zeros(const PeriodicOrbit& orbit,
                                        const Mat& J, double beta_lo,
                                        double beta_hi, int scan = 400);

// ---------------------------------------------------------------------------
// Network verdicts
// ---------------------------------------------------------------------------

struct ModeVerdict {
  Complex graph_eigenvalue;
  Complex beta;
  double exponent = 0;  // msf value at beta
};

struct SyncVerdict {
  bool stable = false;
  std::vector<ModeVerdict> modes;  // nontrivial modes only
  int critical_mode = -1;          // index into modes
  VecC critical_vector;            // predicted emergent pattern
};

/// Laplacian-form coupling (-sigma L H): beta_l = sigma lambda_l(L).
/// Adjacency-form (+sigma w H): beta_l = -sigma lambda_l(w); the mode
/// aligned with the all-ones vector is the tangential one in both cases.
SyncVerdict network_sync_stability(const PeriodicOrbit& orbit, const Mat& J,
                                   const Network& net, double sigma,
                                   bool laplacian_form = true);

// ---------------------------------------------------------------------------
// Synaptically coupled IF network
// ---------------------------------------------------------------------------

/// Synchronous tonic orbit of the planar IF neuron with its own
/// alpha-synapse appended (v, w, s, u); `self_drive` is sigma times the
/// adjacency row sum (zero for balanced rings).
PeriodicOrbit synaptic_if_orbit(const std::map<std::string, double>& params,
                                double alpha, double self_drive = 0.0);

/// Feedthrough of the synaptic coupling: v driven by the presynaptic s.
Mat synaptic_feedthrough(int dim = 4, int v_index = 0);

// ---------------------------------------------------------------------------
// Wilson-Cowan ring
// ---------------------------------------------------------------------------

struct WilsonCowanMsf {
  PeriodicOrbit orbit;               // synchronous (u, v) orbit
  std::vector<std::vector<Complex>> multipliers;  // per mode p = 0..N-1
  bool stable = false;               // nontrivial multipliers inside the disk
  int critical_mode = -1;
  Complex critical_multiplier;
};

/// Per-mode variational products for a ring of N Wilson-Cowan nodes with
/// exponentially decaying circulant coupling of scale sigma_scale. The
/// segment sequence is read off the computed synchronous orbit.
WilsonCowanMsf wilson_cowan_msf(const std::map<std::string, double>& params,
                                int N, double sigma_scale);

// ---------------------------------------------------------------------------
// Switched-linear (time-dependent switching) sequences
// ---------------------------------------------------------------------------

struct SwitchedSegment {
  Mat A;
  double dt = 0;
};

struct SwitchedResult {
  double exponent = 0;        // max Re(ln lambda) / total duration
  Complex dominant;           // largest-modulus multiplier
  std::string bifurcation;    // "period_doubling", "tangent", "neimark_sacker", "none"
};

/// Psi(eta) = exp[(A_M - eta H) dt_M] ... exp[(A_1 - eta H) dt_1]; driven
/// sequences have no tangential mode, so all multipliers count.
SwitchedResult switched_linear_msf(const std::vector<SwitchedSegment>& segments,
                                   const Mat& H, Complex eta);

// ---------------------------------------------------------------------------
// Cow herd
// ---------------------------------------------------------------------------

/// Synchronous grazing cycle under row-normalized coupling of strength
/// sigma (analytic initial guesses from the closed-form orbit).
PeriodicOrbit cow_orbit(const std::map<std::string, double>& params,
                        double sigma = 0.0);

struct CowHerdResult {
  std::vector<Complex> eigenvalues;  // of the 2N x 2N product
  bool stable = false;               // all but the tangential inside the disk
  double max_transverse_modulus = 0;
};

CowHerdResult cow_herd_monodromy(const std::map<std::string, double>& params,
                                 const Mat& w, double sigma);

/// Smallest sigma in [lo, hi] at which the herd's synchronous cycle becomes
/// stable (max transverse modulus crosses 1 downward).
double cow_herd_critical_sigma(const std::map<std::string, double>& params,
                               const Mat& w, double lo, double hi,
                               double tol = 1e-4);

}  // namespace pwlnet
