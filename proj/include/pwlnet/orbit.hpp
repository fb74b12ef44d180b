#pragma once

// Periodic-orbit construction by matching zone-wise flows across manifolds,
// saltation matrices, the monodromy matrix, and Floquet exponents.

#include "pwlnet/pwl_model.hpp"

#include <memory>
#include <string>
#include <vector>

namespace pwlnet {

/// One template entry: flow in `zone` until `manifold` is hit with the
/// velocity sign `direction` (+1 for ∇h·ẋ > 0), then apply its jump.
struct OrbitEvent {
  int zone = 0;
  int manifold = 0;
  int direction = +1;
};

struct OrbitTemplate {
  std::vector<OrbitEvent> events;
  int size() const { return static_cast<int>(events.size()); }
};

struct OrbitSegment {
  int zone = 0;
  Vec entry_state;         // x(t_{i-1}^+)
  double time_of_flight = 0;
  double start_time = 0;
  Mat propagator;          // G(T_i; A_zone)
  // Interior matching states from the multiple-shooting refinement of long
  // segments (near-homoclinic passages); first entry is entry_state. state()
  // evaluates from the nearest left anchor so growth never amplifies
  // round-off beyond one chunk.
  std::vector<Vec> chunk_states;
  double chunk_len = 0;

  int n_chunks() const {
    return chunk_states.empty() ? 1 : static_cast<int>(chunk_states.size());
  }
};

struct OrbitEventData {
  int manifold = 0;
  int direction = +1;
  double time = 0;          // t_i
  Vec pre_state, post_state;
  Vec pre_velocity, post_velocity;
  Mat saltation;
};

struct FloquetData {
  Mat monodromy;
  std::vector<Complex> multipliers;  // sorted by descending modulus
  std::vector<VecC> vectors;
  int trivial_index = -1;            // multiplier within 1e-6 of 1
  double period = 0;

  Complex exponent(int k) const;     // ln(lambda_k) / T
  /// Largest-modulus multiplier other than the trivial one.
  Complex nontrivial_multiplier() const;
  /// Real eigenvector for the nontrivial multiplier (planar use).
  Vec nontrivial_vector() const;
};

struct PeriodicOrbit {
  std::shared_ptr<const PwlSystem> system;
  std::vector<OrbitSegment> segments;
  std::vector<OrbitEventData> events;
  double period = 0;
  FloquetData floquet;

  int num_segments() const { return static_cast<int>(segments.size()); }
  int segment_index(double t) const;  // t taken mod period
  Vec state(double t) const;
  Vec velocity(double t) const;
  int zone_at(double t) const;
};

struct OrbitOptions {
  // Tighter than the contract's 1e-10: the response curves push orbit
  // residuals through saltation identities scaled by ||Z||.
  double residual_tol = 1e-11;
  double closure_tol = 1e-9;
  double grazing_tol = 1e-8;
  int validity_samples = 1000;
};

/// Solves the simultaneous matching equations for the template. The unknown
/// vector is (T_1..T_M, y_1..y_{m-1}) with y the coordinates of the initial
/// state in the orthonormal tangent frame of the final event's image set
/// (see entry_frame).
PeriodicOrbit find_periodic_orbit(std::shared_ptr<const PwlSystem> sys,
                                  const OrbitTemplate& tmpl, const Vec& guess,
                                  const OrbitOptions& opts = OrbitOptions{});

/// Convenience overload: guess given as times-of-flight plus a full initial
/// state (projected onto the admissible affine set internally).
PeriodicOrbit find_periodic_orbit(std::shared_ptr<const PwlSystem> sys,
                                  const OrbitTemplate& tmpl,
                                  const std::vector<double>& times_guess,
                                  const Vec& state_guess,
                                  const OrbitOptions& opts = OrbitOptions{});

/// Affine parameterization {base + frame * y} of the admissible initial
/// states implied by the template's final event (its manifold mapped through
/// its jump rule). frame has orthonormal columns.
void entry_frame(const PwlSystem& sys, const OrbitTemplate& tmpl, Vec* base,
                 Mat* frame);

/// S(t_i) = DJ + [x'(t_i^+) - DJ x'(t_i^-)] n^T / (n . x'(t_i^-)).
Mat saltation_matrix(const PwlSystem& sys, const PeriodicOrbit& orbit,
                     int event_index);

/// Psi = S(t_M) G(T_M) ... S(t_1) G(T_1); multipliers are its eigenvalues.
FloquetData monodromy(const PeriodicOrbit& orbit);

/// Planar closed form kappa = (1/T) sum_i [T_i Tr A_mu(i) + ln|det S(t_i)|].
double floquet_exponent_planar(const PeriodicOrbit& orbit);

// ---------------------------------------------------------------------------
// Zoo presets: template plus a working guess per built-in model (defaults
// correspond to the reference-figure parameter sets).
// ---------------------------------------------------------------------------

struct OrbitPreset {
  OrbitTemplate tmpl;
  std::vector<double> times_guess;
  Vec state_guess;
};

OrbitPreset zoo_orbit_preset(const std::string& model_name);

/// Builds the model with defaults (plus overrides) and solves its preset
/// orbit in one call.
PeriodicOrbit zoo_orbit(const std::string& model_name,
                        const std::map<std::string, double>& params = {});

// CSV / JSON export
void export_orbit_csv(const PeriodicOrbit& orbit, const std::string& path,
                      int samples_per_period = 512);
std::string orbit_summary_json(const PeriodicOrbit& orbit);

}  // namespace pwlnet
