#pragma once

// Event-exact direct simulation of PWL node networks (zone-wise exact affine
// propagation, bracketed event location) and of reduced phase networks.

#include "pwlnet/coupling.hpp"
#include "pwlnet/fourier.hpp"
#include "pwlnet/graphs.hpp"
#include "pwlnet/orbit.hpp"
#include "pwlnet/pwl_model.hpp"

#include <memory>
#include <string>
#include <vector>

namespace pwlnet {

struct TrajectoryEvent {
  double time = 0;
  int node = 0;
  int manifold = 0;
  int direction = 0;  // sign of ∇h·ẋ at the event (0 for sliding exits)
  Vec pre_state, post_state;  // node-local
  bool entered_sliding = false;
  bool exited_sliding = false;
};

struct Trajectory {
  int nodes = 0;
  int dim = 0;  // per-node dimension after any synaptic augmentation
  std::vector<double> times;
  std::vector<Vec> states;  // stacked node-major, nodes*dim entries
  std::vector<TrajectoryEvent> events;
  std::vector<std::vector<double>> spikes;

  Vec node_state(int sample, int node) const {
    return states.at(static_cast<size_t>(sample))
        .segment(node * dim, dim);
  }
};

struct SimOptions {
  double t_max = 100.0;
  double dt_out = 0.01;
  double event_time_tol = 1e-12;
  double event_group_tol = 1e-10;
  long max_events = 1000000;
  int bracket_factor = 16;  // sub-sampling of each output step
  std::vector<int> initial_zones;  // required for automaton systems
};

/// Coupled network run. x0 is dim0 x N column-per-node; for synaptic
/// coupling the (s, u) variables are appended automatically (zeros unless
/// x0 already carries them).
Trajectory simulate_network(std::shared_ptr<const PwlSystem> sys,
                            const Network& net, double sigma,
                            const CouplingSpec& coupling, const Mat& x0,
                            const SimOptions& opts);

Trajectory simulate_single(std::shared_ptr<const PwlSystem> sys, const Vec& x0,
                           const SimOptions& opts);

// ---------------------------------------------------------------------------
// Orbit harvesting: run a transient, then read the repeating event cycle off
// the trajectory. This is how the zoo presets were produced.
// ---------------------------------------------------------------------------

struct HarvestedCycle {
  OrbitTemplate tmpl;
  std::vector<double> times;
  Vec entry_state;
  double period = 0;
};

HarvestedCycle harvest_orbit_cycle(std::shared_ptr<const PwlSystem> sys,
                                   const Vec& x0, double settle_time,
                                   double record_time, int initial_zone = -1,
                                   double dt_out = 0.005);

// ---------------------------------------------------------------------------
// Phase-network simulation and summary statistics
// ---------------------------------------------------------------------------

struct PhaseTrajectory {
  std::vector<double> times;
  std::vector<Vec> phases;  // reduced mod 2*pi on output
};

/// Fixed-step RK4 for theta_i' = omega + sigma sum_j w_ij H(theta_j - theta_i).
PhaseTrajectory phase_network_sim(const FourierSeries& H, const Network& net,
                                  double sigma, double omega, const Vec& theta0,
                                  double t_max, double dt_out = 0.1);

/// Kuramoto order parameter R = |N^{-1} sum_j e^{i theta_j}|.
double order_parameter(const Vec& phases);

/// Pairwise phase coherence |<cos(theta_i - theta_j)>_t| after burn-in.
Mat fc_matrix(const PhaseTrajectory& traj, double burn_in);

/// Phases of planar node states by atan2 about a reference interior point.
Vec phases_from_states(const Trajectory& traj, int sample, const Vec& center,
                       int v_index = 0, int w_index = 1);

/// Max over nodes of ||x_i - x_mean|| at a sample; the synchrony error.
double sync_error(const Trajectory& traj, int sample);

void export_trajectory_csv(const Trajectory& traj, const std::string& path);
void export_spikes_csv(const Trajectory& traj, const std::string& path);

}  // namespace pwlnet
