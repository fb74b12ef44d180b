#pragma once

// Cluster-state machinery: symmetry enumeration for small graphs, Laplacian
// merges, invariant-subspace (quotient) orbits, and block-diagonalized
// transverse Floquet analysis.

#include "pwlnet/graphs.hpp"
#include "pwlnet/orbit.hpp"

#include <memory>
#include <string>
#include <vector>

namespace pwlnet {

/// All permutations commuting with the graph Laplacian (entrywise 1e-9),
/// by pruned backtracking. N is capped at 10; callers with larger graphs
/// supply partitions directly.
std::vector<std::vector<int>> automorphisms(const Mat& w);

struct ClusterPartition {
  std::vector<std::vector<int>> blocks;  // disjoint, covering 0..N-1
  std::string provenance;                // "symmetry" or "laplacian-merge"
  std::vector<std::vector<int>> generators;  // for symmetry-derived states

  int num_blocks() const { return static_cast<int>(blocks.size()); }
};

/// Orbit partitions of subgroups generated by up to 3 automorphisms,
/// deduplicated, plus every chain of dynamically valid Laplacian merges
/// (equal cross-block Laplacian row sums).
std::vector<ClusterPartition> enumerate_cluster_states(const Mat& w);

/// Equal-row-sum validity of a partition for Laplacian coupling.
bool partition_dynamically_valid(const Mat& L, const ClusterPartition& part,
                                 double tol = 1e-9);

/// Quotient Laplacian: row k sums the L-rows of any member of block k over
/// block l (partition must be dynamically valid).
Mat quotient_laplacian(const Mat& L, const ClusterPartition& part);

/// The mM-dimensional synchronization-subspace system: block zones
/// A_mu(k) - sigma (LQ (x) J) with one copy of each base manifold per
/// cluster. Zone ids encode the per-cluster zone tuple in base P digits
/// (cluster 0 least significant); manifold ids group by cluster.
PwlSystem quotient_system(const PwlSystem& sys, const Mat& LQ, double sigma,
                          const Mat& J);

/// Orbit of the cluster state on the synchronization subspace.
PeriodicOrbit cluster_orbit(std::shared_ptr<const PwlSystem> sys, const Mat& L,
                            const ClusterPartition& part, double sigma,
                            const Mat& J, const OrbitTemplate& quotient_tmpl,
                            const std::vector<double>& times_guess,
                            const Vec& state_guess);

struct ClusterFloquet {
  std::vector<Complex> sync_multipliers;        // contains the trivial 1
  std::vector<Complex> transverse_multipliers;  // all must lie inside
  bool stable = false;
  double max_transverse_modulus = 0;
};

/// Transverse/synchronization Floquet data for the cluster state, using the
/// orthogonal block-diagonalizer Q (rows: synchronization coordinates first).
ClusterFloquet cluster_floquet(const PwlSystem& sys, const Mat& L,
                               const ClusterPartition& part,
                               const PeriodicOrbit& quotient_orbit,
                               double sigma, const Mat& J, const Mat& Q);

// ---------------------------------------------------------------------------
// The five-node reference example
// ---------------------------------------------------------------------------

Mat five_node_demo_laplacian();
/// Orthogonal Q whose transform gives the block form
/// [[3, -sqrt6], [-sqrt6, 2]] (+) diag(5, 3, 3) for the demo Laplacian.
Mat five_node_demo_q();
ClusterPartition five_node_demo_partition();  // {1,3,5}, {2,4} (1-based)

/// Quotient template and guess for the demo cluster state of the absolute
/// model at coupling sigma (the seven-unknown problem).
struct ClusterPreset {
  OrbitTemplate tmpl;
  std::vector<double> times_guess;
  Vec state_guess;
};
ClusterPreset five_node_demo_preset(double sigma);

std::string partitions_json(const std::vector<ClusterPartition>& parts);

}  // namespace pwlnet
