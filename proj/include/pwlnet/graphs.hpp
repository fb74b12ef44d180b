#pragma once

// Constructors and spectra for the network architectures used by the
// reductions and the master stability function.

#include "pwlnet/numerics.hpp"

#include <map>
#include <string>
#include <vector>

namespace pwlnet {

struct Network {
  int N = 0;
  Mat w;  // adjacency
  std::string kind;
  std::map<std::string, double> params;

  /// Combinatorial graph Laplacian [L]_ij = -w_ij + delta_ij sum_k w_ik.
  Mat laplacian() const;
};

/// kinds: global, star, circulant (row entries as params w0..w{N-1}),
/// balanced_ring (N odd, scale d; the balance offset a is solved so every
/// row sums to zero), franklin_ring, synthetic_sc, custom (via adjacency()).
Network make_network(const std::string& kind,
                     const std::map<std::string, double>& params);

Network network_from_adjacency(const Mat& w, const std::string& kind = "custom");

/// Balanced-ring profile w(x) = (1 - a|x|/d) exp(-|x|/d) on ring distances.
double balanced_ring_offset(int N, double d);

/// The four circulant coupling matrices W^{ab} of an exponentially decaying
/// ring, each with row sum w_ab; order is uu, vu, uv, vv.
std::array<Mat, 4> make_exp_ring(int N, double sigma_scale, double wuu,
                                 double wvu, double wuv, double wvv);

struct Spectrum {
  std::vector<EigenPair> adjacency;
  std::vector<EigenPair> laplacian;
};

/// Eigenpairs of w and of L, sorted by descending real part.
Spectrum spectrum(const Network& net);

/// Closed-form circulant eigenvalues sum_j row_j exp(2 pi i l j / N).
std::vector<Complex> circulant_eigenvalues(const std::vector<double>& row);

}  // namespace pwlnet
