#include "pwlnet/graphs.hpp"

#include <cmath>
#include <random>

namespace pwlnet {

Mat Network::laplacian() const {
  Mat L = -w;
  for (int i = 0; i < N; ++i) L(i, i) += w.row(i).sum();
  return L;
}

Network network_from_adjacency(const Mat& w, const std::string& kind) {
  if (w.rows() != w.cols()) {
    throw DimensionError("network: adjacency must be square");
  }
  Network net;
  net.N = static_cast<int>(w.rows());
  net.w = w;
  net.kind = kind;
  return net;
}

namespace {

int ring_distance(int i, int j, int N) {
  int d = std::abs(i - j);
  return std::min(d, N - d);
}

int require_n(const std::map<std::string, double>& params) {
  auto it = params.find("N");
  if (it == params.end()) throw ValidationError("make_network: parameter N required");
  int N = static_cast<int>(it->second);
  if (N < 2) throw ValidationError("make_network: N must be at least 2");
  return N;
}

}  // namespace

double balanced_ring_offset(int N, double d) {
  if (N % 2 == 0) throw ValidationError("balanced_ring: N must be odd");
  const int half = (N - 1) / 2;
  auto row_sum = [&](double a) {
    double s = 1.0;  // x = 0 term
    for (int x = 1; x <= half; ++x) {
      s += 2.0 * (1.0 - a * x / d) * std::exp(-x / d);
    }
    return s;
  };
  double lo = -1e6, hi = 1e6;
  if (row_sum(lo) * row_sum(hi) > 0) {
    throw NumericError("balanced_ring: cannot bracket the balance offset");
  }
  while (hi - lo > 1e-12 * std::max(1.0, std::abs(lo))) {
    double mid = 0.5 * (lo + hi);
    if (row_sum(lo) * row_sum(mid) <= 0) hi = mid; else lo = mid;
  }
  return 0.5 * (lo + hi);
}

Network make_network(const std::string& kind,
                     const std::map<std::string, double>& params) {
  auto get = [&](const std::string& key, double fallback) {
    auto it = params.find(key);
    return it != params.end() ? it->second : fallback;
  };

  if (kind == "global") {
    const int N = require_n(params);
    Network net = network_from_adjacency(Mat::Constant(N, N, 1.0 / N), kind);
    net.params = params;
    return net;
  }

  if (kind == "star") {
    const int N = require_n(params);
    const double K = get("K", N - 1.0);
    Mat w = Mat::Zero(N, N);
    for (int j = 1; j < N; ++j) {
      w(0, j) = 1.0 / K;
      w(j, 0) = 1.0;
    }
    Network net = network_from_adjacency(w, kind);
    net.params = params;
    return net;
  }

  if (kind == "circulant") {
    const int N = require_n(params);
    std::vector<double> row(static_cast<size_t>(N), 0.0);
    for (int j = 0; j < N; ++j) {
      row[static_cast<size_t>(j)] = get("w" + std::to_string(j), 0.0);
    }
    Mat w(N, N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        w(i, j) = row[static_cast<size_t>(((j - i) % N + N) % N)];
    Network net = network_from_adjacency(w, kind);
    net.params = params;
    return net;
  }

  if (kind == "balanced_ring") {
    const int N = require_n(params);
    const double d = get("d", 3.0);
    const double a = balanced_ring_offset(N, d);
    Mat w(N, N);
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) {
        const int x = ring_distance(i, j, N);
        w(i, j) = (1.0 - a * x / d) * std::exp(-x / d);
      }
    }
    Network net = network_from_adjacency(w, kind);
    net.params = params;
    net.params["a"] = a;
    return net;
  }

  if (kind == "franklin_ring") {
    // Symmetric ring with heterogeneous edge weights c_n on edge (n, n+1)
    // and c_N on the wrap-around edge.
    const int N = require_n(params);
    const double c_odd = get("c_odd", 1.0);
    const double c_even = get("c_even", 0.1);
    const double c2 = get("c2", -0.1);
    auto c = [&](int n) {  // 1-based edge index
      if (n == 2) return c2;
      return (n % 2 == 1) ? c_odd : c_even;
    };
    Mat w = Mat::Zero(N, N);
    for (int n = 1; n < N; ++n) {
      w(n - 1, n) = c(n);
      w(n, n - 1) = c(n);
    }
    w(0, N - 1) = c(N);
    w(N - 1, 0) = c(N);
    Network net = network_from_adjacency(w, kind);
    net.params = params;
    return net;
  }

  if (kind == "synthetic_sc") {
    // Stand-in structural-connectivity matrix: symmetric, zero diagonal,
    // squared-uniform weights from a fixed seed, scaled to unit maximum.
    const int N = static_cast<int>(get("N", 68));
    const unsigned seed = static_cast<unsigned>(get("seed", 7151));
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    Mat w = Mat::Zero(N, N);
    for (int i = 0; i < N; ++i) {
      for (int j = i + 1; j < N; ++j) {
        const double u = uni(rng);
        w(i, j) = w(j, i) = u * u;
      }
    }
    w /= w.maxCoeff();
    Network net = network_from_adjacency(w, kind);
    net.params = params;
    net.params["N"] = N;
    net.params["seed"] = seed;
    return net;
  }

  throw ValidationError("make_network: unknown kind '" + kind + "'");
}

std::array<Mat, 4> make_exp_ring(int N, double sigma_scale, double wuu,
                                 double wvu, double wuv, double wvv) {
  if (sigma_scale <= 0) throw ValidationError("exp_ring: scale must be positive");
  Mat profile(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      profile(i, j) = std::exp(-ring_distance(i, j, N) / sigma_scale);
  const double norm = profile.row(0).sum();
  profile /= norm;
  return {wuu * profile, wvu * profile, wuv * profile, wvv * profile};
}

Spectrum spectrum(const Network& net) {
  return Spectrum{eig(net.w), eig(net.laplacian())};
}

std::vector<Complex> circulant_eigenvalues(const std::vector<double>& row) {
  const int N = static_cast<int>(row.size());
  std::vector<Complex> lambda(static_cast<size_t>(N));
  for (int l = 0; l < N; ++l) {
    Complex acc = 0;
    for (int j = 0; j < N; ++j) {
      const double arg = 2.0 * M_PI * l * j / N;
      acc += row[static_cast<size_t>(j)] * Complex(std::cos(arg), std::sin(arg));
    }
    lambda[static_cast<size_t>(l)] = acc;
  }
  return lambda;
}

}  // namespace pwlnet
