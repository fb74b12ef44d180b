#pragma once

// Dense-matrix kernels shared by every other module: matrix exponentials,
// their running integrals, eigen decompositions and a damped Newton solver.

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pwlnet {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;
using Complex = std::complex<double>;

template <typename Scalar>
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// ---------------------------------------------------------------------------
// Error taxonomy. The CLI maps ValidationError to exit code 2 and everything
// else derived from NumericError to exit code 3.
// ---------------------------------------------------------------------------

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : ValidationError {
  using ValidationError::ValidationError;
};

/// Newton iteration hit its cap; carries the best residual norm seen.
struct ConvergenceError : NumericError {
  ConvergenceError(const std::string& what, double best)
      : NumericError(what), best_residual(best) {}
  double best_residual;
};

struct SingularityError : NumericError {
  using NumericError::NumericError;
};

/// Transversality |∇h·ẋ| fell below tolerance at a switching event.
struct GrazingError : NumericError {
  using NumericError::NumericError;
};

/// Query landed on (or within tolerance of) a switching manifold.
struct BoundaryError : ValidationError {
  BoundaryError(const std::string& what, int manifold)
      : ValidationError(what), manifold_id(manifold) {}
  int manifold_id;
};

// ---------------------------------------------------------------------------
// Matrix exponential kernels
// ---------------------------------------------------------------------------

/// G(t;A) = exp(A t) via scaling-and-squaring with a Pade approximant.
Mat expm(const Mat& A, double t = 1.0);
MatC expm(const MatC& A, double t = 1.0);

/// K(t;A) = \int_0^t exp(A s) ds.  Uses A^{-1}[G - I] when A is comfortably
/// invertible and otherwise falls back to the upper-right block of
/// exp([[A, I], [0, 0]] t), which is exact for singular A.
Mat cap_k(const Mat& A, double t);
MatC cap_k(const MatC& A, double t);

/// Condition threshold above which cap_k switches to the augmented form.
inline constexpr double kCapKConditionLimit = 1e12;

// ---------------------------------------------------------------------------
// Eigen decompositions
// ---------------------------------------------------------------------------

struct EigenPair {
  Complex value;
  VecC vector;  // unit norm
};

/// Eigenpairs sorted by descending real part (ties by descending imag part).
std::vector<EigenPair> eig(const Mat& A);
std::vector<EigenPair> eig(const MatC& A);

// ---------------------------------------------------------------------------
// Root finding
// ---------------------------------------------------------------------------

struct RootProblem {
  int dimension = 0;
  std::function<Vec(const Vec&)> residual;
  Vec x0;
};

struct RootOptions {
  int max_iterations = 200;
  int max_halvings = 30;
  double fd_step = 1e-7;  // scaled by max(1, |x_i|) per component
  // Return the best iterate instead of throwing when the iteration stalls
  // at the round-off floor of the residual evaluation.
  bool best_effort = false;
};

/// Damped Newton with a forward-difference Jacobian.  Returns x with
/// ||F(x)||_inf <= tol or throws ConvergenceError / SingularityError.
Vec solve_root(const RootProblem& p, double tol,
               const RootOptions& opts = RootOptions{});

// ---------------------------------------------------------------------------
// Small shared utilities
// ---------------------------------------------------------------------------

/// Runs fn(i) for i in [0, n) across a bounded pool of worker threads.
/// fn must write only to disjoint state per index.
void parallel_for(int n, const std::function<void(int)>& fn);

inline double wrap_two_pi(double x) {
  constexpr double two_pi = 6.283185307179586476925286766559;
  double y = std::fmod(x, two_pi);
  if (y < 0) y += two_pi;
  return y;
}

}  // namespace pwlnet
