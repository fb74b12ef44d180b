#include "pwlnet/numerics.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace pwlnet {

namespace {

template <typename Scalar>
MatX<Scalar> expm_impl(const MatX<Scalar>& A, double t) {
  if (A.rows() != A.cols()) {
    throw DimensionError("expm: matrix must be square, got " +
                         std::to_string(A.rows()) + "x" +
                         std::to_string(A.cols()));
  }
  if (!A.allFinite() || !std::isfinite(t)) {
    throw NumericError("expm: non-finite input");
  }
  return (A * Scalar(t)).exp();
}

template <typename Scalar>
MatX<Scalar> cap_k_impl(const MatX<Scalar>& A, double t) {
  const auto n = A.rows();
  if (n != A.cols()) {
    throw DimensionError("cap_k: matrix must be square");
  }
  Eigen::FullPivLU<MatX<Scalar>> lu(A);
  const double rc = lu.rcond();
  if (lu.isInvertible() && std::isfinite(rc) &&
      rc > 1.0 / kCapKConditionLimit) {
    MatX<Scalar> g = expm_impl<Scalar>(A, t);
    g.diagonal().array() -= Scalar(1);
    MatX<Scalar> k = lu.solve(g);
    if ((A * k - g).norm() <= 1e-8 * std::max(1.0, g.norm())) {
      return k;
    }
  }
  // Augmented block exponential: exp([[A, I],[0,0]] t) = [[G, K],[0, I]].
  MatX<Scalar> aug = MatX<Scalar>::Zero(2 * n, 2 * n);
  aug.topLeftCorner(n, n) = A;
  aug.topRightCorner(n, n) = MatX<Scalar>::Identity(n, n);
  return expm_impl<Scalar>(aug, t).topRightCorner(n, n);
}

bool eig_less(const EigenPair& a, const EigenPair& b) {
  if (a.value.real() != b.value.real()) return a.value.real() > b.value.real();
  return a.value.imag() > b.value.imag();
}

}  // namespace

Mat expm(const Mat& A, double t) { return expm_impl<double>(A, t); }
MatC expm(const MatC& A, double t) { return expm_impl<Complex>(A, t); }

Mat cap_k(const Mat& A, double t) { return cap_k_impl<double>(A, t); }
MatC cap_k(const MatC& A, double t) { return cap_k_impl<Complex>(A, t); }

std::vector<EigenPair> eig(const Mat& A) {
  if (A.rows() != A.cols()) throw DimensionError("eig: matrix must be square");
  Eigen::EigenSolver<Mat> solver(A, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) {
    throw NumericError("eig: QR iteration failed to converge");
  }
  std::vector<EigenPair> pairs(static_cast<size_t>(A.rows()));
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    pairs[static_cast<size_t>(i)] = {solver.eigenvalues()(i),
                                     solver.eigenvectors().col(i)};
  }
  std::sort(pairs.begin(), pairs.end(), eig_less);
  return pairs;
}

std::vector<EigenPair> eig(const MatC& A) {
  if (A.rows() != A.cols()) throw DimensionError("eig: matrix must be square");
  Eigen::ComplexEigenSolver<MatC> solver(A, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) {
    throw NumericError("eig: QR iteration failed to converge");
  }
  std::vector<EigenPair> pairs(static_cast<size_t>(A.rows()));
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    pairs[static_cast<size_t>(i)] = {solver.eigenvalues()(i),
                                     solver.eigenvectors().col(i)};
  }
  std::sort(pairs.begin(), pairs.end(), eig_less);
  return pairs;
}

Vec solve_root(const RootProblem& p, double tol, const RootOptions& opts) {
  if (tol <= 0) throw ValidationError("solve_root: tol must be positive");
  if (!p.residual) throw ValidationError("solve_root: missing residual map");
  if (p.x0.size() != p.dimension) {
    throw DimensionError("solve_root: x0 size does not match dimension");
  }

  const int n = p.dimension;
  Vec x = p.x0;
  Vec fx = p.residual(x);
  if (fx.size() != n) {
    throw DimensionError("solve_root: residual size does not match dimension");
  }
  double best = fx.lpNorm<Eigen::Infinity>();
  Vec best_x = x;

  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    const double fnorm = fx.lpNorm<Eigen::Infinity>();
    if (fnorm < best) {
      best = fnorm;
      best_x = x;
    }
    if (fnorm <= tol) return x;

    // Forward-difference Jacobian, column by column.
    Mat jac(n, n);
    for (int j = 0; j < n; ++j) {
      const double h = opts.fd_step * std::max(1.0, std::abs(x(j)));
      Vec xj = x;
      xj(j) += h;
      jac.col(j) = (p.residual(xj) - fx) / h;
    }

    Eigen::PartialPivLU<Mat> lu(jac);
    Vec step = lu.solve(-fx);
    if (!step.allFinite()) {
      if (opts.best_effort) return best_x;
      throw SingularityError("solve_root: singular Jacobian");
    }

    double alpha = 1.0;
    bool accepted = false;
    for (int k = 0; k <= opts.max_halvings; ++k) {
      Vec trial = x + alpha * step;
      Vec ftrial = p.residual(trial);
      if (ftrial.allFinite() &&
          ftrial.lpNorm<Eigen::Infinity>() < fnorm) {
        x = trial;
        fx = ftrial;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      if (opts.best_effort) return best_x;
      throw SingularityError(
          "solve_root: line search stalled after damping (residual " +
          std::to_string(fnorm) + ")");
    }
  }

  if (fx.lpNorm<Eigen::Infinity>() <= tol) return x;
  if (opts.best_effort) return best_x;
  throw ConvergenceError("solve_root: iteration cap reached", best);
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  const int workers =
      std::min<int>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next(0);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace pwlnet
