#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pwlnet/numerics.hpp"
#include "pwlnet/pwl_model.hpp"

#include <cmath>
#include <random>

using namespace pwlnet;

namespace {

// Independent oracle: plain Taylor series summed to machine convergence.
Mat expm_series(const Mat& A, double t, int terms = 200) {
  Mat acc = Mat::Identity(A.rows(), A.cols());
  Mat term = acc;
  for (int k = 1; k <= terms; ++k) {
    term = term * A * (t / k);
    acc += term;
    if (term.lpNorm<Eigen::Infinity>() < 1e-18) break;
  }
  return acc;
}

// Independent oracle: composite Simpson quadrature of G(s;A) over [0, t].
Mat capk_simpson(const Mat& A, double t, int panels = 10000) {
  Mat acc = Mat::Zero(A.rows(), A.cols());
  const double h = t / panels;
  for (int p = 0; p < panels; ++p) {
    const double s0 = p * h;
    acc += (h / 6.0) * (expm_series(A, s0) + 4.0 * expm_series(A, s0 + h / 2) +
                        expm_series(A, s0 + h));
  }
  return acc;
}

Mat random_matrix(int n, std::mt19937& rng, double scale) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Mat A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = scale * uni(rng);
  return A;
}

}  // namespace

TEST_CASE("expm of the zero matrix is the identity") {
  Mat A = Mat::Zero(2, 2);
  CHECK((expm(A, 3.0) - Mat::Identity(2, 2)).norm() == doctest::Approx(0.0));
}

TEST_CASE("expm of a diagonal matrix exponentiates the diagonal") {
  Mat A = Mat::Zero(2, 2);
  A(0, 0) = -1.0;
  A(1, 1) = 2.0;
  Mat G = expm(A, 1.0);
  CHECK(G(0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(G(1, 1) == doctest::Approx(std::exp(2.0)).epsilon(1e-14));
  CHECK(std::abs(G(0, 1)) < 1e-15);
}

TEST_CASE("expm matches the Taylor-series oracle on the absolute model") {
  PwlSystem sys = builtin_model("absolute", {{"a", 0.0}, {"d", 0.5}});
  const Mat& A2 = sys.zones[1].A;
  Mat G = expm(A2, 0.7);
  Mat oracle = expm_series(A2, 0.7);
  CHECK((G - oracle).lpNorm<Eigen::Infinity>() < 1e-13);
}

TEST_CASE("expm rejects non-square and non-finite input") {
  CHECK_THROWS_AS(expm(Mat(Mat::Zero(2, 3)), 1.0), DimensionError);
  Mat bad = Mat::Zero(2, 2);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(expm(bad, 1.0), NumericError);
}

TEST_CASE("cap_k of the zero matrix integrates the identity") {
  Mat K = cap_k(Mat(Mat::Zero(2, 2)), 2.0);
  CHECK((K - 2.0 * Mat::Identity(2, 2)).lpNorm<Eigen::Infinity>() < 1e-14);
}

TEST_CASE("cap_k of a diagonal matrix gives scalar integrals") {
  Mat A = Mat::Zero(2, 2);
  A(0, 0) = -1.0;
  A(1, 1) = 2.0;
  Mat K = cap_k(A, 1.0);
  CHECK(K(0, 0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-13));
  CHECK(K(1, 1) == doctest::Approx((std::exp(2.0) - 1.0) / 2.0).epsilon(1e-13));
}

TEST_CASE("cap_k matches the Simpson oracle on the McKean matrix") {
  PwlSystem sys = builtin_model("mckean2", {{"gamma", 1.0}, {"b", 2.0}});
  const Mat& A1 = sys.zones[0].A;
  Mat K = cap_k(A1, 0.5);
  Mat oracle = capk_simpson(A1, 0.5);
  CHECK((K - oracle).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("cap_k inverse and augmented-block routes agree") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    Mat A = random_matrix(3, rng, 1.0);
    Mat direct = cap_k(A, 0.8);
    Mat aug = Mat::Zero(6, 6);
    aug.topLeftCorner(3, 3) = A;
    aug.topRightCorner(3, 3) = Mat::Identity(3, 3);
    Mat via_block = expm(aug, 0.8).topRightCorner(3, 3);
    CHECK((direct - via_block).lpNorm<Eigen::Infinity>() < 1e-9);
  }
}

TEST_CASE("cap_k handles singular matrices through the augmented block") {
  Mat A = Mat::Zero(2, 2);
  A(0, 1) = 1.0;  // nilpotent: K(t) = tI + t^2/2 A
  Mat K = cap_k(A, 2.0);
  CHECK(K(0, 0) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(K(0, 1) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(K(1, 1) == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("expm semigroup property on random matrices") {
  std::mt19937 rng(42);
  for (int n = 2; n <= 5; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      Mat A = random_matrix(n, rng, 1.5);
      const double s = 0.4, t = 1.1;
      Mat lhs = expm(A, s) * expm(A, t);
      Mat rhs = expm(A, s + t);
      CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() < 1e-10);
    }
  }
}

TEST_CASE("d/dt expm equals A expm by central differences") {
  std::mt19937 rng(3);
  Mat A = random_matrix(3, rng, 1.0);
  const double t0 = 0.9, h = 1e-5;
  Mat fd = (expm(A, t0 + h) - expm(A, t0 - h)) / (2 * h);
  CHECK((fd - A * expm(A, t0)).lpNorm<Eigen::Infinity>() < 1e-6);
}

TEST_CASE("det expm equals exp of trace times t") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 8; ++trial) {
    Mat A = random_matrix(4, rng, 1.0);
    const double t = 0.7;
    CHECK(expm(A, t).determinant() ==
          doctest::Approx(std::exp(t * A.trace())).epsilon(1e-9));
  }
}

TEST_CASE("eig of the identity returns three unit eigenvalues") {
  auto pairs = eig(Mat(Mat::Identity(3, 3)));
  for (const auto& p : pairs) {
    CHECK(std::abs(p.value - Complex(1, 0)) < 1e-12);
  }
}

TEST_CASE("eig of the planar rotation gives plus and minus i") {
  Mat A(2, 2);
  A << 0, 1, -1, 0;
  auto pairs = eig(A);
  CHECK(std::abs(pairs[0].value - Complex(0, 1)) < 1e-12);
  CHECK(std::abs(pairs[1].value - Complex(0, -1)) < 1e-12);
}

TEST_CASE("eig residuals stay below tolerance") {
  std::mt19937 rng(19);
  Mat A = random_matrix(5, rng, 2.0);
  auto pairs = eig(A);
  MatC Ac = A.cast<Complex>();
  for (const auto& p : pairs) {
    CHECK((Ac * p.vector - p.value * p.vector).norm() <= 1e-9 * A.norm());
  }
}

TEST_CASE("solve_root on scalar problems") {
  RootProblem p;
  p.dimension = 1;
  p.residual = [](const Vec& x) {
    return Vec::Constant(1, x(0) * x(0) - 4.0);
  };
  p.x0 = Vec::Constant(1, 3.0);
  Vec root = solve_root(p, 1e-12);
  CHECK(root(0) == doctest::Approx(2.0).epsilon(1e-10));

  p.residual = [](const Vec& x) { return x; };
  p.x0 = Vec::Constant(1, 5.0);
  CHECK(std::abs(solve_root(p, 1e-12)(0)) < 1e-12);
}

TEST_CASE("solve_root reports non-convergence with the best residual") {
  RootProblem p;
  p.dimension = 1;
  p.residual = [](const Vec& x) {
    return Vec::Constant(1, 1.0 + x(0) * x(0));  // no real root
  };
  p.x0 = Vec::Constant(1, 2.0);
  CHECK_THROWS_AS(solve_root(p, 1e-12), NumericError);
}

TEST_CASE("parallel_for covers every index exactly once") {
  std::vector<int> hits(257, 0);
  parallel_for(257, [&](int i) { hits[static_cast<size_t>(i)]++; });
  for (int h : hits) CHECK(h == 1);
}
