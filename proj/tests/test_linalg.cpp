#include <doctest.h>

#include <cmath>
#include <random>

#include "msid/error.hpp"
#include "msid/linalg.hpp"
#include "oracles.hpp"

using msid::ErrorKind;
using msid::Matrix;
namespace la = msid::linalg;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const msid::Error& e) {
    return e.kind();
  }
  FAIL("expected msid::Error");
  return ErrorKind::io;
}

Matrix m2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_CASE("spectral radius of simple matrices") {
  CHECK(la::spectral_radius(Matrix::Zero(2, 2)) == doctest::Approx(0.0));
  CHECK(la::spectral_radius(Matrix::Identity(2, 2)) == doctest::Approx(1.0));
  CHECK(la::spectral_radius(m2(0.25, 0, 0, 0.95)) == doctest::Approx(0.95).epsilon(1e-12));
  CHECK(kind_of([] { (void)la::spectral_radius(Matrix::Zero(2, 3)); }) == ErrorKind::dimension);
}

TEST_CASE("spectral radius is absolutely homogeneous") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> alpha(-3.0, 3.0);
  for (int i = 0; i < 50; ++i) {
    const Matrix a = oracle::random_stable(rng, 1 + i % 6, 0.9);
    const double s = alpha(rng);
    CHECK(std::abs(la::spectral_radius(s * a) - std::abs(s) * la::spectral_radius(a)) <= 1e-8);
  }
}

TEST_CASE("symmetry and definiteness checks") {
  CHECK(la::is_symmetric(m2(2, 1, 1, 2)));
  CHECK_FALSE(la::is_symmetric(m2(2, 1, 1.01, 2)));
  CHECK(la::is_psd(m2(1, 1, 1, 1)));
  CHECK_FALSE(la::is_psd(m2(1, 2, 2, 1)));
  CHECK(la::is_pd(m2(2, 1, 1, 2)));
  CHECK_FALSE(la::is_pd(m2(1, 1, 1, 1)));
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 1) = std::nan("");
  CHECK(kind_of([&] { la::require_finite(bad, "x"); }) == ErrorKind::dimension);
}

TEST_CASE("lyapunov closed forms") {
  const Matrix q = m2(2, 0.5, 0.5, 1);
  CHECK(la::max_abs(la::solve_dlyap(Matrix::Zero(2, 2), q) - q) == 0.0);

  const Matrix scalar = la::solve_dlyap(Matrix::Constant(1, 1, 0.5), Matrix::Ones(1, 1));
  CHECK(scalar(0, 0) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));

  const Matrix a = m2(0.25, 0.5, 0, 0);
  const Matrix omega = la::solve_dlyap(a, Matrix::Identity(2, 2));
  CHECK(la::max_abs(omega - oracle::truncated_lyapunov(a, Matrix::Identity(2, 2), 200)) <= 1e-12);
  CHECK(la::max_abs(omega - a * omega * a.transpose() - Matrix::Identity(2, 2)) <= 1e-10 * 2.0);
}

TEST_CASE("lyapunov rejects bad inputs") {
  CHECK(kind_of([] { (void)la::solve_dlyap(Matrix::Identity(2, 2), Matrix::Identity(2, 2)); }) ==
        ErrorKind::instability);
  CHECK(kind_of([] { (void)la::solve_dlyap(Matrix::Zero(2, 2), m2(1, 2, 2, 1)); }) ==
        ErrorKind::covariance);
  CHECK(kind_of([] { (void)la::solve_dlyap(Matrix::Zero(2, 2), Matrix::Identity(3, 3)); }) ==
        ErrorKind::dimension);
}

TEST_CASE("lyapunov matches truncated series on random stable systems") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 120; ++i) {
    const Eigen::Index n = 1 + i % 6;
    const Matrix a = oracle::random_stable(rng, n, 0.9);
    const Matrix q = oracle::random_spd(rng, n);
    const Matrix omega = la::solve_dlyap(a, q);
    const Matrix ref = oracle::truncated_lyapunov(a, q);
    CHECK(la::max_abs(omega - ref) <= 1e-8);
    CHECK(la::max_abs(omega - a * omega * a.transpose() - q) <= 1e-10 * (1.0 + la::max_abs(q)));
    CHECK(la::is_symmetric(omega));
  }
}

TEST_CASE("dare with zero dynamics collapses to one step") {
  const Matrix xi = m2(2, 0.3, 0.3, 1);
  const Matrix psi = Matrix::Constant(1, 1, 2.0);
  Matrix ups(2, 1);
  ups << 0.5, -0.2;
  const auto sol = la::solve_dare(Matrix::Zero(2, 2), Matrix::Zero(1, 2), xi, psi, ups);
  CHECK(la::max_abs(sol.p - (xi - ups * ups.transpose() / 2.0)) <= 1e-12);
  CHECK(la::max_abs(sol.phi - psi) <= 1e-12);
  CHECK(la::max_abs(sol.k - ups / 2.0) <= 1e-12);
}

TEST_CASE("scalar dare matches the quadratic root") {
  const double expected = oracle::scalar_dare(0.9, 1, 1, 1, 0);
  for (auto method : {la::DareMethod::doubling, la::DareMethod::fixed_point}) {
    la::DareOptions opt;
    opt.method = method;
    const auto sol = la::solve_dare(Matrix::Constant(1, 1, 0.9), Matrix::Ones(1, 1),
                                    Matrix::Ones(1, 1), Matrix::Ones(1, 1), Matrix::Zero(1, 1), opt);
    CHECK(sol.p(0, 0) == doctest::Approx(expected).epsilon(1e-10));
    CHECK(sol.report.residual_ok());
    CHECK(sol.report.closed_loop_radius < 1.0);
  }
}

TEST_CASE("scalar dare on random coefficients") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> coef(-0.95, 0.95);
  std::uniform_real_distribution<double> pos(0.1, 3.0);
  for (int i = 0; i < 200; ++i) {
    const double a = coef(rng);
    const double c = coef(rng) * 2.0;
    const double xi = pos(rng);
    const double psi = pos(rng);
    // Keep the joint noise covariance PD.
    const double ups = coef(rng) * std::sqrt(xi * psi) * 0.9;
    const auto sol = la::solve_dare(Matrix::Constant(1, 1, a), Matrix::Constant(1, 1, c),
                                    Matrix::Constant(1, 1, xi), Matrix::Constant(1, 1, psi),
                                    Matrix::Constant(1, 1, ups));
    CHECK(sol.p(0, 0) == doctest::Approx(oracle::scalar_dare(a, c, xi, psi, ups)).epsilon(1e-9));
    CHECK(sol.report.residual_ok());
  }
}

TEST_CASE("dare methods agree and satisfy postconditions on random systems") {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> normal;
  for (int i = 0; i < 100; ++i) {
    const Eigen::Index l = 1 + i % 5;
    const Eigen::Index m = 1 + i % 3;
    const Matrix a = oracle::random_stable(rng, l, 0.9);
    Matrix c(m, l);
    for (Eigen::Index r = 0; r < m; ++r) {
      for (Eigen::Index s = 0; s < l; ++s) c(r, s) = normal(rng);
    }
    const Matrix joint = oracle::random_spd(rng, l + m);
    const Matrix xi = joint.topLeftCorner(l, l);
    const Matrix psi = joint.bottomRightCorner(m, m);
    const Matrix ups = joint.topRightCorner(l, m);

    const auto sda = la::solve_dare(a, c, xi, psi, ups);
    la::DareOptions fp;
    fp.method = la::DareMethod::fixed_point;
    const auto ref = la::solve_dare(a, c, xi, psi, ups, fp);

    CHECK(la::max_abs(sda.p - ref.p) <= 1e-8 * (1.0 + la::max_abs(ref.p)));
    CHECK(sda.report.residual_ok());
    CHECK(la::dare_residual(sda.p, a, c, xi, psi, ups) <= 1e-9 * (1.0 + la::max_abs(sda.p)));
    CHECK(la::is_pd(sda.phi));
    CHECK(la::spectral_radius(a - sda.k * c) < 1.0);
    CHECK(la::max_abs(sda.phi - (c * sda.p * c.transpose() + psi)) <= 1e-10 * (1.0 + la::max_abs(sda.phi)));
  }
}

TEST_CASE("dare error categories") {
  const Matrix one = Matrix::Ones(1, 1);
  CHECK(kind_of([&] {
          (void)la::solve_dare(one * 0.5, one, one, Matrix::Zero(1, 1), Matrix::Zero(1, 1));
        }) == ErrorKind::singularity);

  la::DareOptions capped;
  capped.method = la::DareMethod::fixed_point;
  capped.max_iterations = 3;
  CHECK(kind_of([&] {
          (void)la::solve_dare(one * 0.99, one, one, one, Matrix::Zero(1, 1), capped);
        }) == ErrorKind::convergence);
}

TEST_CASE("marginal closed loop is accepted only when allowed") {
  // y_n = e_n + e_{n-1} as an SS model: state x_n = e_{n-1}; its innovations
  // filter sits exactly on the unit circle.
  const Matrix one = Matrix::Ones(1, 1);
  la::DareOptions strict;
  la::DareOptions marginal;
  marginal.stability = la::StabilityPolicy::allow_marginal;
  const auto sol = la::solve_dare(Matrix::Zero(1, 1), one, one, one, one, marginal);
  CHECK(sol.report.marginal);
  CHECK(std::abs(sol.report.closed_loop_radius - 1.0) <= la::kUnitCircleTolerance);
  CHECK(sol.phi(0, 0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(kind_of([&] { (void)la::solve_dare(Matrix::Zero(1, 1), one, one, one, one, strict); }) ==
        ErrorKind::non_stabilizing);
}
