#include "doctest.h"

#include "fixtures.hpp"
#include "lcw/cotton_york.hpp"
#include "lcw/curvature.hpp"

#include <cmath>

using namespace lcw;
using namespace lcw::testing;

namespace {

Eigen::Matrix3d random_rotation3(Rng &rng) {
  Eigen::Matrix3d q = random_orthogonal(3, rng);
  if (q.determinant() < 0)
    q.col(0) = -q.col(0);
  return q;
}

} // namespace

TEST_CASE("trigonometric eigenvalues") {
  Rng rng(1);
  std::normal_distribution<double> g(0, 1);
  for (int t = 0; t < 50; ++t) {
    Eigen::Matrix3d a;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        a(i, j) = g(rng);
    a = (a + a.transpose()).eval();
    const Eigen::Vector3d ref = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(a).eigenvalues();
    CHECK((symmetric_eigenvalues3(a) - ref).norm() < 1e-12 * std::max(1.0, a.norm()));
  }
  const Eigen::Vector3d d = symmetric_eigenvalues3(Eigen::Vector3d(3, -1, 2).asDiagonal());
  CHECK(d(0) == -1.0);
  CHECK(d(1) == 2.0);
  CHECK(d(2) == 3.0);
  CHECK(symmetric_eigenvalues3(Eigen::Matrix3d::Identity() * 2).isApprox(Eigen::Vector3d(2, 2, 2)));
}

TEST_CASE("tensor validation") {
  CHECK_THROWS_AS(CottonYorkTensor(Eigen::Matrix3d::Identity()), std::invalid_argument);
  Eigen::Matrix3d m = Eigen::Vector3d(1, -1, 0).asDiagonal();
  m(0, 1) = 0.5;
  CHECK_THROWS_AS(CottonYorkTensor{m}, std::invalid_argument);
}

TEST_CASE("classification") {
  const CottonYorkTensor a(Eigen::Vector3d(1, -1, 0).asDiagonal());
  CHECK(classify_cy(a) == CyStratum::regular_singular);
  CHECK(a.eigenvalues(2) == doctest::Approx(1.0));
  CHECK(obstruction_verdict_3d(a) == CyVerdict::inconclusive);
  const CottonYorkTensor b(Eigen::Vector3d(2, -1, -1).asDiagonal());
  CHECK(classify_cy(b) == CyStratum::nonsingular);
  CHECK(b.det == doctest::Approx(2.0));
  CHECK(obstruction_verdict_3d(b) == CyVerdict::no_lcw_certified);
  CHECK(classify_cy(CottonYorkTensor{}) == CyStratum::zero);
  CHECK(classify_cy(CottonYorkTensor(Eigen::Vector3d(1e-13, -1e-13, 0).asDiagonal())) == CyStratum::zero);
  CHECK(to_string(CyStratum::regular_singular) == "regular_singular");
  CHECK(to_string(CyVerdict::no_lcw_certified) == "no_lcw_certified");
}

TEST_CASE("stratum parametrization") {
  const CottonYorkTensor a = stratum_param(1.0, Eigen::Matrix3d::Identity());
  CHECK((a.matrix - Eigen::Matrix3d(Eigen::Vector3d(1, -1, 0).asDiagonal())).norm() == 0.0);
  Rng rng(2);
  const Eigen::Matrix3d Q = random_rotation3(rng);
  CHECK(stratum_param(0.0, Q).norm == 0.0);
  const CottonYorkTensor b = stratum_param(-0.7, Q);
  CHECK(std::abs(b.det) < 1e-15);
  CHECK(classify_cy(b) == CyStratum::regular_singular);
  Eigen::Matrix3d reflect = Q;
  reflect.col(0) = -reflect.col(0);
  CHECK_THROWS_AS(stratum_param(1.0, reflect), std::invalid_argument);
  CHECK_THROWS_AS(stratum_param(1.0, 2.0 * Q), std::invalid_argument);
}

TEST_CASE("traceless coordinates are an isometry") {
  Rng rng(3);
  std::normal_distribution<double> g(0, 1);
  Eigen::Matrix<double, 5, 1> x;
  for (int i = 0; i < 5; ++i)
    x(i) = g(rng);
  const Eigen::Matrix3d m = from_traceless_coordinates(x);
  CHECK(std::abs(m.trace()) < 1e-15);
  CHECK((m - m.transpose()).norm() == 0.0);
  CHECK(m.norm() == doctest::Approx(x.norm()));
  CHECK((traceless_coordinates(m) - x).norm() < 1e-14);
}

TEST_CASE("rotation exponential") {
  const Eigen::Vector3d w(0.3, -0.2, 0.5);
  const Eigen::Matrix3d R = rotation_exp(w);
  CHECK((R.transpose() * R - Eigen::Matrix3d::Identity()).norm() < 1e-14);
  CHECK(R.determinant() == doctest::Approx(1.0));
  CHECK((R * w - w).norm() < 1e-14);
  CHECK((rotation_exp(Eigen::Vector3d::Zero()) - Eigen::Matrix3d::Identity()).norm() == 0.0);
}

TEST_CASE("the singular stratum has codimension one") {
  Rng rng(4);
  std::uniform_real_distribution<double> u(0.2, 2.0);
  for (int t = 0; t < 10; ++t) {
    const auto J = stratum_jacobian(u(rng), random_rotation3(rng));
    CHECK(numerical_rank(J, 1e-6) == 4);
  }
}

TEST_CASE("product metrics classify as singular") {
  Rng rng(5);
  for (int t = 0; t < 4; ++t) {
    const MetricSpec s = random_product_metric(3, rng);
    const CurvaturePackage p = compute_curvature(s, random_point(3, rng));
    const CyStratum st = classify_cy(CottonYorkTensor(*p.cotton_york));
    CHECK((st == CyStratum::regular_singular || st == CyStratum::zero));
  }
}

TEST_CASE("generic polynomial metric against the finite-difference pipeline") {
  Rng rng(6);
  const MetricSpec s = random_polynomial_metric(3, rng);
  const auto x = random_point(3, rng, 0.4);
  const CurvaturePackage p = compute_curvature(s, x);
  const FdCurvature fd = fd_curvature(s, x);
  const Eigen::MatrixXd g = s.evaluate(x);
  const Eigen::MatrixXd F = orthonormal_frame(g);
  const Eigen::Matrix3d cy_fd = F.transpose() * cotton_york(fd.cotton, g) * F;
  const CottonYorkTensor exact(*p.cotton_york);
  CHECK((cy_fd - exact.matrix).norm() < 1e-5 * exact.norm);
  CHECK(obstruction_verdict_3d(exact) == CyVerdict::no_lcw_certified);
  const Eigen::Matrix3d sym = 0.5 * (cy_fd + cy_fd.transpose());
  CHECK(std::signbit(sym.determinant()) == std::signbit(exact.det));
}
