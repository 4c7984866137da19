#include "doctest.h"

#include "fixtures.hpp"
#include "lcw/curvature.hpp"
#include "lcw/eigenflag.hpp"
#include "lcw/genericity.hpp"

#include <cmath>

using namespace lcw;
using namespace lcw::testing;

namespace {

Eigen::VectorXd random_unit(int n, Rng &rng) {
  std::normal_distribution<double> g(0, 1);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i)
    v(i) = g(rng);
  return v.normalized();
}

// The defining sum over an explicit orthonormal basis of v-perp.
double residual_by_basis(const WeylOperator &w, const Eigen::VectorXd &v, const Eigen::MatrixXd &Q) {
  const int n = w.n();
  // Q orthogonal with first column v
  double e = 0;
  for (int a = 1; a < n; ++a)
    for (int b = 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) {
        const Eigen::VectorXd x = wedge(v, Q.col(a)), y = wedge(Q.col(b), Q.col(c));
        const double val = x.dot(w.matrix() * y);
        e += val * val;
      }
  return e;
}

Eigen::MatrixXd basis_with_first(const Eigen::VectorXd &v, Rng &rng) {
  const int n = static_cast<int>(v.size());
  Eigen::MatrixXd m = random_orthogonal(n, rng);
  m.col(0) = v;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ();
  if (q.col(0).dot(v) < 0)
    q.col(0) = -q.col(0);
  return q;
}

} // namespace

TEST_CASE("codimension of the eigenflag set") {
  CHECK(codim_eigenflag(4) == 2);
  CHECK(codim_eigenflag(5) == 12);
  CHECK(codim_eigenflag(6) == 30);
  CHECK(codim_eigenflag(7) == (343 - 147 - 28 + 6) / 3);
}

TEST_CASE("residual of the zero operator") {
  Rng rng(1);
  const WeylOperator z = WeylOperator::trusted(CurvatureOperator::zero(5));
  const Eigen::VectorXd v = random_unit(5, rng);
  CHECK(residual(z, v) == 0.0);
  CHECK(residual_gradient(z, v).norm() == 0.0);
  const EigenflagReport r = min_residual(z);
  CHECK(r.verdict == EigenflagVerdict::weyl_negligible);
}

TEST_CASE("residual matches the basis sum and is basis independent") {
  Rng rng(2);
  for (int n = 4; n <= 6; ++n) {
    const WeylOperator w = sample_weyl(n, rng);
    const Eigen::VectorXd v = random_unit(n, rng);
    const double e1 = residual_by_basis(w, v, basis_with_first(v, rng));
    const double e2 = residual_by_basis(w, v, basis_with_first(v, rng));
    CHECK(std::abs(e1 - e2) < 1e-12);
    CHECK(std::abs(residual(w, v) - e1) < 1e-12);
    CHECK(residual(w, -v) == doctest::Approx(residual(w, v)).epsilon(1e-14));
  }
}

TEST_CASE("residual requires a unit vector") {
  Rng rng(3);
  const WeylOperator w = sample_weyl(4, rng);
  CHECK_THROWS_AS(residual(w, Eigen::VectorXd::Ones(4)), std::invalid_argument);
  CHECK_THROWS_AS(residual(w, Eigen::VectorXd::Ones(5).normalized()), std::invalid_argument);
}

TEST_CASE("gradient against finite differences") {
  Rng rng(4);
  for (int n = 4; n <= 5; ++n)
    for (int t = 0; t < 5; ++t) {
      const WeylOperator w = sample_weyl(n, rng);
      const Eigen::VectorXd v = random_unit(n, rng);
      const Eigen::VectorXd g = residual_gradient(w, v);
      CHECK(std::abs(g.dot(v)) < 1e-14);
      for (int d = 0; d < 5; ++d) {
        Eigen::VectorXd u = random_unit(n, rng);
        u -= u.dot(v) * v;
        u.normalize();
        const double h = 1e-5;
        auto E = [&](double s) { return residual(w, std::cos(s) * v + std::sin(s) * u); };
        const double fd = (E(h) - E(-h)) / (2 * h);
        CHECK(std::abs(fd - g.dot(u)) < 1e-6 * std::max(g.norm(), 1e-3));
      }
    }
}

TEST_CASE("stratum operators") {
  const WeylOperator w = construct_stratum4(1, 1, -2);
  CHECK(bianchi_map(w.op()).norm() < 1e-12);
  CHECK(ricci_contraction(w.op()).norm() < 1e-12);
  CHECK(residual(w, Eigen::Vector4d(1, 0, 0, 0)) < 1e-12);
  CHECK(residual_gradient(w, Eigen::Vector4d(1, 0, 0, 0)).norm() < 1e-8);
  CHECK(construct_stratum4(0, 0, 0).norm() == 0.0);
  CHECK(classify_weyl4_spectrum(construct_stratum4(0, 0, 0)) == Weyl4Pattern::zero);
  CHECK(classify_weyl4_spectrum(w) == Weyl4Pattern::double_quadruple);
  CHECK(classify_weyl4_spectrum(construct_stratum4(1, 2, -3)) == Weyl4Pattern::three_pairs);
  CHECK_THROWS_AS(construct_stratum4(1, 1, 1), std::invalid_argument);
  Rng rng(5);
  CHECK(classify_weyl4_spectrum(sample_weyl(4, rng)) == Weyl4Pattern::other);

  const Eigen::MatrixXd Q = random_rotation(4, rng);
  const WeylOperator wq = construct_stratum4(1, 2, -3, Q);
  CHECK(residual(wq, Q.col(0)) < 1e-12);
  const EigenflagReport r = min_residual(conjugate(construct_stratum4(0.5, 1.5, -2), Q));
  CHECK(r.residual_min < 1e-10);
  CHECK(r.verdict == EigenflagVerdict::eigenflag_within_tol);
}

TEST_CASE("start directions") {
  const auto s = start_directions(5, 40, 9);
  CHECK(s.size() >= 40);
  CHECK(s.size() <= 45);
  for (const auto &v : s)
    CHECK(std::abs(v.norm() - 1.0) < 1e-14);
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      CHECK(std::abs(std::abs(s[i].dot(s[j])) - 1.0) > 1e-12);
  const auto again = start_directions(5, 40, 9);
  REQUIRE(again.size() == s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    CHECK(again[i] == s[i]);
}

TEST_CASE("product metric Weyl tensors are eigenflag at the parallel direction") {
  Rng rng(6);
  for (int t = 0; t < 2; ++t) {
    const MetricSpec s = random_product_metric(4, rng);
    const CurvaturePackage p = compute_curvature(s, random_point(4, rng));
    const WeylOperator w(to_operator(p.weyl), 1e-9);
    const EigenflagReport r = min_residual(w);
    CHECK(r.residual_min < 1e-10);
    CHECK(std::min((r.minimizer - Eigen::Vector4d::UnitX()).norm(),
                   (r.minimizer + Eigen::Vector4d::UnitX()).norm()) < 1e-4);
    CHECK(r.any_converged);
  }
}

TEST_CASE("report consistency") {
  Rng rng(7);
  const WeylOperator w(sample_weyl(5, rng).op() * 3.0);
  const EigenflagReport r = min_residual(w);
  CHECK(r.residual_min >= 0.0);
  CHECK(std::abs(r.minimizer.norm() - 1.0) < 1e-12);
  CHECK(std::abs(residual(w, r.minimizer) / (w.norm() * w.norm()) - r.residual_min) < 1e-12);
  CHECK(std::abs(residual(w, r.minimizer) - r.raw_residual) < 1e-12 * r.raw_residual + 1e-15);
  CHECK(r.verdict == EigenflagVerdict::not_eigenflag);
  CHECK(r.weyl_norm == doctest::Approx(w.norm()));
  for (const auto &s : r.starts)
    CHECK(s.residual >= r.residual_min);
}

TEST_CASE("min_residual is deterministic and thread-count independent") {
  Rng rng(8);
  const WeylOperator w = sample_weyl(5, rng);
  EigenflagOptions a;
  a.threads = 1;
  EigenflagOptions b;
  b.threads = 3;
  const EigenflagReport ra = min_residual(w, a), rb = min_residual(w, b);
  CHECK(ra.residual_min == rb.residual_min);
  CHECK(ra.minimizer == rb.minimizer);
}

TEST_CASE("positivity certificate in dimension 4") {
  Rng rng(9);
  const WeylOperator w = sample_weyl(4, rng);
  const PositivityCertificate c = certify_positive_minimum(w, 24);
  CHECK(c.grid_min >= min_residual(w).residual_min - 1e-12);
  CHECK(c.lower_bound == doctest::Approx(c.grid_min - c.lipschitz * c.delta));
  CHECK(c.evaluations == 4u * 25u * 25u * 25u);
  const PositivityCertificate s = certify_positive_minimum(construct_stratum4(1, 1, -2), 24);
  CHECK_FALSE(s.certified);
  CHECK(s.lower_bound <= 0.0);
  CHECK_THROWS_AS(certify_positive_minimum(WeylOperator::trusted(CurvatureOperator::zero(4)), 8),
                  std::invalid_argument);
  CHECK_THROWS_AS(certify_positive_minimum(sample_weyl(5, rng), 8), std::invalid_argument);
}

TEST_CASE("verdict strings") {
  CHECK(to_string(EigenflagVerdict::eigenflag_within_tol) == "eigenflag_within_tol");
  CHECK(to_string(EigenflagVerdict::not_eigenflag) == "not_eigenflag");
  CHECK(to_string(EigenflagVerdict::inconclusive) == "inconclusive");
  CHECK(to_string(EigenflagVerdict::weyl_negligible) == "weyl_negligible");
}
