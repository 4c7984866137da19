#include "doctest.h"

#include "fixtures.hpp"
#include "lcw/curvature.hpp"
#include "lcw/expr.hpp"
#include "lcw/jet.hpp"

#include <cmath>

using namespace lcw;
using namespace lcw::testing;

namespace {

double tensor_diff(const std::vector<double> &a, const std::vector<double> &b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs(const std::vector<double> &a) {
  double m = 0;
  for (double v : a)
    m = std::max(m, std::abs(v));
  return m;
}

} // namespace

TEST_CASE("Euclidean space has no curvature") {
  for (int n = 3; n <= 6; ++n) {
    const std::vector<double> x(static_cast<std::size_t>(n), 0.3);
    const CurvaturePackage p = compute_curvature(euclidean(n), x);
    CHECK(p.christoffel.max_abs() == 0.0);
    CHECK(p.dchristoffel.max_abs() == 0.0);
    CHECK(p.riemann.max_abs() == 0.0);
    CHECK(p.ricci.norm() == 0.0);
    CHECK(p.scalar == 0.0);
    CHECK(p.weyl.max_abs() == 0.0);
    CHECK(p.cotton.max_abs() == 0.0);
    if (n == 3)
      CHECK(p.cotton_york->norm() == 0.0);
  }
}

TEST_CASE("polar-like Christoffel symbols") {
  const MetricSpec s = make_metric({"r", "t", "z"}, {"1", "0", "0", "r^2", "0", "1"},
                                   DomainBox{{0.5, -1, -1}, {3, 1, 1}});
  const ChristoffelJets ch = christoffel(metric_jets(s, std::vector<double>{2.0, 0.0, 0.0}));
  CHECK(ch.gamma(0, 1, 1) == doctest::Approx(-2.0));
  CHECK(ch.gamma(1, 0, 1) == doctest::Approx(0.5));
  CHECK(ch.gamma(1, 1, 0) == doctest::Approx(0.5));
  CHECK(ch.gamma(2, 1, 1) == 0.0);
  // flat in disguise
  const CurvaturePackage p = compute_curvature(s, std::vector<double>{2.0, 0.3, 0.0});
  CHECK(p.riemann.max_abs() < 1e-14);
}

TEST_CASE("conformal Christoffel symbols") {
  const std::vector<std::string> x = names(4);
  const std::string f = "0.2*x1 - 0.1*x2*x3 + 0.05*x1^3 + 0.07*x4*x1^2";
  const MetricSpec s = conformal_rescale(euclidean(4), f);
  const Expr fe = parse_expr(f, x);
  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    const auto pt = random_point(4, rng);
    std::vector<Jet3> env;
    for (int k = 0; k < 4; ++k)
      env.push_back(jet_variable(k, pt[k], 4));
    const Jet3 fj = eval_expr<Jet3>(fe, std::span<const Jet3>(env));
    const ChristoffelJets ch = christoffel(metric_jets(s, pt));
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          const double expect = (i == k ? fj.grad(j) : 0.0) + (j == k ? fj.grad(i) : 0.0) -
                                (i == j ? fj.grad(k) : 0.0);
          CHECK(std::abs(ch.gamma(k, i, j) - expect) < 1e-10);
        }
  }
}

TEST_CASE("round sphere") {
  for (int n = 3; n <= 5; ++n) {
    const CurvaturePackage p = compute_curvature(sphere_chart(n), std::vector<double>(n, 0.15));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j)
          CHECK(p.riemann(i, j, i, j) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(p.scalar == doctest::Approx(n * (n - 1.0)).epsilon(1e-9));
    CHECK((p.ricci - (n - 1.0) * Eigen::MatrixXd::Identity(n, n)).norm() < 1e-9);
    CHECK((p.schouten - 0.5 * Eigen::MatrixXd::Identity(n, n)).norm() < 1e-9);
    CHECK(p.weyl.norm() < 1e-9);
    CHECK(p.cotton.norm() < 1e-9);
  }
}

TEST_CASE("product metric has no mixed curvature") {
  Rng rng(17);
  for (int t = 0; t < 3; ++t) {
    const MetricSpec s = random_product_metric(4, rng);
    const CurvaturePackage p = compute_curvature(s, random_point(4, rng));
    const double scale = std::max(1.0, p.riemann.max_abs());
    for (int i = 1; i < 4; ++i)
      for (int j = 1; j < 4; ++j)
        for (int k = 1; k < 4; ++k)
          CHECK(std::abs(p.riemann(0, i, j, k)) < 1e-10 * scale);
  }
}

TEST_CASE("Kulkarni-Nomizu product") {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(4, 4);
  const Tensor4 gg = kulkarni_nomizu(id, id);
  CHECK(gg(0, 1, 0, 1) == 2.0);
  CHECK(gg(0, 1, 1, 0) == -2.0);
  CHECK(gg(0, 1, 2, 3) == 0.0);
  Rng rng(2);
  std::normal_distribution<double> g(0, 1);
  Eigen::MatrixXd a(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      a(i, j) = g(rng);
  a = (a + a.transpose()).eval();
  const Tensor4 t = kulkarni_nomizu(a, id);
  double bianchi = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          bianchi = std::max(bianchi, std::abs(t(i, j, k, l) + t(j, k, i, l) + t(k, i, j, l)));
  CHECK(bianchi < 1e-12 * t.max_abs());
}

TEST_CASE("Schouten of constant curvature and Ricci-flat input") {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(4, 4);
  CHECK((schouten(3.0 * id, 12.0, id) - 0.5 * id).norm() < 1e-15);
  CHECK(schouten(Eigen::MatrixXd::Zero(4, 4), 0.0, id).norm() == 0.0);
}

TEST_CASE("pipeline against finite differences") {
  Rng rng(23);
  for (int n = 3; n <= 4; ++n)
    for (int t = 0; t < 2; ++t) {
      const MetricSpec s = random_polynomial_metric(n, rng);
      const auto x = random_point(n, rng, 0.4);
      const MetricJets mj = metric_jets(s, x);
      const ChristoffelJets ch = christoffel(mj);
      const Tensor4 R = riemann(ch, mj);
      const CurvaturePackage p = compute_curvature(mj);
      const FdCurvature fd = fd_curvature(s, x);
      CHECK(tensor_diff(ch.gamma.values(), fd.gamma.values()) < 1e-8 * std::max(1.0, fd.gamma.max_abs()));
      CHECK(tensor_diff(R.values(), fd.riemann.values()) < 1e-6 * std::max(1.0, fd.riemann.max_abs()));
      CHECK((p.metric - s.evaluate(x)).norm() == 0.0);
      const double cn = std::max(1e-3, max_abs(fd.cotton.values()));
      CHECK_MESSAGE(tensor_diff(p.cotton_coordinates.values(), fd.cotton.values()) < 1e-5 * cn,
                    "n=" << n << " diff " << tensor_diff(p.cotton_coordinates.values(), fd.cotton.values()));
    }
}

TEST_CASE("Riemann gradient against differences of the curvature") {
  Rng rng(41);
  const MetricSpec s = random_polynomial_metric(4, rng);
  const auto x = random_point(4, rng, 0.4);
  const MetricJets mj = metric_jets(s, x);
  const Tensor5 dR = riemann_gradient(christoffel(mj), mj);
  for (int m = 0; m < 4; ++m) {
    const Eigen::VectorXd d = fd_derivative(
        [&](const std::vector<double> &y) {
          const MetricJets j = metric_jets(s, y);
          const Tensor4 r = riemann(christoffel(j), j);
          return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(r.size())));
        },
        x, m, 1e-3);
    double err = 0, scale = 1.0;
    for (std::size_t k = 0; k < 256; ++k) {
      err = std::max(err, std::abs(dR.values()[m * 256 + k] - d(static_cast<Eigen::Index>(k))));
      scale = std::max(scale, std::abs(d(static_cast<Eigen::Index>(k))));
    }
    CHECK(err < 1e-8 * scale);
  }
}

TEST_CASE("identities on random metrics") {
  Rng rng(7);
  for (int n = 3; n <= 6; ++n)
    for (int t = 0; t < 4; ++t) {
      const MetricSpec s = random_polynomial_metric(n, rng, 0.08);
      const CurvaturePackage p = compute_curvature(s, random_point(n, rng));
      const IdentityCheck c = check_identities(p);
      CHECK_MESSAGE(c.worst() < 1e-10, "n=" << n << " worst=" << c.worst());
      CHECK((p.ricci - p.ricci.transpose()).norm() < 1e-12 * std::max(1.0, p.ricci.norm()));
      CHECK((p.schouten - p.schouten.transpose()).norm() < 1e-12 * std::max(1.0, p.schouten.norm()));
    }
}

TEST_CASE("conformally flat metrics have vanishing Weyl tensor") {
  Rng rng(13);
  for (int n = 4; n <= 5; ++n)
    for (int t = 0; t < 3; ++t) {
      const MetricSpec s = conformally_flat(n, rng);
      const CurvaturePackage p = compute_curvature(s, random_point(n, rng));
      CHECK(p.weyl.norm() < 1e-8 * p.riemann.norm());
      CHECK(p.riemann.norm() > 1e-3);
    }
}

TEST_CASE("Weyl scales with the metric") {
  Rng rng(19);
  const MetricSpec base = random_polynomial_metric(4, rng, 0.08);
  const double c = 0.35;
  const MetricSpec scaled = conformal_rescale(base, format_number(c));
  const auto x = random_point(4, rng);
  const MetricJets a = metric_jets(base, x), b = metric_jets(scaled, x);
  auto weyl_coord = [](const MetricJets &mj) {
    const ChristoffelJets ch = christoffel(mj);
    const Tensor4 R = riemann(ch, mj);
    const RicciScalar rs = ricci_scalar(R, mj.g);
    return weyl_tensor(R, schouten(rs.ricci, rs.scalar, mj.g), mj.g);
  };
  const Tensor4 wa = weyl_coord(a), wb = weyl_coord(b);
  CHECK(tensor_diff((std::exp(2 * c) * wa).values(), wb.values()) < 1e-10 * wb.max_abs());
}

TEST_CASE("Cotton tensor is conformally invariant in dimension 3") {
  Rng rng(29);
  for (int t = 0; t < 3; ++t) {
    const MetricSpec base = random_polynomial_metric(3, rng, 0.1);
    const MetricSpec scaled = conformal_rescale(base, "0.3*x1");
    const auto x = random_point(3, rng);
    const CurvaturePackage a = compute_curvature(base, x), b = compute_curvature(scaled, x);
    CHECK(tensor_diff(a.cotton_coordinates.values(), b.cotton_coordinates.values()) <
          1e-8 * a.cotton_coordinates.max_abs());
  }
  const CurvaturePackage sph = compute_curvature(sphere_chart(3), std::vector<double>{0.1, 0.2, 0.3});
  CHECK(sph.cotton_coordinates.max_abs() < 1e-9);
}

TEST_CASE("Cotton-York tensor") {
  Rng rng(31);
  const MetricSpec s = random_polynomial_metric(3, rng);
  const auto x = random_point(3, rng);
  const CurvaturePackage p = compute_curvature(s, x, 1), q = compute_curvature(s, x, -1);
  const Eigen::Matrix3d cy = *p.cotton_york;
  CHECK(std::abs(cy.trace()) < 1e-10 * cy.norm());
  CHECK((cy - cy.transpose()).norm() < 1e-10 * cy.norm());
  CHECK((cy + *q.cotton_york).norm() < 1e-14 * cy.norm());
  // coordinate CY traced against g^-1 as well
  const MetricJets mj = metric_jets(s, x);
  const Eigen::MatrixXd C = cotton_york(p.cotton_coordinates, mj.g);
  CHECK(std::abs((mj.g.inverse() * C).trace()) < 1e-10 * C.norm());
}

TEST_CASE("product metrics in dimension 3 have singular Cotton-York tensor") {
  Rng rng(37);
  for (int t = 0; t < 3; ++t) {
    const MetricSpec s = random_product_metric(3, rng);
    const CurvaturePackage p = compute_curvature(s, random_point(3, rng));
    const Eigen::Matrix3d cy = *p.cotton_york;
    CHECK(std::abs(cy.determinant()) < 1e-9 * std::pow(cy.norm(), 3));
  }
}

TEST_CASE("rotating the frame") {
  Rng rng(43);
  const MetricSpec s = random_polynomial_metric(4, rng);
  const CurvaturePackage p = compute_curvature(s, random_point(4, rng));
  const Eigen::MatrixXd Q = random_orthogonal(4, rng);
  const CurvaturePackage r = rotate_frame(p, Q);
  CHECK(tensor_diff(r.riemann.values(), change_frame(p.riemann, Q).values()) < 1e-12 * p.riemann.max_abs());
  CHECK(std::abs(r.scalar - p.scalar) < 1e-12 * std::abs(p.scalar) + 1e-14);
  CHECK(check_identities(r).worst() < 1e-10);
  CHECK((r.frame - p.frame * Q).norm() < 1e-14);
}

TEST_CASE("orthonormal frame") {
  Rng rng(47);
  const MetricSpec s = random_polynomial_metric(5, rng);
  const Eigen::MatrixXd g = s.evaluate(random_point(5, rng));
  const Eigen::MatrixXd F = orthonormal_frame(g);
  CHECK((F.transpose() * g * F - Eigen::MatrixXd::Identity(5, 5)).norm() < 1e-13);
}
