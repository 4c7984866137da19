#include "doctest.h"

#include "fixtures.hpp"
#include "lcw/expr.hpp"
#include "lcw/jet.hpp"

#include <cmath>

using namespace lcw;

namespace {

// Five-point differences of a scalar function of n variables.
struct Fd {
  std::function<double(const std::vector<double> &)> f;
  double h = 1e-3;

  double d1(std::vector<double> x, int i) const {
    auto at = [&](double s) {
      auto y = x;
      y[i] += s;
      return f(y);
    };
    return (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
  }
  double d2(std::vector<double> x, int i, int j) const {
    Fd inner{[&](const std::vector<double> &y) { return d1(y, j); }, h};
    return inner.d1(x, i);
  }
  double d3(std::vector<double> x, int i, int j, int k) const {
    Fd inner{[&](const std::vector<double> &y) { return d2(y, j, k); }, h};
    return inner.d1(x, i);
  }
};

void check_against_fd(const std::string &src, const std::vector<std::string> &coords,
                      const std::vector<double> &x, double tol) {
  const Expr e = parse_expr(src, coords);
  const int n = static_cast<int>(coords.size());
  std::vector<Jet3> env;
  for (int k = 0; k < n; ++k)
    env.push_back(jet_variable(k, x[k], n));
  const Jet3 j = eval_expr<Jet3>(e, std::span<const Jet3>(env));
  Fd fd{[&](const std::vector<double> &y) { return eval_expr<double>(e, std::span<const double>(y)); },
        2e-3};
  CHECK(j.value() == doctest::Approx(eval_expr<double>(e, std::span<const double>(x))));
  auto close = [&](double exact, double approx) {
    CHECK_MESSAGE(std::abs(exact - approx) <= tol * std::max(1.0, std::abs(exact)),
                  src << " exact " << exact << " fd " << approx);
  };
  for (int i = 0; i < n; ++i) {
    close(j.grad(i), fd.d1(x, i));
    for (int k = i; k < n; ++k) {
      close(j.hess(i, k), fd.d2(x, i, k));
      for (int l = k; l < n; ++l)
        close(j.third(i, k, l), fd.d3(x, i, k, l));
    }
  }
}

} // namespace

TEST_CASE("jet_variable") {
  const Jet3 a = jet_variable(0, 0.5, 2);
  CHECK(a.value() == 0.5);
  CHECK(a.grad(0) == 1.0);
  CHECK(a.grad(1) == 0.0);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(a.hess(i, j) == 0.0);
  const Jet3 b = jet_variable(1, -2.0, 3);
  CHECK(b.value() == -2.0);
  CHECK(b.grad(0) == 0.0);
  CHECK(b.grad(1) == 1.0);
  CHECK(b.grad(2) == 0.0);
  CHECK(b.third(1, 1, 1) == 0.0);
}

TEST_CASE("sum of variables is linear") {
  const int n = 5;
  Jet3 s = Jet3::constant(n, 0.0);
  for (int k = 0; k < n; ++k)
    s += jet_variable(k, 0.1 * k, n);
  for (int i = 0; i < n; ++i) {
    CHECK(s.grad(i) == 1.0);
    for (int j = 0; j < n; ++j) {
      CHECK(s.hess(i, j) == 0.0);
      for (int k = 0; k < n; ++k)
        CHECK(s.third(i, j, k) == 0.0);
    }
  }
}

TEST_CASE("products") {
  const Jet3 x = jet_variable(0, 3.0, 1);
  const Jet3 xx = x * x;
  CHECK(xx.value() == 9.0);
  CHECK(xx.grad(0) == 6.0);
  CHECK(xx.hess(0, 0) == 2.0);
  CHECK(xx.third(0, 0, 0) == 0.0);

  const Jet3 a = jet_variable(0, 1.0, 2), b = jet_variable(1, 2.0, 2);
  const Jet3 ab = a * b;
  CHECK(ab.value() == 2.0);
  CHECK(ab.grad(0) == 2.0);
  CHECK(ab.grad(1) == 1.0);
  CHECK(ab.hess(0, 1) == 1.0);
  CHECK(ab.hess(1, 0) == 1.0);
  CHECK(ab.hess(0, 0) == 0.0);
  CHECK(ab.third(0, 0, 1) == 0.0);

  const Jet3 u = jet_variable(0, 1.0, 2), v = jet_variable(1, 1.0, 2);
  const Jet3 c = (u + v) * (u + v) * (u + v);
  CHECK(c.value() == 8.0);
  CHECK(c.grad(0) == 12.0);
  CHECK(c.grad(1) == 12.0);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      CHECK(c.hess(i, j) == 12.0);
      for (int k = 0; k < 2; ++k)
        CHECK(c.third(i, j, k) == 6.0);
    }
  check_against_fd("(x+y)^3", {"x", "y"}, {1.0, 1.0}, 1e-6);
}

TEST_CASE("compose with elementary functions") {
  const Jet3 x = jet_variable(0, 0.0, 1);
  const Jet3 e = exp(x);
  CHECK(e.value() == 1.0);
  CHECK(e.grad(0) == 1.0);
  CHECK(e.hess(0, 0) == 1.0);
  CHECK(e.third(0, 0, 0) == 1.0);
  const Jet3 s = sin(x);
  CHECK(s.value() == 0.0);
  CHECK(s.grad(0) == 1.0);
  CHECK(s.hess(0, 0) == 0.0);
  CHECK(s.third(0, 0, 0) == -1.0);
  check_against_fd("log(1+x^2)", {"x"}, {0.3}, 1e-6);
}

TEST_CASE("mixed expressions against finite differences") {
  check_against_fd("exp(x1)*sin(x2)", {"x1", "x2"}, {0.0, 0.0}, 1e-6);
  check_against_fd("tan(x)*atan(y) + sqrt(2+x*y*z)", {"x", "y", "z"}, {0.2, -0.4, 0.3}, 1e-6);
  check_against_fd("(1+x^2+y^2)^-2 / (3 + cos(z))", {"x", "y", "z"}, {0.1, 0.2, 0.5}, 1e-6);
  check_against_fd("x^-3 - 1/(y-4)", {"x", "y"}, {1.3, 0.5}, 1e-6);
  check_against_fd("bump((x^2+y^2)/0.81)", {"x", "y"}, {0.3, -0.2}, 1e-5);
}

TEST_CASE("symmetric storage") {
  const int n = 4;
  Jet3 a = Jet3::constant(n, 1.0);
  a.set_hess(2, 1, 7.0);
  CHECK(a.hess(1, 2) == 7.0);
  a.set_third(3, 0, 2, 5.0);
  CHECK(a.third(0, 2, 3) == 5.0);
  CHECK(a.third(2, 3, 0) == 5.0);
  CHECK(a.third(3, 2, 0) == 5.0);
  // packed positions are a bijection onto sorted multi-indices
  std::vector<int> seen2(static_cast<std::size_t>(jet_layout::hess_slots(n)), 0);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      ++seen2[static_cast<std::size_t>(jet_layout::pair_index(n, i, j))];
  for (int c : seen2)
    CHECK(c == 1);
  std::vector<int> seen3(static_cast<std::size_t>(jet_layout::third_slots(n)), 0);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k)
        ++seen3[static_cast<std::size_t>(jet_layout::triple_index(n, i, j, k))];
  for (int c : seen3)
    CHECK(c == 1);
  CHECK(a.slot_count() == 1 + n + jet_layout::hess_slots(n) + jet_layout::third_slots(n));
}

TEST_CASE("arithmetic is associative and commutative to roundoff") {
  lcw::testing::Rng rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  const int n = 3;
  auto rand_jet = [&] {
    Jet3 j = Jet3::constant(n, u(rng));
    for (int i = 0; i < n; ++i) {
      j.set_grad(i, u(rng));
      for (int k = i; k < n; ++k) {
        j.set_hess(i, k, u(rng));
        for (int l = k; l < n; ++l)
          j.set_third(i, k, l, u(rng));
      }
    }
    return j;
  };
  for (int t = 0; t < 20; ++t) {
    const Jet3 a = rand_jet(), b = rand_jet(), c = rand_jet();
    const Jet3 l = (a * b) * c, r = a * (b * c), s = b * a * c;
    for (int k = 0; k < l.slot_count(); ++k) {
      CHECK(std::abs(l.slots()[k] - r.slots()[k]) < 1e-12 * 16);
      CHECK(std::abs(l.slots()[k] - s.slots()[k]) < 1e-12 * 16);
    }
    const Jet3 q = (a + 3.0) / (b * b + 2.0);
    const Jet3 back = q * (b * b + 2.0);
    for (int k = 0; k < q.slot_count(); ++k)
      CHECK(std::abs(back.slots()[k] - (a + 3.0).slots()[k]) < 1e-11);
  }
}

TEST_CASE("integer powers agree with repeated products") {
  const Jet3 x = jet_variable(0, 0.7, 2) + 0.5 * jet_variable(1, -0.3, 2);
  const Jet3 p = ipow(x, 3);
  const Jet3 m = x * x * x;
  for (int k = 0; k < p.slot_count(); ++k)
    CHECK(p.slots()[k] == doctest::Approx(m.slots()[k]).epsilon(1e-12));
  const Jet3 inv = ipow(x, -2);
  const Jet3 ref = reciprocal(x * x);
  for (int k = 0; k < inv.slot_count(); ++k)
    CHECK(inv.slots()[k] == doctest::Approx(ref.slots()[k]).epsilon(1e-12));
}
