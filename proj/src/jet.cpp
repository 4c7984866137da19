#include "lcw/jet.hpp"

#include "lcw/simd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lcw {

namespace {

struct Layout {
  int n = 0;
  int count = 1;
  int grad = 1;
  int hess = 1;
  int third = 1;
  int n_pairs = 0;
  int n_triples = 0;
  // Packed index for every (unsorted) index tuple.
  std::array<std::array<int, Jet3::kMaxVars>, Jet3::kMaxVars> pair{};
  std::array<std::array<std::array<int, Jet3::kMaxVars>, Jet3::kMaxVars>, Jet3::kMaxVars>
      triple{};
  // Sorted multi-indices in storage order.
  std::array<std::array<int, 2>, 36> pairs{};
  std::array<std::array<int, 3>, 120> triples{};
};

Layout make_layout(int n) {
  Layout L;
  L.n = n;
  L.grad = 1;
  L.hess = 1 + n;
  L.n_pairs = n * (n + 1) / 2;
  L.third = L.hess + L.n_pairs;
  L.n_triples = n * (n + 1) * (n + 2) / 6;
  L.count = L.third + L.n_triples;
  int p = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      L.pairs[p] = {i, j};
      L.pair[i][j] = L.pair[j][i] = p++;
    }
  int t = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k) {
        L.triples[t] = {i, j, k};
        const int perm[6][3] = {{i, j, k}, {i, k, j}, {j, i, k},
                                {j, k, i}, {k, i, j}, {k, j, i}};
        for (const auto &q : perm)
          L.triple[q[0]][q[1]][q[2]] = t;
        ++t;
      }
  return L;
}

const Layout &layout(int n) {
  static const std::array<Layout, Jet3::kMaxVars + 1> all = [] {
    std::array<Layout, Jet3::kMaxVars + 1> a{};
    for (int k = 0; k <= Jet3::kMaxVars; ++k)
      a[k] = make_layout(k);
    return a;
  }();
  return all[static_cast<std::size_t>(n)];
}

void check_same(const Jet3 &a, const Jet3 &b) {
  if (a.variables() != b.variables())
    throw std::invalid_argument("Jet3: operands over different variable counts");
}

void check_index(int i, int n) {
  if (i < 0 || i >= n)
    throw std::out_of_range("Jet3: variable index " + std::to_string(i) +
                            " out of range for " + std::to_string(n) + " variables");
}

} // namespace

namespace jet_layout {
int hess_slots(int n) { return n * (n + 1) / 2; }
int third_slots(int n) { return n * (n + 1) * (n + 2) / 6; }
int pair_index(int n, int i, int j) { return layout(n).pair[i][j]; }
int triple_index(int n, int i, int j, int k) { return layout(n).triple[i][j][k]; }
} // namespace jet_layout

int Jet3::slot_count() const noexcept { return layout(n_).count; }

Jet3 Jet3::constant(int n, double value) {
  if (n < 0 || n > kMaxVars)
    throw std::out_of_range("Jet3: variable count must be in [0, 8]");
  Jet3 j;
  j.n_ = n;
  j.s_[0] = value;
  return j;
}

Jet3 Jet3::variable(int index, double base_value, int n) {
  Jet3 j = constant(n, base_value);
  check_index(index, n);
  j.s_[static_cast<std::size_t>(1 + index)] = 1.0;
  return j;
}

Jet3 jet_variable(int index, double base_value, int n) {
  return Jet3::variable(index, base_value, n);
}

double Jet3::grad(int i) const {
  check_index(i, n_);
  return s_[static_cast<std::size_t>(1 + i)];
}

double Jet3::hess(int i, int j) const {
  check_index(i, n_);
  check_index(j, n_);
  const Layout &L = layout(n_);
  return s_[static_cast<std::size_t>(L.hess + L.pair[i][j])];
}

double Jet3::third(int i, int j, int k) const {
  check_index(i, n_);
  check_index(j, n_);
  check_index(k, n_);
  const Layout &L = layout(n_);
  return s_[static_cast<std::size_t>(L.third + L.triple[i][j][k])];
}

void Jet3::set_grad(int i, double v) {
  check_index(i, n_);
  s_[static_cast<std::size_t>(1 + i)] = v;
}

void Jet3::set_hess(int i, int j, double v) {
  check_index(i, n_);
  check_index(j, n_);
  const Layout &L = layout(n_);
  s_[static_cast<std::size_t>(L.hess + L.pair[i][j])] = v;
}

void Jet3::set_third(int i, int j, int k, double v) {
  check_index(i, n_);
  check_index(j, n_);
  check_index(k, n_);
  const Layout &L = layout(n_);
  s_[static_cast<std::size_t>(L.third + L.triple[i][j][k])] = v;
}

Jet3 &Jet3::operator=(double c) {
  std::fill(s_.begin(), s_.end(), 0.0);
  s_[0] = c;
  return *this;
}

Jet3 operator+(const Jet3 &a, const Jet3 &b) {
  check_same(a, b);
  Jet3 r;
  r.n_ = a.n_;
  simd::kernels().axpby(1.0, a.s_.data(), 1.0, b.s_.data(), r.s_.data(),
                        static_cast<std::size_t>(a.slot_count()));
  return r;
}

Jet3 operator-(const Jet3 &a, const Jet3 &b) {
  check_same(a, b);
  Jet3 r;
  r.n_ = a.n_;
  simd::kernels().axpby(1.0, a.s_.data(), -1.0, b.s_.data(), r.s_.data(),
                        static_cast<std::size_t>(a.slot_count()));
  return r;
}

Jet3 operator-(const Jet3 &a) {
  Jet3 r;
  r.n_ = a.n_;
  simd::kernels().scale(-1.0, a.s_.data(), r.s_.data(),
                        static_cast<std::size_t>(a.slot_count()));
  return r;
}

Jet3 operator*(double c, const Jet3 &a) {
  Jet3 r;
  r.n_ = a.n_;
  simd::kernels().scale(c, a.s_.data(), r.s_.data(),
                        static_cast<std::size_t>(a.slot_count()));
  return r;
}

Jet3 operator+(const Jet3 &a, double c) {
  Jet3 r = a;
  r.s_[0] += c;
  return r;
}

Jet3 operator*(const Jet3 &a, const Jet3 &b) {
  check_same(a, b);
  const Layout &L = layout(a.n_);
  const double *x = a.s_.data();
  const double *y = b.s_.data();
  Jet3 r;
  r.n_ = a.n_;
  double *o = r.s_.data();
  // Terms with all derivatives on one factor: b0*a + a0*b.
  simd::kernels().axpby(y[0], x, x[0], y, o, static_cast<std::size_t>(L.count));
  o[0] = x[0] * y[0];
  const double *xg = x + L.grad;
  const double *yg = y + L.grad;
  const double *xh = x + L.hess;
  const double *yh = y + L.hess;
  for (int p = 0; p < L.n_pairs; ++p) {
    const int i = L.pairs[p][0], j = L.pairs[p][1];
    o[L.hess + p] += xg[i] * yg[j] + xg[j] * yg[i];
  }
  for (int t = 0; t < L.n_triples; ++t) {
    const int i = L.triples[t][0], j = L.triples[t][1], k = L.triples[t][2];
    const int ij = L.pair[i][j], ik = L.pair[i][k], jk = L.pair[j][k];
    o[L.third + t] += xh[ij] * yg[k] + xh[ik] * yg[j] + xh[jk] * yg[i] +
                      xg[i] * yh[jk] + xg[j] * yh[ik] + xg[k] * yh[ij];
  }
  return r;
}

Jet3 compose(const Jet3 &a, double f0, double f1, double f2, double f3) {
  const Layout &L = layout(a.n_);
  const double *x = a.s_.data();
  Jet3 r;
  r.n_ = a.n_;
  double *o = r.s_.data();
  simd::kernels().scale(f1, x, o, static_cast<std::size_t>(L.count));
  o[0] = f0;
  const double *xg = x + L.grad;
  const double *xh = x + L.hess;
  if (f2 != 0.0)
    for (int p = 0; p < L.n_pairs; ++p) {
      const int i = L.pairs[p][0], j = L.pairs[p][1];
      o[L.hess + p] += f2 * xg[i] * xg[j];
    }
  for (int t = 0; t < L.n_triples; ++t) {
    const int i = L.triples[t][0], j = L.triples[t][1], k = L.triples[t][2];
    o[L.third + t] += f3 * xg[i] * xg[j] * xg[k] +
                      f2 * (xh[L.pair[i][j]] * xg[k] + xh[L.pair[i][k]] * xg[j] +
                            xh[L.pair[j][k]] * xg[i]);
  }
  return r;
}

Jet3 reciprocal(const Jet3 &a) {
  const double x = a.value();
  if (x == 0.0)
    throw std::domain_error("Jet3: division by a jet with zero value");
  const double r = 1.0 / x;
  const double r2 = r * r;
  return compose(a, r, -r2, 2.0 * r2 * r, -6.0 * r2 * r2);
}

Jet3 operator/(const Jet3 &a, const Jet3 &b) {
  check_same(a, b);
  return a * reciprocal(b);
}

Jet3 &Jet3::operator+=(const Jet3 &b) { return *this = *this + b; }
Jet3 &Jet3::operator-=(const Jet3 &b) { return *this = *this - b; }
Jet3 &Jet3::operator*=(const Jet3 &b) { return *this = *this * b; }
Jet3 &Jet3::operator/=(const Jet3 &b) { return *this = *this / b; }

Jet3 sin(const Jet3 &a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return compose(a, s, c, -s, -c);
}

Jet3 cos(const Jet3 &a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return compose(a, c, -s, -c, s);
}

Jet3 tan(const Jet3 &a) {
  const double t = std::tan(a.value());
  const double sec2 = 1.0 + t * t;
  return compose(a, t, sec2, 2.0 * t * sec2, sec2 * (2.0 + 6.0 * t * t));
}

Jet3 exp(const Jet3 &a) {
  const double e = std::exp(a.value());
  return compose(a, e, e, e, e);
}

Jet3 log(const Jet3 &a) {
  const double x = a.value();
  if (!(x > 0.0))
    throw std::domain_error("Jet3: log of a non-positive value");
  const double r = 1.0 / x;
  return compose(a, std::log(x), r, -r * r, 2.0 * r * r * r);
}

Jet3 sqrt(const Jet3 &a) {
  const double x = a.value();
  if (!(x > 0.0))
    throw std::domain_error("Jet3: sqrt needs a positive value");
  const double s = std::sqrt(x);
  const double r = 1.0 / x;
  return compose(a, s, 0.5 / s, -0.25 * r / s, 0.375 * r * r / s);
}

Jet3 atan(const Jet3 &a) {
  const double x = a.value();
  const double q = 1.0 / (1.0 + x * x);
  return compose(a, std::atan(x), q, -2.0 * x * q * q, (6.0 * x * x - 2.0) * q * q * q);
}

Jet3 bump(const Jet3 &a) {
  const double t = a.value();
  if (t >= 1.0)
    return compose(a, 0.0, 0.0, 0.0, 0.0);
  const double u = 1.0 / (1.0 - t);
  const double f = std::exp(1.0 - u);
  const double u2 = u * u, u3 = u2 * u, u4 = u2 * u2;
  return compose(a, f, -f * u2, f * (u4 - 2.0 * u3), f * (-u4 * u2 + 6.0 * u4 * u - 6.0 * u4));
}

Jet3 ipow(const Jet3 &a, int k) {
  if (k == 0)
    return Jet3::constant(a.variables(), 1.0);
  const double x = a.value();
  if (k < 0 && x == 0.0)
    throw std::domain_error("Jet3: negative power of zero");
  // Falling-factorial coefficients vanish exactly where x^(k-m) would be
  // undefined at x = 0 for small positive k.
  auto term = [&](int m) {
    double c = 1.0;
    for (int q = 0; q < m; ++q)
      c *= static_cast<double>(k - q);
    return c == 0.0 ? 0.0 : c * std::pow(x, k - m);
  };
  return compose(a, std::pow(x, k), term(1), term(2), term(3));
}

} // namespace lcw
