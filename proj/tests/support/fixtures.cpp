#include "fixtures.hpp"

#include "lcw/curvature.hpp"
#include "lcw/expr.hpp"

#include <cmath>

namespace lcw::testing {

namespace {

std::string num(double v) { return "(" + format_number(v) + ")"; }

std::string random_monomial(int n, Rng &rng, const std::vector<std::string> &x, int first) {
  std::uniform_int_distribution<int> deg(1, 3);
  std::uniform_int_distribution<int> var(first, n - 1);
  const int d = deg(rng);
  std::string m;
  for (int k = 0; k < d; ++k)
    m += (k ? "*" : "") + x[static_cast<std::size_t>(var(rng))];
  return m;
}

} // namespace

std::vector<std::string> names(int n, int first) {
  std::vector<std::string> out;
  for (int k = 0; k < n; ++k)
    out.push_back("x" + std::to_string(k + first));
  return out;
}

MetricSpec euclidean(int n) {
  std::vector<std::string> upper;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      upper.push_back(i == j ? "1" : "0");
  return make_metric(names(n), upper);
}

MetricSpec sphere_chart(int n) {
  const auto x = names(n);
  std::string r2;
  for (int k = 0; k < n; ++k)
    r2 += (k ? "+" : "") + x[k] + "^2";
  const std::string conf = "4/(1+" + r2 + ")^2";
  std::vector<std::string> upper;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      upper.push_back(i == j ? conf : "0");
  return make_metric(x, upper);
}

MetricSpec random_polynomial_metric(int n, Rng &rng, double amplitude) {
  const auto x = names(n);
  std::uniform_real_distribution<double> coef(-amplitude, amplitude);
  std::vector<std::string> upper;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      std::string e = i == j ? "1" : "0";
      for (int t = 0; t < 4; ++t)
        e += " + " + num(coef(rng)) + "*" + random_monomial(n, rng, x, 0);
      upper.push_back(e);
    }
  return make_metric(x, upper);
}

MetricSpec conformally_flat(int n, Rng &rng) {
  const auto x = names(n);
  std::uniform_real_distribution<double> coef(-0.3, 0.3);
  std::string f = "0";
  for (int t = 0; t < 5; ++t)
    f += " + " + num(coef(rng)) + "*" + random_monomial(n, rng, x, 0);
  const std::string conf = "exp(2*(" + f + "))";
  std::vector<std::string> upper;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      upper.push_back(i == j ? conf : "0");
  return make_metric(x, upper);
}

MetricSpec conformal_rescale(const MetricSpec &base, const std::string &f) {
  const int n = base.dimension();
  std::vector<std::string> upper;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      upper.push_back("exp(2*(" + f + "))*(" + to_string(base.component(i, j)) + ")");
  return make_metric(base.coordinates(), upper, base.domain());
}

MetricSpec random_product_metric(int n, Rng &rng) {
  const auto x = names(n, 0);
  std::uniform_real_distribution<double> amp(-0.1, 0.1);
  std::uniform_real_distribution<double> freq(0.5, 1.5);
  std::uniform_int_distribution<int> var(1, n - 1);
  std::uniform_int_distribution<int> kind(0, 2);
  std::vector<std::string> upper;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      if (i == 0) {
        upper.push_back(j == 0 ? "1" : "0");
        continue;
      }
      std::string e = i == j ? "1" : "0";
      for (int t = 0; t < 3; ++t) {
        const std::string a = x[static_cast<std::size_t>(var(rng))];
        const std::string b = x[static_cast<std::size_t>(var(rng))];
        switch (kind(rng)) {
        case 0:
          e += " + " + num(amp(rng)) + "*sin(" + num(freq(rng)) + "*" + a + " + " + b + ")";
          break;
        case 1:
          e += " + " + num(amp(rng)) + "*exp(" + num(freq(rng)) + "*" + a + ")*" + b;
          break;
        default:
          e += " + " + num(amp(rng)) + "*cos(" + num(freq(rng)) + "*" + a + "*" + b + ")";
          break;
        }
      }
      upper.push_back(e);
    }
  return make_metric(x, upper);
}

std::vector<double> random_point(int n, Rng &rng, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  std::vector<double> p(static_cast<std::size_t>(n));
  for (double &v : p)
    v = u(rng);
  return p;
}

Eigen::MatrixXd random_orthogonal(int n, Rng &rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a(i, j) = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  return qr.householderQ();
}

Eigen::VectorXd fd_derivative(const std::function<Eigen::VectorXd(const std::vector<double> &)> &f,
                              const std::vector<double> &x, int k, double h) {
  auto at = [&](double s) {
    std::vector<double> y = x;
    y[static_cast<std::size_t>(k)] += s;
    return f(y);
  };
  return (-at(2 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2 * h)) / (12.0 * h);
}

namespace {

Eigen::VectorXd flat_metric(const MetricSpec &spec, const std::vector<double> &x) {
  const Eigen::MatrixXd g = spec.evaluate(x);
  return Eigen::Map<const Eigen::VectorXd>(g.data(), g.size());
}

// Gamma^k_ij flattened [k][i][j].
Eigen::VectorXd fd_gamma(const MetricSpec &spec, const std::vector<double> &x) {
  const int n = spec.dimension();
  const Eigen::MatrixXd g = spec.evaluate(x);
  const Eigen::MatrixXd ginv = g.inverse();
  std::vector<Eigen::MatrixXd> dg;
  for (int k = 0; k < n; ++k) {
    const Eigen::VectorXd d = fd_derivative([&](const auto &y) { return flat_metric(spec, y); }, x, k, 1e-3);
    dg.push_back(Eigen::Map<const Eigen::MatrixXd>(d.data(), n, n));
  }
  Eigen::VectorXd out(n * n * n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double v = 0;
        for (int l = 0; l < n; ++l)
          v += 0.5 * ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        out((k * n + i) * n + j) = v;
      }
  return out;
}

struct Pointwise {
  Tensor3 gamma;
  Tensor4 riemann;
  Eigen::MatrixXd ricci, schouten;
};

Pointwise fd_pointwise(const MetricSpec &spec, const std::vector<double> &x) {
  const int n = spec.dimension();
  const Eigen::MatrixXd g = spec.evaluate(x);
  const Eigen::MatrixXd ginv = g.inverse();
  const Eigen::VectorXd gam = fd_gamma(spec, x);
  auto G = [&](int k, int i, int j) { return gam((k * n + i) * n + j); };
  std::vector<Eigen::VectorXd> dgam;
  for (int m = 0; m < n; ++m)
    dgam.push_back(fd_derivative([&](const auto &y) { return fd_gamma(spec, y); }, x, m, 2e-3));
  auto dG = [&](int m, int k, int i, int j) { return dgam[m]((k * n + i) * n + j); };

  Pointwise p{Tensor3(n), Tensor4(n), Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd()};
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        p.gamma(k, i, j) = G(k, i, j);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double v = 0;
          for (int l = 0; l < n; ++l) {
            double rm = dG(a, l, b, d) - dG(b, l, a, d);
            for (int q = 0; q < n; ++q)
              rm += G(l, a, q) * G(q, b, d) - G(l, b, q) * G(q, a, d);
            v += g(c, l) * rm;
          }
          p.riemann(a, b, c, d) = v;
        }
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d)
      for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c)
          p.ricci(b, d) += ginv(a, c) * p.riemann(b, a, d, c);
  const double s = (ginv.array() * p.ricci.array()).sum();
  p.schouten = (p.ricci - s / (2.0 * (n - 1)) * g) / (n - 2.0);
  return p;
}

} // namespace

FdCurvature fd_curvature(const MetricSpec &spec, const std::vector<double> &x) {
  const int n = spec.dimension();
  const Pointwise p = fd_pointwise(spec, x);
  std::vector<Eigen::MatrixXd> dS;
  for (int m = 0; m < n; ++m) {
    const Eigen::VectorXd d = fd_derivative(
        [&](const auto &y) {
          const Eigen::MatrixXd s = fd_pointwise(spec, y).schouten;
          return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(s.data(), s.size()));
        },
        x, m, 5e-3);
    dS.push_back(Eigen::Map<const Eigen::MatrixXd>(d.data(), n, n));
  }
  Tensor3 nabla(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        double v = dS[a](b, c);
        for (int k = 0; k < n; ++k)
          v -= p.gamma(k, a, b) * p.schouten(k, c) + p.gamma(k, a, c) * p.schouten(b, k);
        nabla(a, b, c) = v;
      }
  FdCurvature out{p.gamma, p.riemann, p.ricci, p.schouten, Tensor3(n)};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        out.cotton(i, j, k) = nabla(i, j, k) - nabla(j, i, k);
  return out;
}

double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

double max_rel_diff(const std::vector<double> &a, const std::vector<double> &b, double scale) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m / std::max(scale, 1e-300);
}

} // namespace lcw::testing
