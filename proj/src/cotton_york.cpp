#include "lcw/cotton_york.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lcw {

Eigen::Vector3d symmetric_eigenvalues3(const Eigen::Matrix3d &a) {
  const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
  Eigen::Vector3d ev;
  if (p1 == 0.0) {
    ev << a(0, 0), a(1, 1), a(2, 2);
    std::sort(ev.data(), ev.data() + 3);
    return ev;
  }
  const double q = a.trace() / 3.0;
  const double p2 = (a(0, 0) - q) * (a(0, 0) - q) + (a(1, 1) - q) * (a(1, 1) - q) +
                    (a(2, 2) - q) * (a(2, 2) - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  const Eigen::Matrix3d b = (a - q * Eigen::Matrix3d::Identity()) / p;
  const double r = std::clamp(b.determinant() / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double hi = q + 2.0 * p * std::cos(phi);
  const double lo = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  ev << lo, 3.0 * q - hi - lo, hi;
  return ev;
}

CottonYorkTensor::CottonYorkTensor(const Eigen::Matrix3d &m) {
  const double scale = std::max(m.norm(), kCyZeroFloor);
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::invalid_argument("Cotton-York tensor must be symmetric");
  matrix = 0.5 * (m + m.transpose());
  trace = matrix.trace();
  if (std::abs(trace) > 1e-10 * scale)
    throw std::invalid_argument("Cotton-York tensor must be traceless");
  det = matrix.determinant();
  norm = matrix.norm();
  eigenvalues = symmetric_eigenvalues3(matrix);
}

std::string to_string(CyStratum s) {
  switch (s) {
  case CyStratum::nonsingular:
    return "nonsingular";
  case CyStratum::regular_singular:
    return "regular_singular";
  case CyStratum::zero:
    return "zero";
  }
  return "unknown";
}

std::string to_string(CyVerdict v) {
  return v == CyVerdict::no_lcw_certified ? "no_lcw_certified" : "inconclusive";
}

CyStratum classify_cy(const CottonYorkTensor &cy, double tol, double floor) {
  if (cy.norm < floor)
    return CyStratum::zero;
  if (std::abs(cy.det) < tol * cy.norm * cy.norm * cy.norm)
    return CyStratum::regular_singular;
  return CyStratum::nonsingular;
}

CyVerdict obstruction_verdict_3d(const CottonYorkTensor &cy, double tol) {
  return classify_cy(cy, tol) == CyStratum::nonsingular ? CyVerdict::no_lcw_certified
                                                        : CyVerdict::inconclusive;
}

CottonYorkTensor stratum_param(double lambda, const Eigen::Matrix3d &Q) {
  if ((Q.transpose() * Q - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("stratum_param needs an orthogonal matrix");
  if (Q.determinant() < 0)
    throw std::invalid_argument("stratum_param needs det Q = 1");
  const Eigen::Vector3d d(lambda, -lambda, 0.0);
  return CottonYorkTensor(Q * d.asDiagonal() * Q.transpose());
}

Eigen::Matrix<double, 5, 1> traceless_coordinates(const Eigen::Matrix3d &m) {
  const double r2 = std::sqrt(2.0), r6 = std::sqrt(6.0);
  Eigen::Matrix<double, 5, 1> x;
  x << (m(0, 0) - m(1, 1)) / r2, (m(0, 0) + m(1, 1) - 2.0 * m(2, 2)) / r6, r2 * m(0, 1),
      r2 * m(0, 2), r2 * m(1, 2);
  return x;
}

Eigen::Matrix3d from_traceless_coordinates(const Eigen::Matrix<double, 5, 1> &x) {
  const double r2 = std::sqrt(2.0), r6 = std::sqrt(6.0);
  Eigen::Matrix3d m;
  const double a = x(0) / r2, b = x(1) / r6;
  m(0, 0) = a + b;
  m(1, 1) = -a + b;
  m(2, 2) = -2.0 * b;
  m(0, 1) = m(1, 0) = x(2) / r2;
  m(0, 2) = m(2, 0) = x(3) / r2;
  m(1, 2) = m(2, 1) = x(4) / r2;
  return m;
}

Eigen::Matrix3d rotation_exp(const Eigen::Vector3d &w) {
  const double theta = w.norm();
  Eigen::Matrix3d K;
  K << 0, -w(2), w(1), w(2), 0, -w(0), -w(1), w(0), 0;
  if (theta < 1e-12)
    return Eigen::Matrix3d::Identity() + K;
  return Eigen::Matrix3d::Identity() + std::sin(theta) / theta * K +
         (1.0 - std::cos(theta)) / (theta * theta) * K * K;
}

Eigen::Matrix<double, 5, 4> stratum_jacobian(double lambda, const Eigen::Matrix3d &Q, double step) {
  auto f = [&](const Eigen::Vector4d &p) {
    return traceless_coordinates(stratum_param(p(0), Q * rotation_exp(p.tail<3>())).matrix);
  };
  const Eigen::Vector4d p0(lambda, 0.0, 0.0, 0.0);
  Eigen::Matrix<double, 5, 4> J;
  for (int k = 0; k < 4; ++k) {
    Eigen::Vector4d dp = Eigen::Vector4d::Zero();
    dp(k) = step;
    J.col(k) = (f(p0 + dp) - f(p0 - dp)) / (2.0 * step);
  }
  return J;
}

int numerical_rank(const Eigen::MatrixXd &m, double rel) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd &s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0)
    return 0;
  int r = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > rel * s(0))
      ++r;
  return r;
}

} // namespace lcw
