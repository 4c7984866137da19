#pragma once

// Dimension-3 obstruction: the Cotton-York tensor is traceless symmetric, and
// a metric near which a limiting Carleman weight exists has det CY = 0.

#include <Eigen/Dense>

#include <string>

namespace lcw {

/// Eigenvalues of a symmetric 3x3 matrix, ascending, by the trigonometric
/// closed form.
Eigen::Vector3d symmetric_eigenvalues3(const Eigen::Matrix3d &a);

struct CottonYorkTensor {
  Eigen::Matrix3d matrix = Eigen::Matrix3d::Zero();
  double trace = 0.0;
  double det = 0.0;
  double norm = 0.0; // Frobenius
  Eigen::Vector3d eigenvalues = Eigen::Vector3d::Zero();

  CottonYorkTensor() = default;
  /// Symmetrizes `m`; throws std::invalid_argument if it is visibly asymmetric
  /// or not traceless (relative 1e-10).
  explicit CottonYorkTensor(const Eigen::Matrix3d &m);
};

enum class CyStratum { nonsingular, regular_singular, zero };
enum class CyVerdict { no_lcw_certified, inconclusive };

std::string to_string(CyStratum s);
std::string to_string(CyVerdict v);

inline constexpr double kCyZeroFloor = 1e-12;
inline constexpr double kDefaultDetTolerance = 1e-9;

/// zero below the floor; regular_singular when |det| < tol |CY|^3.
CyStratum classify_cy(const CottonYorkTensor &cy, double tol = kDefaultDetTolerance,
                      double floor = kCyZeroFloor);
CyVerdict obstruction_verdict_3d(const CottonYorkTensor &cy, double tol = kDefaultDetTolerance);

/// Q diag(lambda, -lambda, 0) Q^T for Q in SO(3).
CottonYorkTensor stratum_param(double lambda, const Eigen::Matrix3d &Q);

/// Orthonormal coordinates on traceless symmetric 3x3 matrices:
/// ((x11-x22)/sqrt2, (x11+x22-2x33)/sqrt6, sqrt2 x12, sqrt2 x13, sqrt2 x23).
Eigen::Matrix<double, 5, 1> traceless_coordinates(const Eigen::Matrix3d &m);
Eigen::Matrix3d from_traceless_coordinates(const Eigen::Matrix<double, 5, 1> &x);

/// Rodrigues formula for exp of the skew matrix of w.
Eigen::Matrix3d rotation_exp(const Eigen::Vector3d &w);

/// Central-difference Jacobian (5 x 4) of (lambda, w) -> stratum_param(lambda,
/// Q exp(w)) at w = 0, in traceless coordinates.
Eigen::Matrix<double, 5, 4> stratum_jacobian(double lambda, const Eigen::Matrix3d &Q,
                                             double step = 1e-6);
/// Singular values above rel * largest.
int numerical_rank(const Eigen::MatrixXd &m, double rel);

} // namespace lcw
