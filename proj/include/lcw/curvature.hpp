#pragma once

// Pointwise curvature of a metric from its exact derivatives.
//
// Sign convention: R(x, y, z, t) = g(R(x, y) t, z) with
// R(X, Y) = [nabla_X, nabla_Y] - nabla_[X,Y], so R(x, y, x, y) is the
// sectional curvature of span{x, y} times |x ^ y|^2 and the unit sphere has
// Ric = (n - 1) g. With this sign,
//   Ric(u, v) = sum_i R(u, e_i, v, e_i),   s = tr Ric,
//   S = (Ric - s g / (2(n-1))) / (n-2),     W = R - S (kn) g,
//   C_ijk = (nabla_i S)_jk - (nabla_j S)_ik.

#include "lcw/metric.hpp"
#include "lcw/tensor.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace lcw {

/// Gamma^k_ij and its first two coordinate derivatives.
struct ChristoffelJets {
  Tensor3 gamma;   // [k][i][j]
  Tensor4 dgamma;  // [m][k][i][j] = d_m Gamma^k_ij
  Tensor5 d2gamma; // [m][p][k][i][j]
};

ChristoffelJets christoffel(const MetricJets &mj);

/// Coordinate (0,4) curvature R_abcd.
Tensor4 riemann(const ChristoffelJets &ch, const MetricJets &mj);
/// d_m R_abcd as [m][a][b][c][d].
Tensor5 riemann_gradient(const ChristoffelJets &ch, const MetricJets &mj);

struct RicciScalar {
  Eigen::MatrixXd ricci;
  double scalar = 0.0;
};

/// Traces against g^{-1}; pass the identity for frame components.
RicciScalar ricci_scalar(const Tensor4 &R, const Eigen::MatrixXd &g);

Eigen::MatrixXd schouten(const Eigen::MatrixXd &ricci, double scalar, const Eigen::MatrixXd &g);

/// (a kn b)_ijkl = a_ik b_jl + a_jl b_ik - a_il b_jk - a_jk b_il
Tensor4 kulkarni_nomizu(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b);

Tensor4 weyl_tensor(const Tensor4 &R, const Eigen::MatrixXd &S, const Eigen::MatrixXd &g);

/// dS[a][b][c] = d_a S_bc; gamma from christoffel(). Coordinate components.
Tensor3 cotton(const Eigen::MatrixXd &S, const Tensor3 &dS, const Tensor3 &gamma);

/// CY_ij = 1/2 C_kli g_jm eps^{klm} / sqrt(det g), n = 3 only.
/// orientation = -1 reverses the coordinate orientation (CY -> -CY).
Eigen::MatrixXd cotton_york(const Tensor3 &C, const Eigen::MatrixXd &g, int orientation = 1);

/// Columns are a g-orthonormal frame: F = L^{-T} with g = L L^T.
Eigen::MatrixXd orthonormal_frame(const Eigen::MatrixXd &g);

/// Everything at one chart point. Tensor components are in the orthonormal
/// frame `frame` unless the name says otherwise.
struct CurvaturePackage {
  int n = 0;
  std::vector<double> point;
  Eigen::MatrixXd frame;
  Eigen::MatrixXd metric;     // coordinate g at the point
  Tensor3 christoffel;        // coordinate Gamma^k_ij
  Tensor4 dchristoffel;       // coordinate d_m Gamma^k_ij
  Tensor4 riemann;
  Eigen::MatrixXd ricci;
  double scalar = 0.0;
  Eigen::MatrixXd schouten;
  Tensor3 schouten_gradient;  // (nabla_a S)_bc
  Tensor3 cotton;
  Tensor3 cotton_coordinates; // C_ijk in the chart frame
  Tensor4 weyl;                               // exactly zero for n = 3
  std::optional<Eigen::Matrix3d> cotton_york; // n = 3
  int orientation = 1;
};

CurvaturePackage compute_curvature(const MetricJets &mj, int orientation = 1);
CurvaturePackage compute_curvature(const MetricSpec &spec, std::span<const double> point,
                                   int orientation = 1);

/// Same package expressed in the frame frame*Q (Q orthogonal).
CurvaturePackage rotate_frame(const CurvaturePackage &pkg, const Eigen::MatrixXd &Q);

/// Identity residuals of a package, each relative to the natural norm.
struct IdentityCheck {
  double riemann_antisymmetry = 0.0; // R_ijkl + R_jikl, R_ijkl + R_ijlk
  double riemann_pair_symmetry = 0.0;
  double first_bianchi = 0.0;
  double cotton_antisymmetry = 0.0;
  double cotton_cyclic = 0.0;
  double cotton_trace_ij = 0.0;
  double cotton_trace_ik = 0.0;
  double weyl_ricci_contraction = 0.0;
  double weyl_bianchi = 0.0;
  double schouten_ricci = 0.0;   // r(S kn g) - Ric
  double decomposition = 0.0;    // R - (W + S kn g)
  double cotton_york_symmetry = 0.0;
  double cotton_york_trace = 0.0;

  double worst() const;
};

IdentityCheck check_identities(const CurvaturePackage &pkg);

/// Relative size helper with absolute floor 1e-12.
inline double relative(double err, double scale) { return err / std::max(scale, 1e-12); }

} // namespace lcw
