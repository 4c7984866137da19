#pragma once

// Curvature operators on bivectors. With an orthonormal frame e_i the
// bivectors e_i ^ e_j (i < j) form an orthonormal basis of Lambda^2 and a
// (0,4) tensor R with the Riemann symmetries is the symmetric matrix
//   rho(e_i ^ e_j, e_k ^ e_l) = R(i, j, k, l).

#include "lcw/tensor.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <utility>
#include <vector>

namespace lcw {

class BivectorBasis {
public:
  explicit BivectorBasis(int n);

  int n() const noexcept { return n_; }
  int size() const noexcept { return static_cast<int>(pairs_.size()); }
  std::pair<int, int> pair(int a) const { return pairs_.at(static_cast<std::size_t>(a)); }
  /// Flat index of e_i ^ e_j for i < j.
  int index(int i, int j) const;
  /// Flat index and sign with e_j ^ e_i = -e_i ^ e_j; sign 0 when i == j.
  std::pair<int, int> signed_index(int i, int j) const;

private:
  int n_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<int> lookup_;
};

class CurvatureOperator {
public:
  CurvatureOperator() = default;
  CurvatureOperator(int n, Eigen::MatrixXd matrix);
  static CurvatureOperator zero(int n);

  int n() const noexcept { return n_; }
  const Eigen::MatrixXd &matrix() const noexcept { return m_; }
  /// rho(e_i ^ e_j, e_k ^ e_l) for any index order.
  double operator()(int i, int j, int k, int l) const;
  double norm() const { return m_.norm(); }

  CurvatureOperator operator*(double s) const { return {n_, m_ * s}; }
  CurvatureOperator operator+(const CurvatureOperator &o) const { return {n_, m_ + o.m_}; }
  CurvatureOperator operator-(const CurvatureOperator &o) const { return {n_, m_ - o.m_}; }

private:
  int n_ = 0;
  Eigen::MatrixXd m_;
};

/// An operator known to lie in ker(b) and ker(r).
class WeylOperator {
public:
  WeylOperator() = default;
  /// Validates the Weyl invariants at relative tolerance tol.
  explicit WeylOperator(CurvatureOperator op, double tol = 1e-10);

  int n() const noexcept { return op_.n(); }
  const CurvatureOperator &op() const noexcept { return op_; }
  const Eigen::MatrixXd &matrix() const noexcept { return op_.matrix(); }
  double norm() const { return op_.norm(); }

  static WeylOperator trusted(CurvatureOperator op);

private:
  CurvatureOperator op_;
};

class InvariantError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

CurvatureOperator to_operator(const Tensor4 &R);
Tensor4 to_tensor(const CurvatureOperator &op);

/// b(R)(x,y,z,t) = (R(x^y, z^t) + R(y^z, x^t) + R(z^x, y^t)) / 3 on sorted
/// quadruples i<j<k<l, lexicographic.
Eigen::VectorXd bianchi_map(const CurvatureOperator &op);
/// r(R)(x,y) = sum_i R(x^e_i, y^e_i).
Eigen::MatrixXd ricci_contraction(const CurvatureOperator &op);

/// Coordinates on symmetric N x N matrices that make the Frobenius inner
/// product Euclidean: diagonal entries as is, off-diagonal times sqrt 2.
Eigen::VectorXd operator_coordinates(const CurvatureOperator &op);
CurvatureOperator operator_from_coordinates(int n, const Eigen::VectorXd &x);

/// Orthogonal projector onto ker(b) cap ker(r) in operator coordinates.
const Eigen::MatrixXd &weyl_projector(int n);
/// Orthogonal projector onto ker(b).
const Eigen::MatrixXd &curvature_projector(int n);

WeylOperator project_weyl(const CurvatureOperator &op);
CurvatureOperator project_curvature(const CurvatureOperator &op);

int weyl_space_dim(int n);
/// Numerical rank of weyl_projector(n) at threshold 1e-9.
int weyl_projector_rank(int n);

/// Induced map on Lambda^2: column (k,l) holds the coordinates of
/// (Q e_k) ^ (Q e_l).
Eigen::MatrixXd lambda2_lift(const Eigen::MatrixXd &Q);
/// Push-forward by Q: result(Qx^Qy, Qz^Qt) = op(x^y, z^t).
CurvatureOperator conjugate(const CurvatureOperator &op, const Eigen::MatrixXd &Q);
WeylOperator conjugate(const WeylOperator &w, const Eigen::MatrixXd &Q);

/// Coordinates of x ^ y in the basis e_i ^ e_j.
Eigen::VectorXd wedge(const Eigen::VectorXd &x, const Eigen::VectorXd &y);

} // namespace lcw
