#pragma once

// Eigenflag test. A Weyl operator W has the eigenflag property when some unit
// v satisfies W(v ^ w1, w2 ^ w3) = 0 for all w1, w2, w3 orthogonal to v. The
// residual
//   E(v) = sum_a sum_{b<c} W(v ^ w_a, w_b ^ w_c)^2
// over an orthonormal basis w of v-perp is computed without building the
// basis: with M_bcd = v^a W_abcd and U_bd = v^c M_bcd,
//   E(v) = |M|^2 / 2 - |U|^2.

#include "lcw/bivector.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace lcw {

enum class EigenflagVerdict { eigenflag_within_tol, not_eigenflag, inconclusive, weyl_negligible };

std::string to_string(EigenflagVerdict v);

/// Flattened W_abcd with the contractions used by E and its gradient.
class ResidualEvaluator {
public:
  explicit ResidualEvaluator(const WeylOperator &w);

  int n() const noexcept { return n_; }
  double value(const Eigen::VectorXd &v) const;
  /// Riemannian gradient on the unit sphere (projected to v-perp).
  double value_and_gradient(const Eigen::VectorXd &v, Eigen::VectorXd &grad) const;
  /// Largest singular value of W viewed as an n x n^3 matrix.
  double sigma_max() const;

private:
  void contract(const double *v, double *M, double *U) const;

  int n_;
  std::vector<double> w_; // [a][b][c][d]
};

/// E(W, v) for unit v. Throws std::invalid_argument if |v| differs from 1 by
/// more than 1e-10.
double residual(const WeylOperator &w, const Eigen::VectorXd &v);
Eigen::VectorXd residual_gradient(const WeylOperator &w, const Eigen::VectorXd &v);

struct EigenflagOptions {
  int starts = 0; // 0 means 8n
  int max_iterations = 500;
  double gradient_tolerance = 1e-12;
  std::uint64_t seed = 0;
  double tol_eigenflag = 1e-8;
  double tol_not_eigenflag = 1e-4;
  /// |R| at the point; W counts as negligible below 1e-12 (1 + |R|).
  double reference_norm = 0.0;
  unsigned threads = 0;
};

struct StartOutcome {
  Eigen::VectorXd start;
  Eigen::VectorXd v;
  double residual = 0.0; // normalized
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct EigenflagReport {
  int n = 0;
  double weyl_norm = 0.0;    // Frobenius norm of the operator matrix
  double residual_min = 0.0; // E / |W|^2
  double raw_residual = 0.0; // E for the unnormalized W
  Eigen::VectorXd minimizer;
  std::vector<StartOutcome> starts;
  bool any_converged = false;
  EigenflagVerdict verdict = EigenflagVerdict::inconclusive;
};

/// Deterministic start directions: `count` rotated Halton points on the
/// sphere followed by the n frame vectors, antipodal duplicates removed.
std::vector<Eigen::VectorXd> start_directions(int n, int count, std::uint64_t seed);

EigenflagReport min_residual(const WeylOperator &w, const EigenflagOptions &options = {});

struct PositivityCertificate {
  int resolution = 0;
  std::size_t evaluations = 0;
  double grid_min = 0.0;
  double lipschitz = 0.0;
  double delta = 0.0;       // geodesic covering radius
  double lower_bound = 0.0; // grid_min - lipschitz * delta
  bool certified = false;   // lower_bound > 0
};

/// Lower bound for min E of W / |W| over S^3 (n = 4) from a cube-sphere grid
/// with `resolution` intervals per facet edge.
PositivityCertificate certify_positive_minimum(const WeylOperator &w, int resolution);

/// n^3/3 - n^2 - 4n/3 + 2 in exact integer arithmetic, n >= 4.
std::int64_t codim_eigenflag(int n);

/// Diagonal on f1^f2, f3^f4 (eigenvalue a), f1^f3, f4^f2 (b), f1^f4, f2^f3 (c),
/// where f are the columns of `frame`. Requires a + b + c = 0.
WeylOperator construct_stratum4(double a, double b, double c,
                                const Eigen::MatrixXd &frame = Eigen::MatrixXd::Identity(4, 4));

enum class Weyl4Pattern {
  zero,             // the zero operator
  three_pairs,      // three distinct eigenvalues, each of multiplicity 2
  double_quadruple, // lambda twice and -lambda/2 four times
  other
};

std::string to_string(Weyl4Pattern p);
Weyl4Pattern classify_weyl4_spectrum(const WeylOperator &w, double tol = 1e-8);

} // namespace lcw
