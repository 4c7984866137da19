#pragma once

// Metrics with prescribed curvature data at a point of a flat chart.
//
// Curvature: g_ij = delta_ij - (1/3) sum_{h,k} R*_ihjk y^h y^k phi(y), y = x - p,
// has Riemann tensor R* at p.
// Cotton-York (n = 3): g_ij = delta_ij + phi(y) sum_{k,l,m} A_ij^klm y^k y^l y^m
// has g = delta and vanishing first and second derivatives at p, so CY(p) is
// linear in A.

#include "lcw/bivector.hpp"
#include "lcw/cotton_york.hpp"
#include "lcw/metric.hpp"
#include "lcw/tensor.hpp"

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

namespace lcw {

class PositivityError : public std::runtime_error {
public:
  PositivityError(const std::string &what, double margin)
      : std::runtime_error(what), margin_(margin) {}
  double margin() const noexcept { return margin_; }

private:
  double margin_;
};

class RankDeficiencyError : public std::runtime_error {
public:
  RankDeficiencyError(const std::string &what, int rank) : std::runtime_error(what), rank_(rank) {}
  int rank() const noexcept { return rank_; }

private:
  int rank_;
};

/// A (0,4) tensor with the Riemann symmetries and first Bianchi identity.
class AlgebraicCurvature {
public:
  /// Validates symmetries (relative 1e-12) and the Bianchi identity.
  explicit AlgebraicCurvature(Tensor4 r);
  static AlgebraicCurvature zero(int n);
  static AlgebraicCurvature from_operator(const CurvatureOperator &op);

  int n() const noexcept { return r_.dim(); }
  const Tensor4 &tensor() const noexcept { return r_; }
  double operator()(int i, int j, int k, int l) const { return r_(i, j, k, l); }

private:
  Tensor4 r_;
};

enum class CutoffKind { constant_one, smooth_bump };

struct CutoffSpec {
  CutoffKind kind = CutoffKind::constant_one;
  double radius = 1.0;
  std::vector<double> center; // empty means the origin
};

struct PerturbOptions {
  CutoffSpec cutoff;
  std::optional<DomainBox> domain; // defaults to [-1, 1]^n
  int positivity_samples = 512;
  std::uint64_t positivity_seed = 0x5eed;
};

/// Smallest eigenvalue of g over the box corners, its center and
/// `samples` seeded uniform points.
double positivity_margin(const MetricSpec &spec, int samples, std::uint64_t seed);

MetricSpec perturb_curvature(const AlgebraicCurvature &rstar, const PerturbOptions &options = {});

/// A_ij^klm for n = 3, symmetric in (i,j) and in (k,l,m): 6 x 10 = 60 values.
class CottonCoefficients {
public:
  static constexpr int kPairs = 6;
  static constexpr int kTriples = 10;
  static constexpr int kSize = kPairs * kTriples;

  CottonCoefficients() { values_.fill(0.0); }
  static CottonCoefficients from_vector(const Eigen::VectorXd &x);
  static CottonCoefficients basis(int index);

  double operator()(int i, int j, int k, int l, int m) const;
  double &at(int pair, int triple) { return values_[static_cast<std::size_t>(pair * kTriples + triple)]; }
  double at(int pair, int triple) const { return values_[static_cast<std::size_t>(pair * kTriples + triple)]; }
  Eigen::VectorXd to_vector() const;

  /// (i, j) with i <= j for a pair index; (k, l, m) sorted for a triple index.
  static std::array<int, 2> pair_indices(int pair);
  static std::array<int, 3> triple_indices(int triple);
  static int pair_index(int i, int j);
  static int triple_index(int k, int l, int m);

private:
  std::array<double, kSize> values_;
};

MetricSpec cotton_perturbation(const CottonCoefficients &a, const PerturbOptions &options = {});

/// Cotton-York tensor at a point (default the origin), via the full pipeline.
CottonYorkTensor cotton_york_at(const MetricSpec &spec, const std::vector<double> &point = {});

/// 5 x 60 matrix from A to traceless coordinates of CY at the origin,
/// assembled column by column through the pipeline. Cached after first use.
const Eigen::MatrixXd &cy_linear_map();
int cy_linear_map_rank();

struct CySolution {
  CottonCoefficients coefficients;
  MetricSpec metric;
  CottonYorkTensor achieved;
  int rank = 0;
};

/// Least-norm A with map(A) = target (pseudo-inverse, threshold 1e-10), then
/// the metric is rebuilt and CY recomputed through the pipeline.
CySolution solve_cy_target(const Eigen::Matrix3d &target, const PerturbOptions &options = {});

} // namespace lcw
