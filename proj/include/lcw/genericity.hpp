#pragma once

// Sampling experiments: random Weyl operators, residual statistics, and
// obstruction scans over a chart grid.

#include "lcw/bivector.hpp"
#include "lcw/eigenflag.hpp"
#include "lcw/metric.hpp"
#include "lcw/report.hpp"

#include <cstdint>
#include <ostream>
#include <random>
#include <vector>

namespace lcw {

using Rng = std::mt19937_64;

/// Isotropic Gaussian operator in Frobenius-orthonormal coordinates.
CurvatureOperator sample_operator(int n, Rng &rng);
/// Gaussian operator projected onto the Weyl space, unit Frobenius norm.
WeylOperator sample_weyl(int n, Rng &rng);
/// Gaussian operator projected onto ker(b), scaled to Frobenius norm `norm`.
CurvatureOperator sample_curvature(int n, Rng &rng, double norm);
/// Uniformly random rotation (QR of a Gaussian matrix, det +1).
Eigen::MatrixXd random_rotation(int n, Rng &rng);
/// Unit-norm Weyl operator with the eigenflag property at a random vector.
WeylOperator plant_eigenflag(int n, Rng &rng);

struct SampleStats {
  int n = 0;
  int count = 0;
  std::uint64_t seed = 0;
  std::vector<double> residuals; // sample order
  double min = 0.0, q05 = 0.0, q50 = 0.0, q95 = 0.0, max = 0.0;
  /// Empirical not-eigenflag threshold: the 5% quantile.
  double threshold = 0.0;
  int planted = -1; // index of the planted sample, or -1
  double tol_eigenflag = 1e-8;
  double tol_not_eigenflag = 1e-4;
};

struct SampleOptions {
  EigenflagOptions eigenflag;
  bool plant = false; // replace the last sample by a planted eigenflag operator
};

/// Linear-interpolation quantile of sorted data.
double quantile(const std::vector<double> &sorted, double p);
/// Two-sample Kolmogorov-Smirnov statistic.
double ks_distance(std::vector<double> a, std::vector<double> b);

SampleStats residual_statistics(int n, int count, std::uint64_t seed,
                                const SampleOptions &options = {});

void write_sample_csv(std::ostream &out, const SampleStats &stats);
Json sample_stats_json(const SampleStats &stats);

/// Grid nodes: k points per axis including both endpoints (midpoint if k = 1).
std::vector<std::vector<double>> grid_points(const DomainBox &box, const std::vector<int> &counts);

std::vector<PointReport> scan_metric(const MetricSpec &spec, const std::vector<int> &counts,
                                     const ObstructionOptions &options, unsigned threads = 0);
std::vector<PointReport> evaluate_points(const MetricSpec &spec,
                                         const std::vector<std::vector<double>> &points,
                                         const ObstructionOptions &options, unsigned threads = 0);

/// Header: coordinate names, norm, obstruction, verdict (and det_sign for n = 3).
void write_scan_csv(std::ostream &out, const MetricSpec &spec, const std::vector<PointReport> &rows);

} // namespace lcw
