#pragma once

#include "lcw/expr.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lcw {

/// Malformed metric document (schema, symmetry, dimension range, or an
/// expression that fails to parse).
class SpecError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The metric cannot be evaluated at the requested point (outside the chart
/// box, not positive definite, or a domain error inside an expression).
class MetricEvaluationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct DomainBox {
  std::vector<double> lo;
  std::vector<double> hi;

  bool contains(std::span<const double> x) const;
};

/// Riemannian metric g_ij on a coordinate chart, given by closed-form
/// expressions. Immutable once built; [i][j] and [j][i] share one tree.
class MetricSpec {
public:
  static constexpr int kMinDimension = 3;
  static constexpr int kMaxDimension = 8;

  MetricSpec(std::vector<std::string> coordinates, std::vector<Expr> upper_triangle,
             DomainBox domain);

  int dimension() const noexcept { return n_; }
  const std::vector<std::string> &coordinates() const noexcept { return coords_; }
  const Expr &component(int i, int j) const;
  const DomainBox &domain() const noexcept { return domain_; }

  /// g at a point of the box. Positive definiteness is not checked here;
  /// metric_jets does that.
  Eigen::MatrixXd evaluate(std::span<const double> x) const;

private:
  int n_;
  std::vector<std::string> coords_;
  std::vector<Expr> upper_; // packed i <= j, row-major
  DomainBox domain_;
};

/// Builds a spec from expression strings given for the upper triangle
/// (row-major, i <= j). Domain defaults to [-1, 1]^n.
MetricSpec make_metric(std::vector<std::string> coordinates,
                       const std::vector<std::string> &upper_triangle,
                       std::optional<DomainBox> domain = std::nullopt);

MetricSpec parse_metric(std::string_view document);
MetricSpec load_metric(const std::string &path);

/// JSON document in the same schema parse_metric reads.
std::string metric_to_json(const MetricSpec &spec);

/// g and its exact coordinate derivatives through order 3 at one point.
/// Derivative arrays are dense; symmetric slots are copies of one jet entry.
struct MetricJets {
  int n = 0;
  std::vector<double> point;
  Eigen::MatrixXd g;
  std::vector<double> d1; // [k][i][j]
  std::vector<double> d2; // [k][l][i][j]
  std::vector<double> d3; // [k][l][m][i][j]

  double dg(int k, int i, int j) const { return d1[idx(k, i, j)]; }
  double d2g(int k, int l, int i, int j) const { return d2[idx(k, l, i, j)]; }
  double d3g(int k, int l, int m, int i, int j) const { return d3[idx(k, l, m, i, j)]; }

  template <class... I> std::size_t idx(I... is) const {
    std::size_t r = 0;
    ((r = r * static_cast<std::size_t>(n) + static_cast<std::size_t>(is)), ...);
    return r;
  }
};

MetricJets metric_jets(const MetricSpec &spec, std::span<const double> point);

} // namespace lcw
