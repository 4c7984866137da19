#pragma once

// Per-point obstruction evaluation and the JSON reports built from it.

#include "lcw/cotton_york.hpp"
#include "lcw/eigenflag.hpp"
#include "lcw/json_io.hpp"
#include "lcw/metric.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lcw {

const char *version();

enum class Branch { weyl_eigenflag, cotton_york };
enum class PointVerdict { no_lcw_certified, inconclusive, weyl_negligible, zero, error };

std::string to_string(Branch b);
std::string to_string(PointVerdict v);

struct ObstructionOptions {
  EigenflagOptions eigenflag;
  double tol_det = kDefaultDetTolerance;
  int orientation = 1;
  /// Cube-sphere resolution for the n = 4 positivity certificate; 0 disables.
  int certify_grid = 0;
};

struct PointReport {
  std::vector<double> point;
  int n = 0;
  Branch branch = Branch::weyl_eigenflag;
  double norm = 0.0;        // |W| (operator Frobenius) or |CY|
  double obstruction = 0.0; // normalized residual minimum or det CY
  std::string label;        // eigenflag verdict or CY stratum
  PointVerdict verdict = PointVerdict::inconclusive;
  bool converged = true;
  std::string error;

  std::optional<EigenflagReport> eigenflag;
  std::optional<PositivityCertificate> certificate;
  std::optional<CottonYorkTensor> cotton_york;
};

/// Never throws for pipeline failures at the point; they are recorded in
/// `error` with verdict `error`.
PointReport evaluate_point(const MetricSpec &spec, std::span<const double> point,
                           const ObstructionOptions &options);

struct ObstructionReport {
  std::string metric_id;
  int n = 0;
  std::vector<PointReport> points;
  ObstructionOptions options;

  bool any_certified() const;
  bool any_unconverged() const;
  std::string headline() const;
};

inline constexpr const char *kHeadlineCertified =
    "no limiting Carleman weight exists on any neighborhood containing this point";
inline constexpr const char *kHeadlineInconclusive =
    "inconclusive: necessary condition holds at all sampled points";

/// FNV-1a 64-bit of the bytes, as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

Json point_to_json(const PointReport &p);
Json report_to_json(const ObstructionReport &r);

} // namespace lcw
