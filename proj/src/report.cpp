#include "lcw/report.hpp"

#include "lcw/bivector.hpp"
#include "lcw/curvature.hpp"

#include <cstdio>

#ifndef LCW_VERSION
#define LCW_VERSION "0.0.0"
#endif

namespace lcw {

const char *version() { return LCW_VERSION; }

std::string to_string(Branch b) {
  return b == Branch::weyl_eigenflag ? "weyl_eigenflag" : "cotton_york";
}

std::string to_string(PointVerdict v) {
  switch (v) {
  case PointVerdict::no_lcw_certified:
    return "no_lcw_certified";
  case PointVerdict::inconclusive:
    return "inconclusive";
  case PointVerdict::weyl_negligible:
    return "weyl_negligible";
  case PointVerdict::zero:
    return "zero";
  case PointVerdict::error:
    return "error";
  }
  return "unknown";
}

PointReport evaluate_point(const MetricSpec &spec, std::span<const double> point,
                           const ObstructionOptions &options) {
  PointReport rep;
  rep.point.assign(point.begin(), point.end());
  rep.n = spec.dimension();
  rep.branch = rep.n == 3 ? Branch::cotton_york : Branch::weyl_eigenflag;
  try {
    const CurvaturePackage pkg = compute_curvature(spec, point, options.orientation);
    if (rep.n == 3) {
      const CottonYorkTensor cy(*pkg.cotton_york);
      const CyStratum s = classify_cy(cy, options.tol_det);
      rep.norm = cy.norm;
      rep.obstruction = cy.det;
      rep.label = to_string(s);
      rep.verdict = s == CyStratum::nonsingular        ? PointVerdict::no_lcw_certified
                    : s == CyStratum::regular_singular ? PointVerdict::inconclusive
                                                       : PointVerdict::zero;
      rep.cotton_york = cy;
    } else {
      const CurvatureOperator w = to_operator(pkg.weyl);
      EigenflagOptions eo = options.eigenflag;
      eo.reference_norm = to_operator(pkg.riemann).norm();
      const EigenflagReport ef = min_residual(WeylOperator::trusted(w), eo);
      rep.norm = ef.weyl_norm;
      rep.obstruction = ef.residual_min;
      rep.label = to_string(ef.verdict);
      rep.converged = ef.any_converged;
      rep.verdict = ef.verdict == EigenflagVerdict::weyl_negligible ? PointVerdict::weyl_negligible
                    : ef.verdict == EigenflagVerdict::not_eigenflag ? PointVerdict::no_lcw_certified
                                                                    : PointVerdict::inconclusive;
      if (rep.n == 4 && options.certify_grid > 0 && ef.verdict != EigenflagVerdict::weyl_negligible)
        rep.certificate = certify_positive_minimum(WeylOperator::trusted(w), options.certify_grid);
      rep.eigenflag = ef;
    }
  } catch (const std::exception &e) {
    rep.verdict = PointVerdict::error;
    rep.label = "error";
    rep.error = e.what();
  }
  return rep;
}

bool ObstructionReport::any_certified() const {
  for (const auto &p : points)
    if (p.verdict == PointVerdict::no_lcw_certified)
      return true;
  return false;
}

bool ObstructionReport::any_unconverged() const {
  for (const auto &p : points)
    if (!p.converged)
      return true;
  return false;
}

std::string ObstructionReport::headline() const {
  return any_certified() ? kHeadlineCertified : kHeadlineInconclusive;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

Json vector_json(const Eigen::VectorXd &v) {
  Json a = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k)
    a.push_back(v(k));
  return a;
}

Json matrix_json(const Eigen::MatrixXd &m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

} // namespace

Json point_to_json(const PointReport &p) {
  Json j;
  j["point"] = p.point;
  j["dimension"] = p.n;
  j["branch"] = to_string(p.branch);
  j["norm"] = p.norm;
  j["obstruction"] = p.obstruction;
  j["label"] = p.label;
  j["verdict"] = to_string(p.verdict);
  j["converged"] = p.converged;
  if (!p.error.empty())
    j["error"] = p.error;
  if (p.eigenflag) {
    const auto &e = *p.eigenflag;
    Json ef;
    ef["residual_min"] = e.residual_min;
    ef["raw_residual"] = e.raw_residual;
    ef["weyl_norm"] = e.weyl_norm;
    ef["minimizer"] = vector_json(e.minimizer);
    ef["starts"] = e.starts.size();
    std::size_t conv = 0;
    for (const auto &s : e.starts)
      conv += s.converged ? 1 : 0;
    ef["converged_starts"] = conv;
    j["eigenflag"] = ef;
  }
  if (p.certificate) {
    const auto &c = *p.certificate;
    Json cj;
    cj["resolution"] = c.resolution;
    cj["evaluations"] = c.evaluations;
    cj["grid_min"] = c.grid_min;
    cj["lipschitz"] = c.lipschitz;
    cj["delta"] = c.delta;
    cj["lower_bound"] = c.lower_bound;
    cj["certified"] = c.certified;
    j["certificate"] = cj;
  }
  if (p.cotton_york) {
    const auto &c = *p.cotton_york;
    Json cj;
    cj["matrix"] = matrix_json(c.matrix);
    cj["det"] = c.det;
    cj["eigenvalues"] = vector_json(c.eigenvalues);
    j["cotton_york"] = cj;
  }
  return j;
}

Json report_to_json(const ObstructionReport &r) {
  Json j;
  j["tool"] = "lcw";
  j["version"] = version();
  j["metric_id"] = r.metric_id;
  j["dimension"] = r.n;
  j["seed"] = r.options.eigenflag.seed;
  Json tol;
  tol["tol_eigenflag"] = r.options.eigenflag.tol_eigenflag;
  tol["tol_not_eigenflag"] = r.options.eigenflag.tol_not_eigenflag;
  tol["tol_det"] = r.options.tol_det;
  tol["orientation"] = r.options.orientation;
  tol["starts"] = r.options.eigenflag.starts > 0 ? r.options.eigenflag.starts : 8 * r.n;
  tol["max_iterations"] = r.options.eigenflag.max_iterations;
  tol["gradient_tolerance"] = r.options.eigenflag.gradient_tolerance;
  tol["certify_grid"] = r.options.certify_grid;
  j["options"] = tol;
  j["headline"] = r.headline();
  Json pts = Json::array();
  for (const auto &p : r.points)
    pts.push_back(point_to_json(p));
  j["points"] = pts;
  return j;
}

} // namespace lcw
