// lcw: obstructions to limiting Carleman weights from a metric file.
//
// Exit codes: 0 ok, 2 malformed input, 3 evaluation failure, 4 optimizer did
// not converge at some point (report still written), 5 I/O failure.

#include "lcw/bivector.hpp"
#include "lcw/cotton_york.hpp"
#include "lcw/curvature.hpp"
#include "lcw/eigenflag.hpp"
#include "lcw/expr.hpp"
#include "lcw/genericity.hpp"
#include "lcw/json_io.hpp"
#include "lcw/metric.hpp"
#include "lcw/perturbation.hpp"
#include "lcw/report.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using lcw::MetricSpec;

enum Exit { kOk = 0, kParse = 2, kEval = 3, kNoConvergence = 4, kIo = 5 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string &text, const char *what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used])))
        ++used;
      if (used != item.size())
        throw std::invalid_argument(item);
    } catch (const std::exception &) {
      throw UsageError(std::string("cannot read ") + what + " '" + text + "'");
    }
  }
  if (out.empty())
    throw UsageError(std::string("empty ") + what);
  return out;
}

std::vector<int> parse_counts(const std::string &text) {
  std::vector<int> out;
  for (double v : parse_list(text, "grid")) {
    if (v != std::floor(v) || v < 1 || v > 1e6)
      throw UsageError("grid counts must be positive integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::vector<double> checked_point(const std::string &text, int n) {
  auto p = parse_list(text, "point");
  if (static_cast<int>(p.size()) != n)
    throw UsageError("point '" + text + "' has " + std::to_string(p.size()) + " coordinates, metric has " +
                     std::to_string(n));
  return p;
}

void emit(const std::string &text, const std::string &path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out)
    throw IoError("failed writing '" + path + "'");
}

MetricSpec read_metric(const std::string &path) {
  std::ifstream probe(path);
  if (!probe)
    throw IoError("cannot open metric file '" + path + "'");
  return lcw::load_metric(path);
}

lcw::Json matrix_json(const Eigen::MatrixXd &m) {
  lcw::Json rows = lcw::Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    lcw::Json row = lcw::Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

// Nonzero components as [i, j, k, l, value] rows (1-based indices).
template <int Rank> lcw::Json components_json(const lcw::Tensor<Rank> &t, double floor) {
  lcw::Json out = lcw::Json::array();
  const int n = t.dim();
  std::array<int, Rank> idx{};
  for (std::size_t flat = 0; flat < t.size(); ++flat) {
    std::size_t r = flat;
    for (int s = Rank - 1; s >= 0; --s) {
      idx[s] = static_cast<int>(r % static_cast<std::size_t>(n));
      r /= static_cast<std::size_t>(n);
    }
    const double v = t.values()[flat];
    if (std::abs(v) <= floor)
      continue;
    lcw::Json row = lcw::Json::array();
    for (int s = 0; s < Rank; ++s)
      row.push_back(idx[s] + 1);
    row.push_back(v);
    out.push_back(row);
  }
  return out;
}

struct Common {
  std::uint64_t seed = 0;
  int starts = 0;
  double tol_eigenflag = 1e-8;
  double tol_not_eigenflag = 1e-4;
  double tol_det = lcw::kDefaultDetTolerance;
  int orientation = 1;
  int certify_grid = 0;
  std::string out;
  std::string format;

  lcw::ObstructionOptions options() const {
    if (orientation != 1 && orientation != -1)
      throw UsageError("--orientation must be +1 or -1");
    if (!(tol_eigenflag > 0 && tol_not_eigenflag >= tol_eigenflag))
      throw UsageError("need 0 < --tol-eigenflag <= --tol-not-eigenflag");
    if (!(tol_det > 0))
      throw UsageError("--tol-det must be positive");
    lcw::ObstructionOptions o;
    o.eigenflag.seed = seed;
    o.eigenflag.starts = starts;
    o.eigenflag.tol_eigenflag = tol_eigenflag;
    o.eigenflag.tol_not_eigenflag = tol_not_eigenflag;
    o.tol_det = tol_det;
    o.orientation = orientation;
    o.certify_grid = certify_grid;
    return o;
  }
};

int cmd_curvature(const std::string &metric_path, const std::vector<std::string> &points,
                  const Common &c) {
  const MetricSpec spec = read_metric(metric_path);
  if (points.size() != 1)
    throw UsageError("curvature needs exactly one --point");
  if (c.orientation != 1 && c.orientation != -1)
    throw UsageError("--orientation must be +1 or -1");
  const auto x = checked_point(points[0], spec.dimension());
  const lcw::CurvaturePackage p = lcw::compute_curvature(spec, x, c.orientation);
  const lcw::IdentityCheck id = lcw::check_identities(p);
  const double floor = 0.0;

  lcw::Json j;
  j["tool"] = "lcw";
  j["version"] = lcw::version();
  j["metric_id"] = lcw::fnv1a_hex(lcw::metric_to_json(spec));
  j["dimension"] = p.n;
  j["point"] = p.point;
  j["frame"] = "orthonormal, F = L^-T with g = L L^T";
  lcw::Json norms;
  norms["riemann"] = p.riemann.norm();
  norms["ricci"] = p.ricci.norm();
  norms["scalar"] = p.scalar;
  norms["schouten"] = p.schouten.norm();
  norms["weyl"] = p.weyl.norm();
  norms["cotton"] = p.cotton.norm();
  if (p.cotton_york)
    norms["cotton_york"] = p.cotton_york->norm();
  j["norms"] = norms;
  j["metric"] = matrix_json(p.metric);
  j["ricci"] = matrix_json(p.ricci);
  j["scalar"] = p.scalar;
  j["schouten"] = matrix_json(p.schouten);
  j["riemann"] = components_json(p.riemann, floor);
  j["weyl"] = components_json(p.weyl, floor);
  j["cotton"] = components_json(p.cotton, floor);
  if (p.cotton_york) {
    const lcw::CottonYorkTensor cy(*p.cotton_york);
    lcw::Json cj;
    cj["matrix"] = matrix_json(cy.matrix);
    cj["det"] = cy.det;
    cj["orientation"] = p.orientation;
    j["cotton_york"] = cj;
  }
  lcw::Json ij;
  ij["riemann_antisymmetry"] = id.riemann_antisymmetry;
  ij["riemann_pair_symmetry"] = id.riemann_pair_symmetry;
  ij["first_bianchi"] = id.first_bianchi;
  ij["cotton_antisymmetry"] = id.cotton_antisymmetry;
  ij["cotton_cyclic"] = id.cotton_cyclic;
  ij["cotton_trace_ij"] = id.cotton_trace_ij;
  ij["cotton_trace_ik"] = id.cotton_trace_ik;
  ij["weyl_ricci_contraction"] = id.weyl_ricci_contraction;
  ij["weyl_bianchi"] = id.weyl_bianchi;
  ij["schouten_ricci"] = id.schouten_ricci;
  ij["decomposition"] = id.decomposition;
  if (p.cotton_york) {
    ij["cotton_york_symmetry"] = id.cotton_york_symmetry;
    ij["cotton_york_trace"] = id.cotton_york_trace;
  }
  ij["worst"] = id.worst();
  ij["within_tolerance"] = id.worst() < 1e-10;
  j["identities"] = ij;
  emit(lcw::dump_json(j) + "\n", c.out);
  return kOk;
}

std::vector<std::vector<double>> collect_points(const MetricSpec &spec, const std::vector<std::string> &points,
                                                const std::string &grid) {
  if (!points.empty() && !grid.empty())
    throw UsageError("give either --point or --grid, not both");
  if (!grid.empty()) {
    const auto counts = parse_counts(grid);
    if (static_cast<int>(counts.size()) != spec.dimension())
      throw UsageError("--grid needs one count per coordinate");
    return lcw::grid_points(spec.domain(), counts);
  }
  std::vector<std::vector<double>> out;
  if (points.empty()) {
    // centre of the chart box
    std::vector<double> x;
    for (int k = 0; k < spec.dimension(); ++k)
      x.push_back(0.5 * (spec.domain().lo[k] + spec.domain().hi[k]));
    out.push_back(x);
    return out;
  }
  for (const auto &p : points)
    out.push_back(checked_point(p, spec.dimension()));
  return out;
}

int outcome_code(const std::vector<lcw::PointReport> &rows) {
  for (const auto &r : rows)
    if (r.verdict == lcw::PointVerdict::error)
      return kEval;
  for (const auto &r : rows)
    if (!r.converged)
      return kNoConvergence;
  return kOk;
}

void report_problems(const std::vector<lcw::PointReport> &rows) {
  for (const auto &r : rows) {
    if (r.verdict == lcw::PointVerdict::error)
      std::cerr << "lcw: evaluation failed at point " << lcw::Json(r.point).dump() << ": " << r.error << "\n";
    else if (!r.converged)
      std::cerr << "lcw: optimizer did not converge from any start at point " << lcw::Json(r.point).dump()
                << "\n";
  }
}

int cmd_obstruct(const std::string &metric_path, const std::vector<std::string> &points,
                 const std::string &grid, const Common &c) {
  const MetricSpec spec = read_metric(metric_path);
  const lcw::ObstructionOptions opts = c.options();
  const auto pts = collect_points(spec, points, grid);
  lcw::ObstructionReport rep;
  rep.metric_id = lcw::fnv1a_hex(lcw::metric_to_json(spec));
  rep.n = spec.dimension();
  rep.options = opts;
  rep.points = lcw::evaluate_points(spec, pts, opts);
  if (c.format == "csv") {
    std::ostringstream os;
    lcw::write_scan_csv(os, spec, rep.points);
    emit(os.str(), c.out);
  } else {
    emit(lcw::dump_json(lcw::report_to_json(rep)) + "\n", c.out);
  }
  report_problems(rep.points);
  return outcome_code(rep.points);
}

int cmd_scan(const std::string &metric_path, const std::string &grid, const Common &c) {
  const MetricSpec spec = read_metric(metric_path);
  if (grid.empty())
    throw UsageError("scan needs --grid");
  const lcw::ObstructionOptions opts = c.options();
  const auto counts = parse_counts(grid);
  if (static_cast<int>(counts.size()) != spec.dimension())
    throw UsageError("--grid needs one count per coordinate");
  const auto rows = lcw::scan_metric(spec, counts, opts);
  if (c.format == "json") {
    lcw::ObstructionReport rep{lcw::fnv1a_hex(lcw::metric_to_json(spec)), spec.dimension(), rows, opts};
    emit(lcw::dump_json(lcw::report_to_json(rep)) + "\n", c.out);
  } else {
    std::ostringstream os;
    lcw::write_scan_csv(os, spec, rows);
    emit(os.str(), c.out);
  }
  for (const auto &r : rows)
    if (r.verdict == lcw::PointVerdict::error)
      std::cerr << "lcw: point " << lcw::Json(r.point).dump() << ": " << r.error << "\n";
  return kOk;
}

lcw::PerturbOptions perturb_options(const std::string &cutoff, double radius, const std::string &center, int n) {
  lcw::PerturbOptions o;
  if (cutoff == "bump")
    o.cutoff.kind = lcw::CutoffKind::smooth_bump;
  else if (cutoff != "one")
    throw UsageError("--cutoff must be 'one' or 'bump'");
  if (!(radius > 0))
    throw UsageError("--radius must be positive");
  o.cutoff.radius = radius;
  if (!center.empty())
    o.cutoff.center = checked_point(center, n);
  return o;
}

// {"dimension": n, "operator": N x N matrix on e_i ^ e_j, i < j, lexicographic}
lcw::AlgebraicCurvature read_curvature(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open curvature file '" + path + "'");
  lcw::Json doc;
  try {
    doc = lcw::Json::parse(in);
  } catch (const std::exception &e) {
    throw lcw::SpecError(std::string("curvature file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("dimension") || !doc["dimension"].is_number_integer() ||
      !doc.contains("operator") || !doc["operator"].is_array())
    throw lcw::SpecError("curvature file needs integer 'dimension' and matrix 'operator'");
  const int n = doc["dimension"].get<int>();
  if (n < 3 || n > 8)
    throw lcw::SpecError("curvature dimension must be between 3 and 8");
  const int N = n * (n - 1) / 2;
  const auto &rows = doc["operator"];
  if (static_cast<int>(rows.size()) != N)
    throw lcw::SpecError("'operator' must have n(n-1)/2 rows");
  Eigen::MatrixXd m(N, N);
  for (int a = 0; a < N; ++a) {
    if (!rows[a].is_array() || static_cast<int>(rows[a].size()) != N)
      throw lcw::SpecError("'operator' must be square");
    for (int b = 0; b < N; ++b) {
      if (!rows[a][b].is_number())
        throw lcw::SpecError("'operator' entries must be numbers");
      m(a, b) = rows[a][b].get<double>();
    }
  }
  try {
    return lcw::AlgebraicCurvature::from_operator(lcw::CurvatureOperator(n, m));
  } catch (const std::invalid_argument &e) {
    throw lcw::SpecError(e.what());
  } catch (const lcw::InvariantError &e) {
    throw lcw::SpecError(e.what());
  }
}

int cmd_perturb(int dimension, const std::string &curvature_path, double random_norm, const std::string &cutoff,
                double radius, const std::string &center, const Common &c) {
  std::optional<lcw::AlgebraicCurvature> r;
  if (!curvature_path.empty()) {
    if (random_norm > 0)
      throw UsageError("give either --curvature or --random, not both");
    r = read_curvature(curvature_path);
    if (dimension != 0 && dimension != r->n())
      throw UsageError("--dimension disagrees with the curvature file");
  } else {
    if (dimension < 3 || dimension > 8)
      throw UsageError("--dimension must be between 3 and 8");
    if (random_norm > 0) {
      lcw::Rng rng(c.seed);
      r = lcw::AlgebraicCurvature::from_operator(lcw::sample_curvature(dimension, rng, random_norm));
    } else {
      r = lcw::AlgebraicCurvature::zero(dimension);
    }
  }
  const MetricSpec spec = lcw::perturb_curvature(*r, perturb_options(cutoff, radius, center, r->n()));
  emit(lcw::metric_to_json(spec) + "\n", c.out);
  return kOk;
}

int cmd_solve_cy(const std::string &target, const std::string &metric_out, const std::string &cutoff,
                 double radius, const std::string &center, const Common &c) {
  const auto t = parse_list(target, "target");
  if (t.size() != 6)
    throw UsageError("--target takes the six entries c11,c12,c13,c22,c23,c33");
  Eigen::Matrix3d m;
  m << t[0], t[1], t[2], t[1], t[3], t[4], t[2], t[4], t[5];
  if (std::abs(m.trace()) > 1e-12 * std::max(1.0, m.norm()))
    throw UsageError("--target must be traceless");
  m -= m.trace() / 3.0 * Eigen::Matrix3d::Identity();
  const lcw::CySolution s = lcw::solve_cy_target(m, perturb_options(cutoff, radius, center, 3));
  if (!metric_out.empty())
    emit(lcw::metric_to_json(s.metric) + "\n", metric_out);
  lcw::Json j;
  j["tool"] = "lcw";
  j["version"] = lcw::version();
  j["map_rank"] = s.rank;
  j["target"] = matrix_json(m);
  j["achieved"] = matrix_json(s.achieved.matrix);
  j["det"] = s.achieved.det;
  j["stratum"] = lcw::to_string(lcw::classify_cy(s.achieved, c.tol_det));
  j["verdict"] = lcw::to_string(lcw::obstruction_verdict_3d(s.achieved, c.tol_det));
  lcw::Json coef = lcw::Json::array();
  const Eigen::VectorXd a = s.coefficients.to_vector();
  for (Eigen::Index k = 0; k < a.size(); ++k)
    coef.push_back(a(k));
  j["coefficients"] = coef;
  j["metric"] = lcw::Json::parse(lcw::metric_to_json(s.metric));
  emit(lcw::dump_json(j) + "\n", c.out);
  return kOk;
}

int cmd_sample(int dimension, int count, bool plant, const Common &c) {
  if (dimension < 4 || dimension > 8)
    throw UsageError("--dimension must be between 4 and 8");
  if (count < 1)
    throw UsageError("--count must be positive");
  lcw::SampleOptions o;
  o.eigenflag = c.options().eigenflag;
  o.plant = plant;
  const lcw::SampleStats st = lcw::residual_statistics(dimension, count, c.seed, o);
  if (c.format == "csv") {
    std::ostringstream os;
    lcw::write_sample_csv(os, st);
    emit(os.str(), c.out);
  } else {
    lcw::Json j;
    j["tool"] = "lcw";
    j["version"] = lcw::version();
    j["stats"] = lcw::sample_stats_json(st);
    j["residuals"] = st.residuals;
    emit(lcw::dump_json(j) + "\n", c.out);
  }
  return kOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Obstructions to limiting Carleman weights"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(lcw::version()));

  Common c;
  std::string metric, grid, curvature, cutoff = "one", center, target, metric_out;
  std::vector<std::string> points;
  int dimension = 0, count = 100;
  double random_norm = 0.0, radius = 1.0;
  bool plant = false;

  auto add_metric = [&](CLI::App *s) { s->add_option("metric", metric, "metric JSON file")->required(); };
  auto add_out = [&](CLI::App *s) { s->add_option("--out", c.out, "output path (default stdout)"); };
  auto add_format = [&](CLI::App *s, const std::string &def) {
    s->add_option("--format", c.format, "json or csv (default " + def + ")")
        ->check(CLI::IsMember({"json", "csv"}));
  };
  auto add_tols = [&](CLI::App *s) {
    s->add_option("--seed", c.seed, "seed for start directions and sampling");
    s->add_option("--starts", c.starts, "multistart count (default 8n)")->check(CLI::NonNegativeNumber);
    s->add_option("--tol-eigenflag", c.tol_eigenflag, "eigenflag residual tolerance");
    s->add_option("--tol-not-eigenflag", c.tol_not_eigenflag, "not-eigenflag threshold");
    s->add_option("--tol-det", c.tol_det, "relative det CY tolerance");
    s->add_option("--orientation", c.orientation, "+1 or -1");
    s->add_option("--certify-grid", c.certify_grid, "n = 4 positivity grid resolution (0 = off)")
        ->check(CLI::NonNegativeNumber);
  };

  auto *curv = app.add_subcommand("curvature", "curvature tensors at one point");
  add_metric(curv);
  curv->add_option("--point", points, "x1,..,xn")->required();
  curv->add_option("--orientation", c.orientation, "+1 or -1");
  add_out(curv);

  auto *obs = app.add_subcommand("obstruct", "obstruction report at points or on a grid");
  add_metric(obs);
  obs->add_option("--point", points, "x1,..,xn (repeatable)");
  obs->add_option("--grid", grid, "k1,..,kn points per axis");
  add_tols(obs);
  add_out(obs);
  add_format(obs, "json");

  auto *scan = app.add_subcommand("scan", "obstruction table on a grid");
  add_metric(scan);
  scan->add_option("--grid", grid, "k1,..,kn points per axis")->required();
  add_tols(scan);
  add_out(scan);
  add_format(scan, "csv");

  auto *pert = app.add_subcommand("perturb", "flat metric with prescribed curvature at a point");
  pert->add_option("--dimension", dimension, "n");
  pert->add_option("--curvature", curvature, "JSON file with the curvature operator");
  pert->add_option("--random", random_norm, "random admissible curvature of this Frobenius norm");
  pert->add_option("--seed", c.seed, "seed for --random");
  pert->add_option("--cutoff", cutoff, "one or bump");
  pert->add_option("--radius", radius, "bump radius");
  pert->add_option("--center", center, "p1,..,pn");
  add_out(pert);

  auto *solve = app.add_subcommand("solve-cy", "n = 3 metric with prescribed Cotton-York tensor at a point");
  solve->add_option("--target", target, "c11,c12,c13,c22,c23,c33")->required();
  solve->add_option("--metric-out", metric_out, "also write the metric document here");
  solve->add_option("--tol-det", c.tol_det, "relative det CY tolerance");
  solve->add_option("--cutoff", cutoff, "one or bump");
  solve->add_option("--radius", radius, "bump radius");
  solve->add_option("--center", center, "p1,p2,p3");
  add_out(solve);

  auto *sample = app.add_subcommand("sample", "residual statistics of random Weyl operators");
  sample->add_option("--dimension", dimension, "n")->required();
  sample->add_option("--count", count, "number of samples");
  sample->add_flag("--plant", plant, "replace the last sample by an eigenflag operator");
  add_tols(sample);
  add_out(sample);
  add_format(sample, "csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kParse;
  }

  if (c.format.empty())
    c.format = *obs ? "json" : "csv";

  try {
    if (*curv)
      return cmd_curvature(metric, points, c);
    if (*obs)
      return cmd_obstruct(metric, points, grid, c);
    if (*scan)
      return cmd_scan(metric, grid, c);
    if (*pert)
      return cmd_perturb(dimension, curvature, random_norm, cutoff, radius, center, c);
    if (*solve)
      return cmd_solve_cy(target, metric_out, cutoff, radius, center, c);
    if (*sample)
      return cmd_sample(dimension, count, plant, c);
  } catch (const IoError &e) {
    std::cerr << "lcw: " << e.what() << "\n";
    return kIo;
  } catch (const std::ios_base::failure &e) {
    std::cerr << "lcw: " << e.what() << "\n";
    return kIo;
  } catch (const UsageError &e) {
    std::cerr << "lcw: " << e.what() << "\n";
    return kParse;
  } catch (const lcw::SpecError &e) {
    std::cerr << "lcw: " << e.what() << "\n";
    return kParse;
  } catch (const lcw::ParseError &e) {
    std::cerr << "lcw: " << e.what() << "\n";
    return kParse;
  } catch (const std::exception &e) {
    std::cerr << "lcw: " << e.what() << "\n";
    return kEval;
  }
  return kOk;
}
