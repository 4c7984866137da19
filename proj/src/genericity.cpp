#include "lcw/genericity.hpp"

#include "lcw/curvature.hpp"
#include "lcw/json_io.hpp"
#include "lcw/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lcw {

CurvatureOperator sample_operator(int n, Rng &rng) {
  const int N = n * (n - 1) / 2;
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd x(N * (N + 1) / 2);
  for (Eigen::Index k = 0; k < x.size(); ++k)
    x(k) = gauss(rng);
  return operator_from_coordinates(n, x);
}

WeylOperator sample_weyl(int n, Rng &rng) {
  if (n < 4)
    throw std::invalid_argument("sample_weyl needs n >= 4");
  for (;;) {
    const WeylOperator w = project_weyl(sample_operator(n, rng));
    const double norm = w.norm();
    if (norm > 1e-8)
      return WeylOperator::trusted(w.op() * (1.0 / norm));
  }
}

CurvatureOperator sample_curvature(int n, Rng &rng, double norm) {
  for (;;) {
    const CurvatureOperator r = project_curvature(sample_operator(n, rng));
    const double s = r.norm();
    if (s > 1e-8)
      return r * (norm / s);
  }
}

Eigen::MatrixXd random_rotation(int n, Rng &rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a(i, j) = gauss(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k)
    if (r(k, k) < 0)
      q.col(k) = -q.col(k);
  if (q.determinant() < 0)
    q.col(0) = -q.col(0);
  return q;
}

WeylOperator plant_eigenflag(int n, Rng &rng) {
  if (n < 4)
    throw std::invalid_argument("plant_eigenflag needs n >= 4");
  // A curvature tensor that vanishes whenever e_1 is an argument has Weyl
  // part with the eigenflag property at e_1.
  const Tensor4 small = to_tensor(sample_curvature(n - 1, rng, 1.0));
  Tensor4 r(n);
  for (int i = 1; i < n; ++i)
    for (int j = 1; j < n; ++j)
      for (int k = 1; k < n; ++k)
        for (int l = 1; l < n; ++l)
          r(i, j, k, l) = small(i - 1, j - 1, k - 1, l - 1);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  const RicciScalar rs = ricci_scalar(r, id);
  const Tensor4 w = weyl_tensor(r, schouten(rs.ricci, rs.scalar, id), id);
  const CurvatureOperator op = conjugate(to_operator(w), random_rotation(n, rng));
  return WeylOperator::trusted(op * (1.0 / op.norm()));
}

double quantile(const std::vector<double> &sorted, double p) {
  if (sorted.empty())
    throw std::invalid_argument("quantile of an empty sample");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double t = pos - static_cast<double>(lo);
  return sorted[lo] + t * (sorted[hi] - sorted[lo]);
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x)
      ++i;
    while (j < b.size() && b[j] <= x)
      ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

SampleStats residual_statistics(int n, int count, std::uint64_t seed, const SampleOptions &options) {
  if (n < 4)
    throw std::invalid_argument("residual statistics need n >= 4");
  if (count < 1)
    throw std::invalid_argument("sample count must be positive");
  Rng rng(seed);
  std::vector<WeylOperator> ops;
  ops.reserve(static_cast<std::size_t>(count));
  for (int s = 0; s < count; ++s)
    ops.push_back(sample_weyl(n, rng));
  SampleStats st;
  st.n = n;
  st.count = count;
  st.seed = seed;
  st.tol_eigenflag = options.eigenflag.tol_eigenflag;
  st.tol_not_eigenflag = options.eigenflag.tol_not_eigenflag;
  if (options.plant) {
    ops.back() = plant_eigenflag(n, rng);
    st.planted = count - 1;
  }
  EigenflagOptions eo = options.eigenflag;
  const unsigned threads = eo.threads;
  eo.threads = 1;
  st.residuals = parallel_map<double>(
      ops.size(), [&](std::size_t i) { return min_residual(ops[i], eo).residual_min; }, threads);
  std::vector<double> sorted = st.residuals;
  std::sort(sorted.begin(), sorted.end());
  st.min = sorted.front();
  st.max = sorted.back();
  st.q05 = quantile(sorted, 0.05);
  st.q50 = quantile(sorted, 0.50);
  st.q95 = quantile(sorted, 0.95);
  st.threshold = st.q05;
  return st;
}

void write_sample_csv(std::ostream &out, const SampleStats &stats) {
  out << "sample,residual_min,verdict\n";
  for (std::size_t i = 0; i < stats.residuals.size(); ++i) {
    const double r = stats.residuals[i];
    const char *verdict = r < stats.tol_eigenflag       ? "eigenflag_within_tol"
                          : r > stats.tol_not_eigenflag ? "not_eigenflag"
                                                        : "inconclusive";
    out << i << ',' << format_double17(r) << ',' << verdict << '\n';
  }
}

Json sample_stats_json(const SampleStats &stats) {
  Json j;
  j["dimension"] = stats.n;
  j["count"] = stats.count;
  j["seed"] = stats.seed;
  j["min"] = stats.min;
  j["q05"] = stats.q05;
  j["q50"] = stats.q50;
  j["q95"] = stats.q95;
  j["max"] = stats.max;
  j["threshold"] = stats.threshold;
  j["threshold_source"] = "empirical 5% quantile of this sample";
  if (stats.planted >= 0)
    j["planted_index"] = stats.planted;
  return j;
}

std::vector<std::vector<double>> grid_points(const DomainBox &box, const std::vector<int> &counts) {
  const std::size_t n = box.lo.size();
  if (counts.size() != n)
    throw std::invalid_argument("grid needs one count per coordinate");
  std::vector<std::vector<double>> axes(n);
  std::size_t total = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (counts[k] < 1)
      throw std::invalid_argument("grid counts must be positive");
    for (int i = 0; i < counts[k]; ++i)
      axes[k].push_back(counts[k] == 1 ? 0.5 * (box.lo[k] + box.hi[k])
                                       : box.lo[k] + (box.hi[k] - box.lo[k]) * i / (counts[k] - 1));
    total *= static_cast<std::size_t>(counts[k]);
  }
  std::vector<std::vector<double>> pts;
  pts.reserve(total);
  std::vector<int> idx(n, 0);
  for (std::size_t t = 0; t < total; ++t) {
    std::vector<double> x(n);
    for (std::size_t k = 0; k < n; ++k)
      x[k] = axes[k][static_cast<std::size_t>(idx[k])];
    pts.push_back(std::move(x));
    // last coordinate varies fastest
    for (std::size_t k = n; k-- > 0;) {
      if (++idx[k] < counts[k])
        break;
      idx[k] = 0;
    }
  }
  return pts;
}

std::vector<PointReport> evaluate_points(const MetricSpec &spec,
                                         const std::vector<std::vector<double>> &points,
                                         const ObstructionOptions &options, unsigned threads) {
  ObstructionOptions inner = options;
  inner.eigenflag.threads = 1;
  return parallel_map<PointReport>(
      points.size(), [&](std::size_t i) { return evaluate_point(spec, points[i], inner); }, threads);
}

std::vector<PointReport> scan_metric(const MetricSpec &spec, const std::vector<int> &counts,
                                     const ObstructionOptions &options, unsigned threads) {
  return evaluate_points(spec, grid_points(spec.domain(), counts), options, threads);
}

void write_scan_csv(std::ostream &out, const MetricSpec &spec, const std::vector<PointReport> &rows) {
  const bool three = spec.dimension() == 3;
  for (const auto &c : spec.coordinates())
    out << c << ',';
  out << "norm,obstruction,verdict" << (three ? ",det_sign" : "") << '\n';
  for (const auto &r : rows) {
    for (double x : r.point)
      out << format_double17(x) << ',';
    if (r.verdict == PointVerdict::error) {
      out << ",,error" << (three ? "," : "") << '\n';
      continue;
    }
    out << format_double17(r.norm) << ',' << format_double17(r.obstruction) << ',' << r.label;
    if (three)
      out << ',' << (r.obstruction > 0 ? 1 : r.obstruction < 0 ? -1 : 0);
    out << '\n';
  }
}

} // namespace lcw
