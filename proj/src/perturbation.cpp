#include "lcw/perturbation.hpp"

#include "lcw/curvature.hpp"
#include "lcw/parallel.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <random>

namespace lcw {

namespace {

double symmetry_defect(const Tensor4 &r) {
  const int n = r.dim();
  double d = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          d = std::max({d, std::abs(r(i, j, k, l) + r(j, i, k, l)),
                        std::abs(r(i, j, k, l) + r(i, j, l, k)),
                        std::abs(r(i, j, k, l) - r(k, l, i, j))});
  return d;
}

double bianchi_defect(const Tensor4 &r) {
  const int n = r.dim();
  double d = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          d = std::max(d, std::abs(r(i, j, k, l) + r(j, k, i, l) + r(k, i, j, l)));
  return d;
}

std::vector<std::string> coordinate_names(int n) {
  std::vector<std::string> names;
  for (int k = 1; k <= n; ++k)
    names.push_back("x" + std::to_string(k));
  return names;
}

DomainBox default_box(int n) {
  return {std::vector<double>(static_cast<std::size_t>(n), -1.0),
          std::vector<double>(static_cast<std::size_t>(n), 1.0)};
}

std::vector<double> resolve_center(const CutoffSpec &cut, int n) {
  if (cut.center.empty())
    return std::vector<double>(static_cast<std::size_t>(n), 0.0);
  if (static_cast<int>(cut.center.size()) != n)
    throw std::invalid_argument("cutoff center has the wrong dimension");
  return cut.center;
}

// Shifted coordinate y_k = x_k - c_k as expression text.
std::string shifted(const std::string &name, double c) {
  if (c == 0.0)
    return name;
  if (c < 0.0)
    return "(" + name + " + " + format_number(-c) + ")";
  return "(" + name + " - " + format_number(c) + ")";
}

struct Polynomial {
  std::vector<std::pair<double, std::string>> terms;

  void add(double coef, std::string monomial) {
    if (coef != 0.0)
      terms.emplace_back(coef, std::move(monomial));
  }

  std::string text() const {
    std::string s;
    for (const auto &[c, m] : terms) {
      if (s.empty())
        s = (c < 0 ? "-" : "") + format_number(std::abs(c)) + "*" + m;
      else
        s += (c < 0 ? " - " : " + ") + format_number(std::abs(c)) + "*" + m;
    }
    return s;
  }
};

std::string cutoff_factor(const CutoffSpec &cut, const std::vector<std::string> &y) {
  if (cut.kind == CutoffKind::constant_one)
    return "";
  if (!(cut.radius > 0.0))
    throw std::invalid_argument("cutoff radius must be positive");
  std::string r2;
  for (std::size_t k = 0; k < y.size(); ++k)
    r2 += (k ? " + " : "") + y[k] + "^2";
  return "bump((" + r2 + ")/" + format_number(cut.radius * cut.radius) + ")";
}

std::string component(bool diagonal, const Polynomial &p, const std::string &phi) {
  const std::string body = p.text();
  if (body.empty())
    return diagonal ? "1" : "0";
  std::string term = phi.empty() ? body : phi + "*(" + body + ")";
  if (!diagonal)
    return term;
  if (phi.empty())
    return "1" + (body[0] == '-' ? " - " + body.substr(1) : " + " + body);
  return "1 + " + term;
}

MetricSpec build(int n, const std::vector<std::vector<Polynomial>> &poly, const PerturbOptions &opt,
                 const std::vector<std::string> &y) {
  const std::string phi = cutoff_factor(opt.cutoff, y);
  std::vector<std::string> upper;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      upper.push_back(component(i == j, poly[i][j], phi));
  return make_metric(coordinate_names(n), upper, opt.domain ? *opt.domain : default_box(n));
}

void check_positive(const MetricSpec &spec, const PerturbOptions &opt) {
  const double margin = positivity_margin(spec, opt.positivity_samples, opt.positivity_seed);
  if (!(margin > 0.0))
    throw PositivityError("perturbed metric is not positive definite on the domain box "
                          "(smallest eigenvalue " + format_number(margin) + ")",
                          margin);
}

} // namespace

AlgebraicCurvature::AlgebraicCurvature(Tensor4 r) : r_(std::move(r)) {
  const double scale = std::max(r_.max_abs(), 1e-300);
  if (r_.dim() < 3 || r_.dim() > 8)
    throw std::invalid_argument("algebraic curvature dimension must be between 3 and 8");
  if (symmetry_defect(r_) > 1e-12 * scale)
    throw InvariantError("tensor lacks the Riemann symmetries");
  if (bianchi_defect(r_) > 1e-12 * std::max(r_.norm(), 1e-300))
    throw InvariantError("tensor violates the first Bianchi identity");
}

AlgebraicCurvature AlgebraicCurvature::zero(int n) { return AlgebraicCurvature(Tensor4(n)); }

AlgebraicCurvature AlgebraicCurvature::from_operator(const CurvatureOperator &op) {
  return AlgebraicCurvature(to_tensor(op));
}

double positivity_margin(const MetricSpec &spec, int samples, std::uint64_t seed) {
  const int n = spec.dimension();
  const DomainBox &box = spec.domain();
  double margin = std::numeric_limits<double>::infinity();
  auto probe = [&](const std::vector<double> &x) {
    try {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(spec.evaluate(x), Eigen::EigenvaluesOnly);
      margin = std::min(margin, es.eigenvalues()(0));
    } catch (const std::exception &) {
      margin = -std::numeric_limits<double>::infinity();
    }
  };
  std::vector<double> x(static_cast<std::size_t>(n));
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    for (int k = 0; k < n; ++k)
      x[k] = (mask >> k) & 1u ? box.hi[k] : box.lo[k];
    probe(x);
  }
  for (int k = 0; k < n; ++k)
    x[k] = 0.5 * (box.lo[k] + box.hi[k]);
  probe(x);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    for (int k = 0; k < n; ++k)
      x[k] = box.lo[k] + (box.hi[k] - box.lo[k]) * u(rng);
    probe(x);
  }
  return margin;
}

MetricSpec perturb_curvature(const AlgebraicCurvature &rstar, const PerturbOptions &options) {
  const int n = rstar.n();
  const auto center = resolve_center(options.cutoff, n);
  const auto names = coordinate_names(n);
  std::vector<std::string> y;
  for (int k = 0; k < n; ++k)
    y.push_back(shifted(names[k], center[k]));

  std::vector<std::vector<Polynomial>> poly(static_cast<std::size_t>(n),
                                            std::vector<Polynomial>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int h = 0; h < n; ++h)
        for (int k = h; k < n; ++k) {
          double c = -rstar(i, h, j, k) / 3.0;
          if (h != k)
            c -= rstar(i, k, j, h) / 3.0;
          poly[i][j].add(c, h == k ? y[h] + "^2" : y[h] + "*" + y[k]);
        }
  MetricSpec spec = build(n, poly, options, y);
  check_positive(spec, options);
  return spec;
}

std::array<int, 2> CottonCoefficients::pair_indices(int pair) {
  static constexpr std::array<std::array<int, 2>, kPairs> t{
      {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}}};
  return t.at(static_cast<std::size_t>(pair));
}

std::array<int, 3> CottonCoefficients::triple_indices(int triple) {
  static constexpr std::array<std::array<int, 3>, kTriples> t{{{0, 0, 0},
                                                               {0, 0, 1},
                                                               {0, 0, 2},
                                                               {0, 1, 1},
                                                               {0, 1, 2},
                                                               {0, 2, 2},
                                                               {1, 1, 1},
                                                               {1, 1, 2},
                                                               {1, 2, 2},
                                                               {2, 2, 2}}};
  return t.at(static_cast<std::size_t>(triple));
}

int CottonCoefficients::pair_index(int i, int j) {
  if (i > j)
    std::swap(i, j);
  for (int p = 0; p < kPairs; ++p)
    if (pair_indices(p) == std::array<int, 2>{i, j})
      return p;
  throw std::out_of_range("pair index out of range");
}

int CottonCoefficients::triple_index(int k, int l, int m) {
  std::array<int, 3> s{k, l, m};
  std::sort(s.begin(), s.end());
  for (int t = 0; t < kTriples; ++t)
    if (triple_indices(t) == s)
      return t;
  throw std::out_of_range("triple index out of range");
}

double CottonCoefficients::operator()(int i, int j, int k, int l, int m) const {
  return at(pair_index(i, j), triple_index(k, l, m));
}

CottonCoefficients CottonCoefficients::from_vector(const Eigen::VectorXd &x) {
  if (x.size() != kSize)
    throw std::invalid_argument("Cotton coefficient vector must have 60 entries");
  CottonCoefficients a;
  for (int p = 0; p < kSize; ++p)
    a.values_[static_cast<std::size_t>(p)] = x(p);
  return a;
}

CottonCoefficients CottonCoefficients::basis(int index) {
  if (index < 0 || index >= kSize)
    throw std::out_of_range("Cotton coefficient basis index out of range");
  CottonCoefficients a;
  a.values_[static_cast<std::size_t>(index)] = 1.0;
  return a;
}

Eigen::VectorXd CottonCoefficients::to_vector() const {
  Eigen::VectorXd x(kSize);
  for (int p = 0; p < kSize; ++p)
    x(p) = values_[static_cast<std::size_t>(p)];
  return x;
}

MetricSpec cotton_perturbation(const CottonCoefficients &a, const PerturbOptions &options) {
  constexpr int n = 3;
  const auto center = resolve_center(options.cutoff, n);
  const auto names = coordinate_names(n);
  std::vector<std::string> y;
  for (int k = 0; k < n; ++k)
    y.push_back(shifted(names[k], center[k]));

  std::vector<std::vector<Polynomial>> poly(n, std::vector<Polynomial>(n));
  for (int p = 0; p < CottonCoefficients::kPairs; ++p) {
    const auto [i, j] = CottonCoefficients::pair_indices(p);
    for (int t = 0; t < CottonCoefficients::kTriples; ++t) {
      const auto [k, l, m] = CottonCoefficients::triple_indices(t);
      // Sum over all orderings of (k, l, m).
      const int mult = (k == l && l == m) ? 1 : (k == l || l == m) ? 3 : 6;
      std::string mono;
      if (k == l && l == m)
        mono = y[k] + "^3";
      else if (k == l)
        mono = y[k] + "^2*" + y[m];
      else if (l == m)
        mono = y[k] + "*" + y[l] + "^2";
      else
        mono = y[k] + "*" + y[l] + "*" + y[m];
      poly[i][j].add(mult * a.at(p, t), mono);
    }
  }
  return build(n, poly, options, y);
}

CottonYorkTensor cotton_york_at(const MetricSpec &spec, const std::vector<double> &point) {
  if (spec.dimension() != 3)
    throw std::invalid_argument("Cotton-York tensor needs n = 3");
  const std::vector<double> x = point.empty() ? std::vector<double>(3, 0.0) : point;
  const CurvaturePackage pkg = compute_curvature(spec, x);
  return CottonYorkTensor(*pkg.cotton_york);
}

namespace {

struct MapCache {
  std::once_flag once;
  Eigen::MatrixXd map;
  int rank = 0;
};

MapCache &map_cache() {
  static MapCache c;
  std::call_once(c.once, [] {
    c.map.resize(5, CottonCoefficients::kSize);
    const auto cols = parallel_map<Eigen::Matrix<double, 5, 1>>(
        CottonCoefficients::kSize, [](std::size_t k) {
          const MetricSpec spec = cotton_perturbation(CottonCoefficients::basis(static_cast<int>(k)));
          return traceless_coordinates(cotton_york_at(spec).matrix);
        });
    for (int k = 0; k < CottonCoefficients::kSize; ++k)
      c.map.col(k) = cols[static_cast<std::size_t>(k)];
    c.rank = numerical_rank(c.map, 1e-10);
  });
  return c;
}

} // namespace

const Eigen::MatrixXd &cy_linear_map() { return map_cache().map; }
int cy_linear_map_rank() { return map_cache().rank; }

CySolution solve_cy_target(const Eigen::Matrix3d &target, const PerturbOptions &options) {
  const CottonYorkTensor t(target);
  const Eigen::MatrixXd &map = cy_linear_map();
  const int rank = cy_linear_map_rank();
  if (rank < 5)
    throw RankDeficiencyError("Cotton-York coefficient map has rank " + std::to_string(rank) +
                                  " < 5",
                              rank);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(map, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd &s = svd.singularValues();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > 1e-10 * s(0))
      inv(k) = 1.0 / s(k);
  const Eigen::VectorXd x = traceless_coordinates(t.matrix);
  const Eigen::VectorXd a =
      svd.matrixV() * inv.asDiagonal() * (svd.matrixU().transpose() * x);

  CySolution sol{CottonCoefficients::from_vector(a), cotton_perturbation(CottonCoefficients::from_vector(a), options),
                 CottonYorkTensor(), rank};
  check_positive(sol.metric, options);
  sol.achieved = cotton_york_at(sol.metric, resolve_center(options.cutoff, 3));
  return sol;
}

} // namespace lcw
