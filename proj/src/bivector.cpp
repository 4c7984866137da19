#include "lcw/bivector.hpp"

#include <array>
#include <cmath>
#include <mutex>

namespace lcw {

BivectorBasis::BivectorBasis(int n) : n_(n), lookup_(static_cast<std::size_t>(n * n), -1) {
  if (n < 2)
    throw std::invalid_argument("bivector basis needs n >= 2");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      lookup_[static_cast<std::size_t>(i * n + j)] = static_cast<int>(pairs_.size());
      pairs_.emplace_back(i, j);
    }
}

int BivectorBasis::index(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_ || i >= j)
    throw std::out_of_range("bivector index needs 0 <= i < j < n");
  return lookup_[static_cast<std::size_t>(i * n_ + j)];
}

std::pair<int, int> BivectorBasis::signed_index(int i, int j) const {
  if (i == j)
    return {0, 0};
  if (i < j)
    return {index(i, j), 1};
  return {index(j, i), -1};
}

CurvatureOperator::CurvatureOperator(int n, Eigen::MatrixXd matrix) : n_(n), m_(std::move(matrix)) {
  const int N = n * (n - 1) / 2;
  if (m_.rows() != N || m_.cols() != N)
    throw std::invalid_argument("curvature operator must be N x N with N = n(n-1)/2");
  if (!m_.allFinite())
    throw std::invalid_argument("curvature operator has non-finite entries");
  const double asym = (m_ - m_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(1.0, m_.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("curvature operator is not symmetric");
  m_ = 0.5 * (m_ + m_.transpose());
}

CurvatureOperator CurvatureOperator::zero(int n) {
  const int N = n * (n - 1) / 2;
  return {n, Eigen::MatrixXd::Zero(N, N)};
}

double CurvatureOperator::operator()(int i, int j, int k, int l) const {
  if (i == j || k == l)
    return 0.0;
  double sign = 1.0;
  if (i > j) {
    std::swap(i, j);
    sign = -sign;
  }
  if (k > l) {
    std::swap(k, l);
    sign = -sign;
  }
  auto flat = [n = n_](int p, int q) { return p * n - p * (p + 1) / 2 + (q - p - 1); };
  return sign * m_(flat(i, j), flat(k, l));
}

namespace {

double violation(const CurvatureOperator &op) {
  const double r = ricci_contraction(op).cwiseAbs().maxCoeff();
  const Eigen::VectorXd b = bianchi_map(op);
  return std::max(r, b.size() ? b.cwiseAbs().maxCoeff() : 0.0);
}

} // namespace

WeylOperator::WeylOperator(CurvatureOperator op, double tol) : op_(std::move(op)) {
  const double scale = std::max(op_.norm(), 1e-12);
  if (violation(op_) > tol * scale)
    throw InvariantError("operator is not in the Weyl space");
}

WeylOperator WeylOperator::trusted(CurvatureOperator op) {
  WeylOperator w;
  w.op_ = std::move(op);
  return w;
}

CurvatureOperator to_operator(const Tensor4 &R) {
  const int n = R.dim();
  const BivectorBasis basis(n);
  const int N = basis.size();
  Eigen::MatrixXd m(N, N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      auto [i, j] = basis.pair(a);
      auto [k, l] = basis.pair(b);
      m(a, b) = R(i, j, k, l);
    }
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-8 * std::max(R.norm(), 1e-12))
    throw InvariantError("tensor lacks pair symmetry");
  return {n, 0.5 * (m + m.transpose())};
}

Tensor4 to_tensor(const CurvatureOperator &op) {
  const int n = op.n();
  Tensor4 R(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          R(i, j, k, l) = op(i, j, k, l);
  return R;
}

Eigen::VectorXd bianchi_map(const CurvatureOperator &op) {
  const int n = op.n();
  std::vector<double> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        for (int l = k + 1; l < n; ++l)
          out.push_back((op(i, j, k, l) + op(j, k, i, l) + op(k, i, j, l)) / 3.0);
  return Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size()));
}

Eigen::MatrixXd ricci_contraction(const CurvatureOperator &op) {
  const int n = op.n();
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int i = 0; i < n; ++i)
        r(x, y) += op(x, i, y, i);
  return r;
}

Eigen::VectorXd operator_coordinates(const CurvatureOperator &op) {
  const Eigen::MatrixXd &m = op.matrix();
  const int N = static_cast<int>(m.rows());
  Eigen::VectorXd x(N * (N + 1) / 2);
  int p = 0;
  for (int a = 0; a < N; ++a)
    for (int b = a; b < N; ++b)
      x(p++) = (a == b) ? m(a, b) : std::sqrt(2.0) * m(a, b);
  return x;
}

CurvatureOperator operator_from_coordinates(int n, const Eigen::VectorXd &x) {
  const int N = n * (n - 1) / 2;
  if (x.size() != N * (N + 1) / 2)
    throw std::invalid_argument("operator coordinate vector has the wrong length");
  Eigen::MatrixXd m(N, N);
  int p = 0;
  for (int a = 0; a < N; ++a)
    for (int b = a; b < N; ++b) {
      const double v = (a == b) ? x(p) : x(p) / std::sqrt(2.0);
      m(a, b) = m(b, a) = v;
      ++p;
    }
  return {n, m};
}

namespace {

constexpr int kMaxCached = 8;

struct ProjectorCache {
  std::array<std::once_flag, kMaxCached + 1> once;
  std::array<Eigen::MatrixXd, kMaxCached + 1> proj;
  std::array<int, kMaxCached + 1> rank{};
};

ProjectorCache &weyl_cache() {
  static ProjectorCache c;
  return c;
}
ProjectorCache &curvature_cache() {
  static ProjectorCache c;
  return c;
}

void build_projector(int n, bool with_ricci, Eigen::MatrixXd &proj, int &rank) {
  const int N = n * (n - 1) / 2;
  const int D = N * (N + 1) / 2;
  const int nb = (n >= 4) ? n * (n - 1) * (n - 2) * (n - 3) / 24 : 0;
  const int nr = with_ricci ? n * (n + 1) / 2 : 0;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(std::max(nb + nr, 1), D);
  for (int p = 0; p < D; ++p) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(D);
    e(p) = 1.0;
    const CurvatureOperator op = operator_from_coordinates(n, e);
    const Eigen::VectorXd b = bianchi_map(op);
    for (int q = 0; q < nb; ++q)
      K(q, p) = b(q);
    if (with_ricci) {
      const Eigen::MatrixXd r = ricci_contraction(op);
      int q = nb;
      for (int x = 0; x < n; ++x)
        for (int y = x; y < n; ++y)
          K(q++, p) = r(x, y);
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(K, Eigen::ComputeFullV);
  const Eigen::VectorXd &s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  int constraint_rank = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > 1e-9 * smax)
      ++constraint_rank;
  const Eigen::MatrixXd kernel = svd.matrixV().rightCols(D - constraint_rank);
  proj = kernel * kernel.transpose();
  rank = D - constraint_rank;
}

const Eigen::MatrixXd &cached(ProjectorCache &cache, int n, bool with_ricci) {
  if (n < 3 || n > kMaxCached)
    throw std::invalid_argument("projector dimension must be between 3 and 8");
  std::call_once(cache.once[static_cast<std::size_t>(n)], [&] {
    build_projector(n, with_ricci, cache.proj[static_cast<std::size_t>(n)],
                    cache.rank[static_cast<std::size_t>(n)]);
  });
  return cache.proj[static_cast<std::size_t>(n)];
}

} // namespace

const Eigen::MatrixXd &weyl_projector(int n) { return cached(weyl_cache(), n, true); }
const Eigen::MatrixXd &curvature_projector(int n) { return cached(curvature_cache(), n, false); }

WeylOperator project_weyl(const CurvatureOperator &op) {
  const Eigen::VectorXd x = weyl_projector(op.n()) * operator_coordinates(op);
  return WeylOperator::trusted(operator_from_coordinates(op.n(), x));
}

CurvatureOperator project_curvature(const CurvatureOperator &op) {
  const Eigen::VectorXd x = curvature_projector(op.n()) * operator_coordinates(op);
  return operator_from_coordinates(op.n(), x);
}

int weyl_space_dim(int n) {
  if (n < 3)
    throw std::invalid_argument("weyl_space_dim needs n >= 3");
  return n * n * (n * n - 1) / 12 - n * (n + 1) / 2;
}

int weyl_projector_rank(int n) {
  weyl_projector(n);
  return weyl_cache().rank[static_cast<std::size_t>(n)];
}

Eigen::MatrixXd lambda2_lift(const Eigen::MatrixXd &Q) {
  const int n = static_cast<int>(Q.rows());
  const BivectorBasis basis(n);
  const int N = basis.size();
  Eigen::MatrixXd L(N, N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      auto [i, j] = basis.pair(a);
      auto [k, l] = basis.pair(b);
      L(a, b) = Q(i, k) * Q(j, l) - Q(i, l) * Q(j, k);
    }
  return L;
}

CurvatureOperator conjugate(const CurvatureOperator &op, const Eigen::MatrixXd &Q) {
  const Eigen::MatrixXd L = lambda2_lift(Q);
  const Eigen::MatrixXd m = L * op.matrix() * L.transpose();
  return {op.n(), 0.5 * (m + m.transpose())};
}

WeylOperator conjugate(const WeylOperator &w, const Eigen::MatrixXd &Q) {
  return WeylOperator::trusted(conjugate(w.op(), Q));
}

Eigen::VectorXd wedge(const Eigen::VectorXd &x, const Eigen::VectorXd &y) {
  const int n = static_cast<int>(x.size());
  const BivectorBasis basis(n);
  Eigen::VectorXd out(basis.size());
  for (int a = 0; a < basis.size(); ++a) {
    auto [i, j] = basis.pair(a);
    out(a) = x(i) * y(j) - x(j) * y(i);
  }
  return out;
}

} // namespace lcw
