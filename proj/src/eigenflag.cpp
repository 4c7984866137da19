#include "lcw/eigenflag.hpp"

#include "lcw/parallel.hpp"
#include "lcw/simd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace lcw {

std::string to_string(EigenflagVerdict v) {
  switch (v) {
  case EigenflagVerdict::eigenflag_within_tol:
    return "eigenflag_within_tol";
  case EigenflagVerdict::not_eigenflag:
    return "not_eigenflag";
  case EigenflagVerdict::inconclusive:
    return "inconclusive";
  case EigenflagVerdict::weyl_negligible:
    return "weyl_negligible";
  }
  return "unknown";
}

std::string to_string(Weyl4Pattern p) {
  switch (p) {
  case Weyl4Pattern::zero:
    return "zero";
  case Weyl4Pattern::three_pairs:
    return "three_pairs";
  case Weyl4Pattern::double_quadruple:
    return "double_quadruple";
  case Weyl4Pattern::other:
    return "other";
  }
  return "unknown";
}

ResidualEvaluator::ResidualEvaluator(const WeylOperator &w) : n_(w.n()) {
  const Tensor4 t = to_tensor(w.op());
  w_ = t.values();
}

void ResidualEvaluator::contract(const double *v, double *M, double *U) const {
  const auto &k = simd::kernels();
  const auto n = static_cast<std::size_t>(n_);
  k.gemv_t(w_.data(), n, n * n * n, v, M);
  for (std::size_t b = 0; b < n; ++b)
    k.gemv_t(M + b * n * n, n, n, v, U + b * n);
}

double ResidualEvaluator::value(const Eigen::VectorXd &v) const {
  const auto n = static_cast<std::size_t>(n_);
  std::vector<double> M(n * n * n), U(n * n);
  contract(v.data(), M.data(), U.data());
  const auto &k = simd::kernels();
  const double e = 0.5 * k.dot(M.data(), M.data(), M.size()) - k.dot(U.data(), U.data(), U.size());
  return std::max(e, 0.0);
}

double ResidualEvaluator::value_and_gradient(const Eigen::VectorXd &v, Eigen::VectorXd &grad) const {
  const auto n = static_cast<std::size_t>(n_);
  const std::size_t n2 = n * n, n3 = n2 * n;
  std::vector<double> M(n3), U(n2);
  contract(v.data(), M.data(), U.data());
  const auto &k = simd::kernels();
  const double e = 0.5 * k.dot(M.data(), M.data(), n3) - k.dot(U.data(), U.data(), n2);
  Eigen::VectorXd g(n_);
  for (std::size_t a = 0; a < n; ++a) {
    double g1 = k.dot(w_.data() + a * n3, M.data(), n3);
    double g2 = 0.0;
    // U is symmetric, so row d of U is column d.
    for (std::size_t d = 0; d < n; ++d)
      g2 += k.dot(M.data() + d * n2 + a * n, U.data() + d * n, n);
    g(static_cast<Eigen::Index>(a)) = g1 - 4.0 * g2;
  }
  grad = g - v.dot(g) * v;
  return std::max(e, 0.0);
}

double ResidualEvaluator::sigma_max() const {
  const Eigen::Index n = n_;
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> A(
      w_.data(), n, n * n * n);
  const Eigen::MatrixXd gram = A * A.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
}

namespace {

void require_unit(const Eigen::VectorXd &v, int n) {
  if (v.size() != n)
    throw std::invalid_argument("vector dimension does not match the operator");
  if (std::abs(v.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("residual needs a unit vector");
}

// Flip so the first entry of largest magnitude is positive.
Eigen::VectorXd canonical_sign(Eigen::VectorXd v) {
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  if (v(k) < 0)
    v = -v;
  return v;
}

double radical_inverse(std::uint64_t i, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19};

struct Descent {
  const ResidualEvaluator &eval;
  int max_iterations;
  double gradient_tolerance;

  StartOutcome run(const Eigen::VectorXd &start) const {
    StartOutcome out;
    out.start = start;
    Eigen::VectorXd v = start.normalized();
    Eigen::VectorXd g;
    double f = eval.value_and_gradient(v, g);
    double alpha = 0.1;
    Eigen::VectorXd v_prev, g_prev;
    int it = 0;
    bool stalled = false;
    for (; it < max_iterations; ++it) {
      const double gn2 = g.squaredNorm();
      if (std::sqrt(gn2) < gradient_tolerance)
        break;
      if (it > 0) {
        const Eigen::VectorXd s = v - v_prev, y = g - g_prev;
        const double sy = std::abs(s.dot(y));
        if (sy > 0)
          alpha = std::clamp(s.squaredNorm() / sy, 1e-6, 1e3);
      }
      Eigen::VectorXd v_new, g_new;
      double f_new = 0.0;
      bool accepted = false;
      for (int bt = 0; bt < 60; ++bt) {
        v_new = (v - alpha * g).normalized();
        f_new = eval.value_and_gradient(v_new, g_new);
        if (f_new <= f - 1e-4 * alpha * gn2) {
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) {
        stalled = true;
        break;
      }
      v_prev = v;
      g_prev = g;
      v = v_new;
      g = g_new;
      f = f_new;
    }
    out.v = canonical_sign(v);
    out.residual = f;
    out.gradient_norm = g.norm();
    out.iterations = it;
    out.converged = out.gradient_norm < gradient_tolerance || (stalled && out.gradient_norm < 1e-8);
    return out;
  }
};

} // namespace

double residual(const WeylOperator &w, const Eigen::VectorXd &v) {
  require_unit(v, w.n());
  return ResidualEvaluator(w).value(v);
}

Eigen::VectorXd residual_gradient(const WeylOperator &w, const Eigen::VectorXd &v) {
  require_unit(v, w.n());
  Eigen::VectorXd g;
  ResidualEvaluator(w).value_and_gradient(v, g);
  return g;
}

std::vector<Eigen::VectorXd> start_directions(int n, int count, std::uint64_t seed) {
  if (n < 1 || n > 8)
    throw std::invalid_argument("start_directions supports 1 <= n <= 8");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> shift(static_cast<std::size_t>(n));
  for (double &s : shift)
    s = unif(rng);

  std::vector<Eigen::VectorXd> out;
  auto add = [&](Eigen::VectorXd v) {
    v = canonical_sign(v.normalized());
    for (const auto &u : out)
      if ((u - v).cwiseAbs().maxCoeff() < 1e-12)
        return;
    out.push_back(std::move(v));
  };
  for (std::uint64_t i = 1; static_cast<int>(out.size()) < count && i < 64u * count + 64u; ++i) {
    Eigen::VectorXd x(n);
    for (int k = 0; k < n; ++k) {
      double u = radical_inverse(i, kPrimes[k]) + shift[static_cast<std::size_t>(k)];
      u -= std::floor(u);
      x(k) = 2.0 * u - 1.0;
    }
    if (x.norm() > 1e-6)
      add(x);
  }
  for (int k = 0; k < n; ++k)
    add(Eigen::VectorXd::Unit(n, k));
  return out;
}

EigenflagReport min_residual(const WeylOperator &w, const EigenflagOptions &options) {
  const int n = w.n();
  if (n < 4)
    throw std::invalid_argument("min_residual needs n >= 4");
  EigenflagReport rep;
  rep.n = n;
  rep.weyl_norm = w.norm();
  if (rep.weyl_norm < 1e-12 * (1.0 + options.reference_norm)) {
    rep.verdict = EigenflagVerdict::weyl_negligible;
    rep.minimizer = Eigen::VectorXd::Unit(n, 0);
    rep.any_converged = true;
    return rep;
  }

  const WeylOperator unit = WeylOperator::trusted(w.op() * (1.0 / rep.weyl_norm));
  const ResidualEvaluator eval(unit);
  const Descent descent{eval, options.max_iterations, options.gradient_tolerance};
  const int count = options.starts > 0 ? options.starts : 8 * n;
  const auto starts = start_directions(n, count, options.seed);

  rep.starts = parallel_map<StartOutcome>(
      starts.size(), [&](std::size_t i) { return descent.run(starts[i]); }, options.threads);

  std::size_t best = 0;
  for (std::size_t i = 0; i < rep.starts.size(); ++i) {
    if (rep.starts[i].residual < rep.starts[best].residual)
      best = i;
    rep.any_converged = rep.any_converged || rep.starts[i].converged;
  }
  // Zero sets can have several components (for n = 4 products the parallel
  // axis and three eigenvectors of the fibre Ricci). Among ties prefer the
  // direction leaning on the lowest frame index, so the pick does not depend
  // on start order.
  const double floor = rep.starts[best].residual + 1e-12;
  auto leans_lower = [](const Eigen::VectorXd &a, const Eigen::VectorXd &b) {
    for (Eigen::Index k = 0; k < a.size(); ++k) {
      const double d = std::abs(a(k)) - std::abs(b(k));
      if (std::abs(d) > 1e-6)
        return d > 0;
    }
    return false;
  };
  for (std::size_t i = 0; i < rep.starts.size(); ++i)
    if (rep.starts[i].residual <= floor && leans_lower(rep.starts[i].v, rep.starts[best].v))
      best = i;
  rep.minimizer = rep.starts[best].v;
  rep.residual_min = eval.value(rep.minimizer);
  rep.raw_residual = ResidualEvaluator(w).value(rep.minimizer);

  if (rep.residual_min < options.tol_eigenflag)
    rep.verdict = EigenflagVerdict::eigenflag_within_tol;
  else if (rep.residual_min > options.tol_not_eigenflag)
    rep.verdict = EigenflagVerdict::not_eigenflag;
  else
    rep.verdict = EigenflagVerdict::inconclusive;
  return rep;
}

PositivityCertificate certify_positive_minimum(const WeylOperator &w, int resolution) {
  if (w.n() != 4)
    throw std::invalid_argument("grid certification is implemented for n = 4 only");
  if (resolution < 1)
    throw std::invalid_argument("grid resolution must be positive");
  const double norm = w.norm();
  if (norm < 1e-12)
    throw std::invalid_argument("cannot certify the zero operator");
  const ResidualEvaluator eval(WeylOperator::trusted(w.op() * (1.0 / norm)));

  PositivityCertificate cert;
  cert.resolution = resolution;
  const int m = resolution;
  const double h = 2.0 / m;
  // |grad E| <= |W M| + 4 |U| |M| <= 5 sigma^2 for unit v.
  const double sigma = eval.sigma_max();
  cert.lipschitz = 5.0 * sigma * sigma;
  // A facet point is within h sqrt(3)/2 of a node; radial projection from
  // outside the ball is 1-Lipschitz and arc <= (pi/2) chord.
  cert.delta = 0.5 * std::numbers::pi * h * std::sqrt(3.0) / 2.0;

  const int slices = 4 * (m + 1);
  const auto mins = parallel_map<double>(static_cast<std::size_t>(slices), [&](std::size_t s) {
    const int facet = static_cast<int>(s) / (m + 1);
    const int i0 = static_cast<int>(s) % (m + 1);
    double best = std::numeric_limits<double>::infinity();
    Eigen::VectorXd x(4);
    for (int i1 = 0; i1 <= m; ++i1)
      for (int i2 = 0; i2 <= m; ++i2) {
        const double c[3] = {-1.0 + h * i0, -1.0 + h * i1, -1.0 + h * i2};
        int q = 0;
        for (int k = 0; k < 4; ++k)
          x(k) = (k == facet) ? 1.0 : c[q++];
        best = std::min(best, eval.value(x.normalized()));
      }
    return best;
  });
  cert.evaluations = static_cast<std::size_t>(slices) * static_cast<std::size_t>((m + 1) * (m + 1));
  cert.grid_min = *std::min_element(mins.begin(), mins.end());
  cert.lower_bound = cert.grid_min - cert.lipschitz * cert.delta;
  cert.certified = cert.lower_bound > 0.0;
  return cert;
}

std::int64_t codim_eigenflag(int n) {
  if (n < 4)
    throw std::invalid_argument("codim_eigenflag needs n >= 4");
  const std::int64_t k = n;
  const std::int64_t num = k * k * k - 3 * k * k - 4 * k + 6;
  return num / 3;
}

WeylOperator construct_stratum4(double a, double b, double c, const Eigen::MatrixXd &frame) {
  if (frame.rows() != 4 || frame.cols() != 4)
    throw std::invalid_argument("construct_stratum4 needs a 4 x 4 frame");
  if ((frame.transpose() * frame - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("frame is not orthogonal");
  if (std::abs(a + b + c) > 1e-12 * std::max(1.0, std::abs(a) + std::abs(b) + std::abs(c)))
    throw std::invalid_argument("eigenvalues must sum to zero");
  const struct {
    int i, j;
    double lambda;
  } terms[] = {{0, 1, a}, {2, 3, a}, {0, 2, b}, {3, 1, b}, {0, 3, c}, {1, 2, c}};
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(6, 6);
  for (const auto &t : terms) {
    const Eigen::VectorXd beta = wedge(frame.col(t.i), frame.col(t.j));
    m += t.lambda * beta * beta.transpose();
  }
  return WeylOperator(CurvatureOperator(4, 0.5 * (m + m.transpose())), 1e-10);
}

Weyl4Pattern classify_weyl4_spectrum(const WeylOperator &w, double tol) {
  if (w.n() != 4)
    throw std::invalid_argument("spectrum classification is for n = 4");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w.matrix(), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = es.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  if (scale < 1e-12)
    return Weyl4Pattern::zero;
  std::vector<std::pair<double, int>> clusters;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (!clusters.empty() && ev(k) - clusters.back().first / clusters.back().second <= tol * scale) {
      clusters.back().first += ev(k);
      ++clusters.back().second;
    } else {
      clusters.emplace_back(ev(k), 1);
    }
  }
  if (clusters.size() == 3 &&
      std::all_of(clusters.begin(), clusters.end(), [](auto &c) { return c.second == 2; }))
    return Weyl4Pattern::three_pairs;
  if (clusters.size() == 2) {
    const auto &p = clusters[0].second == 2 ? clusters[0] : clusters[1];
    const auto &q = clusters[0].second == 2 ? clusters[1] : clusters[0];
    if (p.second == 2 && q.second == 4) {
      const double lambda = p.first / 2.0, mu = q.first / 4.0;
      if (std::abs(mu + 0.5 * lambda) <= tol * scale)
        return Weyl4Pattern::double_quadruple;
    }
  }
  return Weyl4Pattern::other;
}

} // namespace lcw
