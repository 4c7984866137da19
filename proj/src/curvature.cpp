#include "lcw/curvature.hpp"

#include <cmath>
#include <stdexcept>

namespace lcw {

namespace {

std::vector<Eigen::MatrixXd> slices(const MetricJets &mj) {
  const int n = mj.n;
  std::vector<Eigen::MatrixXd> dg(static_cast<std::size_t>(n), Eigen::MatrixXd(n, n));
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        dg[m](i, j) = mj.dg(m, i, j);
  return dg;
}

Eigen::MatrixXd inverse_spd(const Eigen::MatrixXd &g) {
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success)
    throw MetricEvaluationError("metric is singular or not positive definite");
  return llt.solve(Eigen::MatrixXd::Identity(g.rows(), g.cols()));
}

} // namespace

Eigen::MatrixXd orthonormal_frame(const Eigen::MatrixXd &g) {
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success)
    throw MetricEvaluationError("metric is singular or not positive definite");
  Eigen::MatrixXd L = llt.matrixL();
  // F^T g F = L^{-1} L L^T L^{-T} = I, and det F > 0 keeps the orientation.
  return L.transpose().triangularView<Eigen::Upper>().solve(
      Eigen::MatrixXd::Identity(g.rows(), g.cols()));
}

ChristoffelJets christoffel(const MetricJets &mj) {
  const int n = mj.n;
  const Eigen::MatrixXd ginv = inverse_spd(mj.g);
  const auto dg = slices(mj);

  std::vector<Eigen::MatrixXd> dginv(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m)
    dginv[m] = -ginv * dg[m] * ginv;
  std::vector<Eigen::MatrixXd> d2ginv(static_cast<std::size_t>(n * n));
  for (int m = 0; m < n; ++m)
    for (int p = 0; p < n; ++p) {
      Eigen::MatrixXd d2(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          d2(i, j) = mj.d2g(m, p, i, j);
      d2ginv[m * n + p] = -ginv * d2 * ginv + ginv * dg[m] * ginv * dg[p] * ginv +
                          ginv * dg[p] * ginv * dg[m] * ginv;
    }

  // Christoffel symbols of the first kind, Gamma_{l,ij}, and derivatives.
  Tensor3 first(n);
  Tensor4 dfirst(n);  // [m][l][i][j]
  Tensor5 d2first(n); // [m][p][l][i][j]
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        first(l, i, j) = 0.5 * (mj.dg(i, j, l) + mj.dg(j, i, l) - mj.dg(l, i, j));
        for (int m = 0; m < n; ++m) {
          dfirst(m, l, i, j) =
              0.5 * (mj.d2g(m, i, j, l) + mj.d2g(m, j, i, l) - mj.d2g(m, l, i, j));
          for (int p = 0; p < n; ++p)
            d2first(m, p, l, i, j) = 0.5 * (mj.d3g(m, p, i, j, l) + mj.d3g(m, p, j, i, l) -
                                            mj.d3g(m, p, l, i, j));
        }
      }

  ChristoffelJets ch{Tensor3(n), Tensor4(n), Tensor5(n)};
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double g0 = 0.0;
        for (int l = 0; l < n; ++l)
          g0 += ginv(k, l) * first(l, i, j);
        ch.gamma(k, i, j) = g0;
        for (int m = 0; m < n; ++m) {
          double g1 = 0.0;
          for (int l = 0; l < n; ++l)
            g1 += dginv[m](k, l) * first(l, i, j) + ginv(k, l) * dfirst(m, l, i, j);
          ch.dgamma(m, k, i, j) = g1;
          for (int p = 0; p < n; ++p) {
            double g2 = 0.0;
            for (int l = 0; l < n; ++l)
              g2 += d2ginv[m * n + p](k, l) * first(l, i, j) +
                    dginv[m](k, l) * dfirst(p, l, i, j) +
                    dginv[p](k, l) * dfirst(m, l, i, j) + ginv(k, l) * d2first(m, p, l, i, j);
            ch.d2gamma(m, p, k, i, j) = g2;
          }
        }
      }
  return ch;
}

namespace {

// Rm^l_{dab}: components of R(d_a, d_b) d_d along d_l, stored [l][d][a][b].
Tensor4 curvature_endomorphism(const ChristoffelJets &ch) {
  const int n = ch.gamma.dim();
  Tensor4 rm(n);
  for (int l = 0; l < n; ++l)
    for (int d = 0; d < n; ++d)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          double v = ch.dgamma(a, l, b, d) - ch.dgamma(b, l, a, d);
          for (int q = 0; q < n; ++q)
            v += ch.gamma(l, a, q) * ch.gamma(q, b, d) - ch.gamma(l, b, q) * ch.gamma(q, a, d);
          rm(l, d, a, b) = v;
        }
  return rm;
}

} // namespace

Tensor4 riemann(const ChristoffelJets &ch, const MetricJets &mj) {
  const int n = mj.n;
  const Tensor4 rm = curvature_endomorphism(ch);
  Tensor4 R(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double v = 0.0;
          for (int l = 0; l < n; ++l)
            v += mj.g(c, l) * rm(l, d, a, b);
          R(a, b, c, d) = v;
        }
  return R;
}

Tensor5 riemann_gradient(const ChristoffelJets &ch, const MetricJets &mj) {
  const int n = mj.n;
  const Tensor4 rm = curvature_endomorphism(ch);
  Tensor5 drm(n); // [m][l][d][a][b]
  for (int m = 0; m < n; ++m)
    for (int l = 0; l < n; ++l)
      for (int d = 0; d < n; ++d)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            double v = ch.d2gamma(m, a, l, b, d) - ch.d2gamma(m, b, l, a, d);
            for (int q = 0; q < n; ++q)
              v += ch.dgamma(m, l, a, q) * ch.gamma(q, b, d) +
                   ch.gamma(l, a, q) * ch.dgamma(m, q, b, d) -
                   ch.dgamma(m, l, b, q) * ch.gamma(q, a, d) -
                   ch.gamma(l, b, q) * ch.dgamma(m, q, a, d);
            drm(m, l, d, a, b) = v;
          }
  Tensor5 dR(n);
  for (int m = 0; m < n; ++m)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            double v = 0.0;
            for (int l = 0; l < n; ++l)
              v += mj.dg(m, c, l) * rm(l, d, a, b) + mj.g(c, l) * drm(m, l, d, a, b);
            dR(m, a, b, c, d) = v;
          }
  return dR;
}

RicciScalar ricci_scalar(const Tensor4 &R, const Eigen::MatrixXd &g) {
  const int n = R.dim();
  const Eigen::MatrixXd ginv = inverse_spd(g);
  RicciScalar out{Eigen::MatrixXd::Zero(n, n), 0.0};
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d) {
      double v = 0.0;
      for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c)
          v += ginv(a, c) * R(b, a, d, c);
      out.ricci(b, d) = v;
    }
  out.scalar = (ginv.array() * out.ricci.array()).sum();
  return out;
}

Eigen::MatrixXd schouten(const Eigen::MatrixXd &ricci, double scalar, const Eigen::MatrixXd &g) {
  const double n = static_cast<double>(g.rows());
  if (g.rows() < 3)
    throw std::invalid_argument("schouten: dimension must be at least 3");
  return (ricci - scalar / (2.0 * (n - 1.0)) * g) / (n - 2.0);
}

Tensor4 kulkarni_nomizu(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b) {
  const int n = static_cast<int>(a.rows());
  Tensor4 out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          out(i, j, k, l) = a(i, k) * b(j, l) + a(j, l) * b(i, k) - a(i, l) * b(j, k) -
                            a(j, k) * b(i, l);
  return out;
}

Tensor4 weyl_tensor(const Tensor4 &R, const Eigen::MatrixXd &S, const Eigen::MatrixXd &g) {
  return R - kulkarni_nomizu(S, g);
}

Tensor3 cotton(const Eigen::MatrixXd &S, const Tensor3 &dS, const Tensor3 &gamma) {
  const int n = static_cast<int>(S.rows());
  Tensor3 nabla(n); // (nabla_a S)_bc
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        double v = dS(a, b, c);
        for (int k = 0; k < n; ++k)
          v -= gamma(k, a, b) * S(k, c) + gamma(k, a, c) * S(b, k);
        nabla(a, b, c) = v;
      }
  Tensor3 C(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        C(i, j, k) = nabla(i, j, k) - nabla(j, i, k);
  return C;
}

Eigen::MatrixXd cotton_york(const Tensor3 &C, const Eigen::MatrixXd &g, int orientation) {
  if (C.dim() != 3 || g.rows() != 3)
    throw std::invalid_argument("cotton_york: only defined in dimension 3");
  if (orientation != 1 && orientation != -1)
    throw std::invalid_argument("cotton_york: orientation must be +1 or -1");
  auto eps = [](int k, int l, int m) -> double {
    if (k == l || l == m || k == m)
      return 0.0;
    // even permutations of (0,1,2)
    return ((l - k + 3) % 3 == 1) ? 1.0 : -1.0;
  };
  const double vol = std::sqrt(g.determinant());
  Eigen::MatrixXd cy = Eigen::MatrixXd::Zero(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double v = 0.0;
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          for (int m = 0; m < 3; ++m) {
            double e = eps(k, l, m);
            if (e != 0.0)
              v += C(k, l, i) * g(j, m) * e;
          }
      cy(i, j) = 0.5 * v / vol;
    }
  return static_cast<double>(orientation) * cy;
}

CurvaturePackage compute_curvature(const MetricJets &mj, int orientation) {
  const int n = mj.n;
  CurvaturePackage pkg;
  pkg.n = n;
  pkg.point = mj.point;
  pkg.metric = mj.g;
  pkg.orientation = orientation;
  pkg.frame = orthonormal_frame(mj.g);

  const ChristoffelJets ch = christoffel(mj);
  const Tensor4 R = riemann(ch, mj);
  const Tensor5 dR = riemann_gradient(ch, mj);
  const RicciScalar rs = ricci_scalar(R, mj.g);
  const Eigen::MatrixXd S = schouten(rs.ricci, rs.scalar, mj.g);

  const Eigen::MatrixXd ginv = inverse_spd(mj.g);
  const auto dg = slices(mj);
  Tensor3 dS(n);
  for (int m = 0; m < n; ++m) {
    const Eigen::MatrixXd dginv = -ginv * dg[m] * ginv;
    Eigen::MatrixXd dric(n, n);
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d) {
        double v = 0.0;
        for (int a = 0; a < n; ++a)
          for (int c = 0; c < n; ++c)
            v += dginv(a, c) * R(b, a, d, c) + ginv(a, c) * dR(m, b, a, d, c);
        dric(b, d) = v;
      }
    const double ds = (dginv.array() * rs.ricci.array()).sum() + (ginv.array() * dric.array()).sum();
    const double nn = static_cast<double>(n);
    const Eigen::MatrixXd dSm =
        (dric - (ds * mj.g + rs.scalar * dg[m]) / (2.0 * (nn - 1.0))) / (nn - 2.0);
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        dS(m, b, c) = dSm(b, c);
  }

  Tensor3 nablaS(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        double v = dS(a, b, c);
        for (int k = 0; k < n; ++k)
          v -= ch.gamma(k, a, b) * S(k, c) + ch.gamma(k, a, c) * S(b, k);
        nablaS(a, b, c) = v;
      }
  const Tensor3 C = cotton(S, dS, ch.gamma);

  const Eigen::MatrixXd &F = pkg.frame;
  pkg.christoffel = ch.gamma;
  pkg.dchristoffel = ch.dgamma;
  pkg.riemann = change_frame(R, F);
  pkg.ricci = F.transpose() * rs.ricci * F;
  pkg.scalar = rs.scalar;
  pkg.schouten = F.transpose() * S * F;
  pkg.schouten_gradient = change_frame(nablaS, F);
  pkg.cotton = change_frame(C, F);
  pkg.cotton_coordinates = C;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  // W vanishes identically for n = 3; the subtraction only leaves rounding.
  pkg.weyl = n == 3 ? Tensor4(n) : weyl_tensor(pkg.riemann, pkg.schouten, id);
  if (n == 3) {
    const Eigen::MatrixXd cy = cotton_york(C, mj.g, orientation);
    pkg.cotton_york = Eigen::Matrix3d(F.transpose() * cy * F);
  }
  return pkg;
}

CurvaturePackage compute_curvature(const MetricSpec &spec, std::span<const double> point,
                                   int orientation) {
  return compute_curvature(metric_jets(spec, point), orientation);
}

CurvaturePackage rotate_frame(const CurvaturePackage &pkg, const Eigen::MatrixXd &Q) {
  CurvaturePackage out = pkg;
  out.frame = pkg.frame * Q;
  out.riemann = change_frame(pkg.riemann, Q);
  out.ricci = Q.transpose() * pkg.ricci * Q;
  out.schouten = Q.transpose() * pkg.schouten * Q;
  out.schouten_gradient = change_frame(pkg.schouten_gradient, Q);
  out.cotton = change_frame(pkg.cotton, Q);
  out.weyl = change_frame(pkg.weyl, Q);
  if (pkg.cotton_york) {
    // The Hodge star flips sign with an orientation-reversing frame change.
    const double sign = Q.determinant() > 0 ? 1.0 : -1.0;
    out.cotton_york = Eigen::Matrix3d(sign * (Q.transpose() * (*pkg.cotton_york) * Q));
  }
  return out;
}

double IdentityCheck::worst() const {
  return std::max({riemann_antisymmetry, riemann_pair_symmetry, first_bianchi,
                   cotton_antisymmetry, cotton_cyclic, cotton_trace_ij, cotton_trace_ik,
                   weyl_ricci_contraction, weyl_bianchi, schouten_ricci, decomposition,
                   cotton_york_symmetry, cotton_york_trace});
}

IdentityCheck check_identities(const CurvaturePackage &pkg) {
  const int n = pkg.n;
  const Tensor4 &R = pkg.riemann;
  const Tensor4 &W = pkg.weyl;
  const Tensor3 &C = pkg.cotton;
  const double nR = R.norm(), nC = C.norm();
  IdentityCheck out;
  double anti = 0, pair = 0, bian = 0, wb = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          anti = std::max({anti, std::abs(R(i, j, k, l) + R(j, i, k, l)),
                           std::abs(R(i, j, k, l) + R(i, j, l, k))});
          pair = std::max(pair, std::abs(R(i, j, k, l) - R(k, l, i, j)));
          bian = std::max(bian, std::abs(R(i, j, k, l) + R(j, k, i, l) + R(k, i, j, l)));
          wb = std::max(wb, std::abs(W(i, j, k, l) + W(j, k, i, l) + W(k, i, j, l)));
        }
  out.riemann_antisymmetry = relative(anti, nR);
  out.riemann_pair_symmetry = relative(pair, nR);
  out.first_bianchi = relative(bian, nR);
  out.weyl_bianchi = relative(wb, nR);

  double ca = 0, cc = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        ca = std::max(ca, std::abs(C(i, j, k) + C(j, i, k)));
        cc = std::max(cc, std::abs(C(i, j, k) + C(j, k, i) + C(k, i, j)));
      }
  double t1 = 0, t2 = 0;
  for (int k = 0; k < n; ++k) {
    double s1 = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
      s1 += C(i, i, k);
      s2 += C(i, k, i);
    }
    t1 = std::max(t1, std::abs(s1));
    t2 = std::max(t2, std::abs(s2));
  }
  out.cotton_antisymmetry = relative(ca, nC);
  out.cotton_cyclic = relative(cc, nC);
  out.cotton_trace_ij = relative(t1, nC);
  out.cotton_trace_ik = relative(t2, nC);

  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  double wr = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double s = 0;
      for (int i = 0; i < n; ++i)
        s += W(a, i, b, i);
      wr = std::max(wr, std::abs(s));
    }
  out.weyl_ricci_contraction = relative(wr, nR);

  const Tensor4 sg = kulkarni_nomizu(pkg.schouten, id);
  const RicciScalar rsg = ricci_scalar(sg, id);
  out.schouten_ricci = relative((rsg.ricci - pkg.ricci).cwiseAbs().maxCoeff(), pkg.ricci.norm());
  out.decomposition = relative((R - (W + sg)).max_abs(), nR);

  if (pkg.cotton_york) {
    const Eigen::Matrix3d &cy = *pkg.cotton_york;
    const double ncy = cy.norm();
    out.cotton_york_symmetry = relative((cy - cy.transpose()).cwiseAbs().maxCoeff(), ncy);
    out.cotton_york_trace = relative(std::abs(cy.trace()), ncy);
  }
  return out;
}

} // namespace lcw
