#pragma once

#include "lcw/metric.hpp"
#include "lcw/tensor.hpp"

#include <Eigen/Dense>

#include <functional>
#include <random>
#include <string>
#include <vector>

namespace lcw::testing {

using Rng = std::mt19937_64;

std::vector<std::string> names(int n, int first = 1);

MetricSpec euclidean(int n);
/// 4 / (1 + |x|^2)^2 delta_ij, the unit round sphere.
MetricSpec sphere_chart(int n);
/// delta_ij + sparse random polynomial entries of degree <= 3.
MetricSpec random_polynomial_metric(int n, Rng &rng, double amplitude = 0.12);
/// exp(2 f) delta_ij with f a random cubic.
MetricSpec conformally_flat(int n, Rng &rng);
/// exp(2 f) times the given base metric, with f given as text.
MetricSpec conformal_rescale(const MetricSpec &base, const std::string &f);
/// dx0^2 + h(x1, .., x_{n-1}) with h random and analytic.
MetricSpec random_product_metric(int n, Rng &rng);

std::vector<double> random_point(int n, Rng &rng, double radius = 0.5);
Eigen::MatrixXd random_orthogonal(int n, Rng &rng);

/// Finite-difference curvature: five-point stencils nested through g, Gamma,
/// R and S. All tensors are in coordinates.
struct FdCurvature {
  Tensor3 gamma;
  Tensor4 riemann;
  Eigen::MatrixXd ricci;
  Eigen::MatrixXd schouten;
  Tensor3 cotton;
};

FdCurvature fd_curvature(const MetricSpec &spec, const std::vector<double> &x);

/// Five-point central difference of f along coordinate k.
Eigen::VectorXd fd_derivative(const std::function<Eigen::VectorXd(const std::vector<double> &)> &f,
                              const std::vector<double> &x, int k, double h);

double rel_diff(double a, double b);
double max_rel_diff(const std::vector<double> &a, const std::vector<double> &b, double scale);

} // namespace lcw::testing
