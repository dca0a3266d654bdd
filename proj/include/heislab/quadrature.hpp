#ifndef HEISLAB_QUADRATURE_HPP
#define HEISLAB_QUADRATURE_HPP

#include <heislab/common.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <vector>

namespace heislab {

/// Gauss-Jacobi nodes and weights on [-1, 1] for the weight (1-x)^a (1+x)^b,
/// by the Golub-Welsch eigenvalue method.
inline void gauss_jacobi(int m, double a, double b, std::vector<double>& nodes, std::vector<double>& weights) {
  require(m >= 1, "gauss_jacobi: need at least one node");
  require(a > -1.0 && b > -1.0, "gauss_jacobi: exponents must exceed -1");
  Mat jac = Mat::Zero(m, m);
  for (int k = 0; k < m; ++k) {
    const double s = 2.0 * k + a + b;
    jac(k, k) = (k == 0) ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    if (k + 1 < m) {
      const double kk = k + 1.0;
      const double s1 = 2.0 * kk + a + b;
      const double beta = 4.0 * kk * (kk + a) * (kk + b) * (kk + a + b) / (s1 * s1 * (s1 + 1.0) * (s1 - 1.0));
      jac(k, k + 1) = jac(k + 1, k) = std::sqrt(beta);
    }
  }
  const double mu0 =
      std::exp((a + b + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) - std::lgamma(a + b + 2.0));
  Eigen::SelfAdjointEigenSolver<Mat> eig(jac);
  nodes.resize(m);
  weights.resize(m);
  for (int i = 0; i < m; ++i) {
    nodes[i] = eig.eigenvalues()[i];
    const double v0 = eig.eigenvectors()(0, i);
    weights[i] = mu0 * v0 * v0;
  }
}

inline void gauss_legendre(int m, std::vector<double>& nodes, std::vector<double>& weights) {
  gauss_jacobi(m, 0.0, 0.0, nodes, weights);
}

/// Rule on the reference k-simplex {lambda_i >= 0, sum lambda_i = 1}.
/// Each column of `nodes` holds the k+1 barycentric coordinates of a node;
/// weights are positive and sum to the reference volume 1/k!.
struct QuadratureRule {
  int dim = 0;
  int order = 0;
  Mat nodes;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
};

/// Collapsed (conical product) Gauss-Jacobi rule, exact for polynomials of
/// total degree <= order on the k-simplex.
inline QuadratureRule simplex_rule(int k, int order = 4) {
  require(k >= 1 && k <= 4, "simplex_rule: dimension must be 1..4");
  require(order >= 0, "simplex_rule: order must be nonnegative");
  const int m = order / 2 + 1;
  // Direction i carries weight (1-u)^{k-1-i} on [0,1].
  std::vector<std::vector<double>> u(k), w(k);
  for (int i = 0; i < k; ++i) {
    const double a = k - 1 - i;
    std::vector<double> x, wx;
    gauss_jacobi(m, a, 0.0, x, wx);
    for (int j = 0; j < m; ++j) {
      u[i].push_back(0.5 * (x[j] + 1.0));
      w[i].push_back(wx[j] * std::pow(2.0, -a - 1.0));
    }
  }
  std::size_t total = 1;
  for (int i = 0; i < k; ++i) total *= m;
  QuadratureRule rule;
  rule.dim = k;
  rule.order = order;
  rule.nodes.resize(k + 1, static_cast<Eigen::Index>(total));
  rule.weights.resize(total);
  std::vector<int> digit(k, 0);
  for (std::size_t q = 0; q < total; ++q) {
    double remaining = 1.0;
    double weight = 1.0;
    for (int i = 0; i < k; ++i) {
      const double ui = u[i][digit[i]];
      rule.nodes(i + 1, static_cast<Eigen::Index>(q)) = remaining * ui;
      weight *= w[i][digit[i]];
      remaining *= 1.0 - ui;
    }
    rule.nodes(0, static_cast<Eigen::Index>(q)) = remaining;
    rule.weights[q] = weight;
    for (int i = k - 1; i >= 0; --i) {
      if (++digit[i] < m) break;
      digit[i] = 0;
    }
  }
  return rule;
}

}  // namespace heislab

#endif  // HEISLAB_QUADRATURE_HPP
