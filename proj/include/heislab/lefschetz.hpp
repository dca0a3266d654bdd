#ifndef HEISLAB_LEFSCHETZ_HPP
#define HEISLAB_LEFSCHETZ_HPP

#include <heislab/forms.hpp>

namespace heislab {

/// alpha = dt + 2 sum_j (y_j dx_j - x_j dy_j) on R^{2n+1}.
inline DifferentialForm contact_form(int n) {
  require(n >= 1, "contact_form: n must be positive");
  const int dim = 2 * n + 1;
  DifferentialForm a(dim, 1);
  a.add_term({2 * n}, ScalarField::constant(dim, 1.0));
  for (int j = 0; j < n; ++j) {
    a.add_term({2 * j}, ScalarField(2.0 * Polynomial::variable(dim, 2 * j + 1)));
    a.add_term({2 * j + 1}, ScalarField(-2.0 * Polynomial::variable(dim, 2 * j)));
  }
  return a;
}

/// d(alpha) = 4 sum_j dy_j ^ dx_j.
inline DifferentialForm contact_form_d(int n) { return exterior_d(contact_form(n)); }

struct LefschetzDecomposition {
  DifferentialForm beta;   // degree k-1
  DifferentialForm sigma;  // degree k-2
};

namespace detail {

/// Right inverse of sigma -> d(alpha) ^ sigma between constant horizontal forms
/// of degree k-2 and k on R^{2n}. Rows index the k-subsets, columns the
/// (k-2)-subsets, both in lexicographic order.
inline Mat lefschetz_right_inverse(int n, int k, std::vector<IndexSet>& rows, std::vector<IndexSet>& cols) {
  rows = subsets(2 * n, k);
  cols = subsets(2 * n, k - 2);
  Mat l = Mat::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  std::map<IndexSet, Eigen::Index> row_of;
  for (std::size_t r = 0; r < rows.size(); ++r) row_of[rows[r]] = static_cast<Eigen::Index>(r);
  IndexSet merged;
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (int j = 0; j < n; ++j) {
      const int sign = merge_sign({2 * j, 2 * j + 1}, cols[c], merged);
      if (sign == 0) continue;
      l(row_of.at(merged), static_cast<Eigen::Index>(c)) += -4.0 * sign;
    }
  if (rows.empty()) return Mat::Zero(static_cast<Eigen::Index>(cols.size()), 0);
  const Mat gram = l * l.transpose();
  Mat r = l.transpose() * gram.ldlt().solve(Mat::Identity(gram.rows(), gram.cols()));
  // Entries are rationals with small denominators; drop round-off on zeros.
  for (Eigen::Index i = 0; i < r.size(); ++i)
    if (std::abs(r.data()[i]) < 1e-14) r.data()[i] = 0.0;
  return r;
}

}  // namespace detail

/// Writes a k-form kappa on R^{2n+1}, k >= n+1, as alpha ^ beta + d(alpha) ^ sigma.
///
/// Terms containing dt are absorbed into beta; the remainder is horizontal and
/// is divided by d(alpha) through a fixed right inverse of the Lefschetz map.
/// For n = 1 this reproduces the explicit three-dimensional table, e.g.
/// dy^dt = alpha ^ (-dy) + d(alpha) ^ (-y/2).
inline LefschetzDecomposition lefschetz_decompose(const DifferentialForm& kappa, int n) {
  require(n >= 1, "lefschetz_decompose: n must be positive");
  const int dim = 2 * n + 1;
  const int k = kappa.degree();
  require(kappa.dim() == dim, "lefschetz_decompose: form must live on R^{2n+1}");
  require(k >= n + 1, "lefschetz_decompose: degree must be at least n+1");
  require(k <= dim, "lefschetz_decompose: degree exceeds dimension");

  // kappa = dt ^ A + B with A, B free of dt.
  DifferentialForm a_part(dim, k - 1);
  DifferentialForm b_part(dim, k);
  const int t = 2 * n;
  for (const auto& [idx, f] : kappa.terms()) {
    if (idx.back() == t) {
      IndexSet rest(idx.begin(), idx.end() - 1);
      a_part.add_term(rest, (k - 1) % 2 == 0 ? f : -f);
    } else {
      b_part.add_term(idx, f);
    }
  }
  // alpha ^ A = dt ^ A + theta ^ A, so the horizontal remainder is B - theta ^ A.
  DifferentialForm theta(dim, 1);
  for (int j = 0; j < n; ++j) {
    theta.add_term({2 * j}, ScalarField(2.0 * Polynomial::variable(dim, 2 * j + 1)));
    theta.add_term({2 * j + 1}, ScalarField(-2.0 * Polynomial::variable(dim, 2 * j)));
  }
  const DifferentialForm remainder = b_part - wedge(theta, a_part);

  std::vector<IndexSet> rows, cols;
  const Mat r = detail::lefschetz_right_inverse(n, k, rows, cols);
  DifferentialForm sigma(dim, k - 2);
  for (std::size_t ri = 0; ri < rows.size(); ++ri) {
    auto it = remainder.terms().find(rows[ri]);
    if (it == remainder.terms().end()) continue;
    for (std::size_t ci = 0; ci < cols.size(); ++ci) {
      const double w = r(static_cast<Eigen::Index>(ci), static_cast<Eigen::Index>(ri));
      if (w != 0.0) sigma.add_term(cols[ci], w * it->second);
    }
  }
  return {std::move(a_part), std::move(sigma)};
}

/// alpha ^ beta + d(alpha) ^ sigma.
inline DifferentialForm lefschetz_reconstruct(const LefschetzDecomposition& d, int n) {
  return wedge(contact_form(n), d.beta) + wedge(contact_form_d(n), d.sigma);
}

}  // namespace heislab

#endif  // HEISLAB_LEFSCHETZ_HPP
