#ifndef HEISLAB_FORMS_HPP
#define HEISLAB_FORMS_HPP

// Exterior calculus on R^N with polynomial (exact) or callable coefficients.

#include <heislab/common.hpp>
#include <heislab/polynomial.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <variant>
#include <vector>

namespace heislab {

/// Default central-difference step for callable coefficients and maps.
inline constexpr double kDefaultFdStep = 1e-5;

// ---------------------------------------------------------------------------
// ScalarField

class ScalarField {
 public:
  using ValueFn = std::function<double(const Vec&)>;
  using GradFn = std::function<Vec(const Vec&)>;
  using HessFn = std::function<Mat(const Vec&)>;

  ScalarField() : ScalarField(Polynomial(0)) {}
  ScalarField(Polynomial p) : dim_(p.vars()), data_(std::move(p)) {}  // NOLINT: implicit by design of the algebra

  static ScalarField constant(int dim, double c) { return ScalarField(Polynomial::constant(dim, c)); }

  /// A coefficient given by a procedure. Missing derivatives are produced by
  /// central differences with step `fd_step`.
  static ScalarField callable(int dim, ValueFn value, GradFn gradient = {}, HessFn hessian = {},
                              double fd_step = kDefaultFdStep) {
    require(dim >= 0, "ScalarField: negative dimension");
    require(static_cast<bool>(value), "ScalarField: empty value procedure");
    require(fd_step > 0.0, "ScalarField: finite-difference step must be positive");
    ScalarField f;
    f.dim_ = dim;
    f.data_ = std::make_shared<const Callable>(Callable{std::move(value), std::move(gradient), std::move(hessian), fd_step});
    return f;
  }

  int dim() const { return dim_; }
  bool is_polynomial() const { return std::holds_alternative<Polynomial>(data_); }
  const Polynomial& polynomial() const {
    require(is_polynomial(), "ScalarField: coefficient is not polynomial");
    return std::get<Polynomial>(data_);
  }
  /// Only polynomial fields can be recognised as identically zero.
  bool is_zero() const { return is_polynomial() && polynomial().is_zero(); }
  bool has_exact_gradient() const { return is_polynomial() || static_cast<bool>(callable_data().gradient); }
  bool has_exact_hessian() const { return is_polynomial() || static_cast<bool>(callable_data().hessian); }
  double fd_step() const { return is_polynomial() ? kDefaultFdStep : callable_data().fd_step; }

  double operator()(const Vec& x) const {
    require(x.size() == dim_, "ScalarField: evaluation point has wrong dimension");
    if (is_polynomial()) return polynomial()(x);
    return callable_data().value(x);
  }

  Vec gradient(const Vec& x) const {
    if (is_polynomial()) {
      Vec g(dim_);
      for (int i = 0; i < dim_; ++i) g[i] = polynomial().partial(i)(x);
      return g;
    }
    const auto& c = callable_data();
    if (c.gradient) return c.gradient(x);
    Vec g(dim_);
    Vec xp = x, xm = x;
    for (int i = 0; i < dim_; ++i) {
      xp[i] = x[i] + c.fd_step;
      xm[i] = x[i] - c.fd_step;
      g[i] = (c.value(xp) - c.value(xm)) / (2.0 * c.fd_step);
      xp[i] = xm[i] = x[i];
    }
    return g;
  }

  Mat hessian(const Vec& x) const {
    Mat h(dim_, dim_);
    if (is_polynomial()) {
      for (int i = 0; i < dim_; ++i) {
        const Polynomial pi = polynomial().partial(i);
        for (int j = 0; j < dim_; ++j) h(i, j) = pi.partial(j)(x);
      }
      return h;
    }
    const auto& c = callable_data();
    if (c.hessian) return c.hessian(x);
    Vec xp = x, xm = x;
    for (int j = 0; j < dim_; ++j) {
      xp[j] = x[j] + c.fd_step;
      xm[j] = x[j] - c.fd_step;
      h.col(j) = (gradient(xp) - gradient(xm)) / (2.0 * c.fd_step);
      xp[j] = xm[j] = x[j];
    }
    return h;
  }

  ScalarField partial(int i) const {
    require(i >= 0 && i < dim_, "ScalarField::partial: index out of range");
    if (is_polynomial()) return ScalarField(polynomial().partial(i));
    const auto self = *this;
    const auto& c = callable_data();
    GradFn grad;
    if (c.gradient && c.hessian) {
      auto hess = c.hessian;
      grad = [hess, i](const Vec& x) -> Vec { return hess(x).row(i).transpose(); };
    }
    return callable(dim_, [self, i](const Vec& x) { return self.gradient(x)[i]; }, std::move(grad), {}, c.fd_step);
  }

  ScalarField compose_affine_free(const std::function<Vec(const Vec&)>&) const = delete;

  friend ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    require(a.dim_ == b.dim_, "ScalarField: dimension mismatch");
    if (a.is_polynomial() && b.is_polynomial()) return ScalarField(a.polynomial() + b.polynomial());
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    HessFn hess;
    if (a.has_exact_hessian() && b.has_exact_hessian())
      hess = [a, b](const Vec& x) -> Mat { return a.hessian(x) + b.hessian(x); };
    return callable(
        a.dim_, [a, b](const Vec& x) { return a(x) + b(x); },
        [a, b](const Vec& x) -> Vec { return a.gradient(x) + b.gradient(x); }, std::move(hess),
        std::min(a.fd_step(), b.fd_step()));
  }

  friend ScalarField operator*(double s, const ScalarField& a) {
    if (a.is_polynomial()) return ScalarField(a.polynomial() * s);
    if (s == 0.0) return ScalarField(Polynomial(a.dim_));
    HessFn hess;
    if (a.has_exact_hessian()) hess = [a, s](const Vec& x) -> Mat { return s * a.hessian(x); };
    return callable(
        a.dim_, [a, s](const Vec& x) { return s * a(x); }, [a, s](const Vec& x) -> Vec { return s * a.gradient(x); },
        std::move(hess), a.fd_step());
  }
  friend ScalarField operator-(const ScalarField& a) { return -1.0 * a; }
  friend ScalarField operator-(const ScalarField& a, const ScalarField& b) { return a + (-b); }

  friend ScalarField operator*(const ScalarField& a, const ScalarField& b) {
    require(a.dim_ == b.dim_, "ScalarField: dimension mismatch");
    if (a.is_polynomial() && b.is_polynomial()) return ScalarField(a.polynomial() * b.polynomial());
    if (a.is_zero() || b.is_zero()) return ScalarField(Polynomial(a.dim_));
    HessFn hess;
    if (a.has_exact_hessian() && b.has_exact_hessian())
      hess = [a, b](const Vec& x) -> Mat {
        const Vec ga = a.gradient(x), gb = b.gradient(x);
        return a(x) * b.hessian(x) + b(x) * a.hessian(x) + ga * gb.transpose() + gb * ga.transpose();
      };
    return callable(
        a.dim_, [a, b](const Vec& x) { return a(x) * b(x); },
        [a, b](const Vec& x) -> Vec { return a(x) * b.gradient(x) + b(x) * a.gradient(x); }, std::move(hess),
        std::min(a.fd_step(), b.fd_step()));
  }

 private:
  struct Callable {
    ValueFn value;
    GradFn gradient;
    HessFn hessian;
    double fd_step;
  };
  const Callable& callable_data() const {
    static const Callable none{};
    if (is_polynomial()) return none;
    return *std::get<std::shared_ptr<const Callable>>(data_);
  }

  int dim_ = 0;
  std::variant<Polynomial, std::shared_ptr<const Callable>> data_;
};

// ---------------------------------------------------------------------------
// Small combinatorial helpers.

using IndexSet = std::vector<int>;

namespace detail {

inline bool strictly_increasing(const IndexSet& s) {
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i - 1] >= s[i]) return false;
  return true;
}

/// Sign of the permutation sorting `a ++ b` (both strictly increasing), or 0
/// if they share an index. Writes the merged set to `out`.
inline int merge_sign(const IndexSet& a, const IndexSet& b, IndexSet& out) {
  out.clear();
  std::size_t i = 0, j = 0;
  long inversions = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i] < b[j])) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j] < a[i]) {
      inversions += static_cast<long>(a.size() - i);
      out.push_back(b[j++]);
    } else {
      return 0;
    }
  }
  return inversions % 2 == 0 ? 1 : -1;
}

/// All strictly increasing k-subsets of {0, ..., n-1} in lexicographic order.
inline std::vector<IndexSet> subsets(int n, int k) {
  std::vector<IndexSet> out;
  if (k < 0 || k > n) return out;
  IndexSet s(k);
  std::iota(s.begin(), s.end(), 0);
  for (;;) {
    out.push_back(s);
    int i = k - 1;
    while (i >= 0 && s[i] == n - k + i) --i;
    if (i < 0) break;
    ++s[i];
    for (int j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
  }
  return out;
}

/// Determinant by the Leibniz expansion for k <= 4, LU otherwise.
inline double small_det(const Mat& m) {
  const auto k = m.rows();
  switch (k) {
    case 0: return 1.0;
    case 1: return m(0, 0);
    case 2: return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    case 3:
      return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
             m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    default: return m.determinant();
  }
}

/// Leibniz determinant of a matrix of polynomials.
inline Polynomial poly_det(const std::vector<std::vector<const Polynomial*>>& m, int vars) {
  const int k = static_cast<int>(m.size());
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  Polynomial out(vars);
  do {
    int inv = 0;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        if (perm[i] > perm[j]) ++inv;
    Polynomial term = Polynomial::constant(vars, inv % 2 == 0 ? 1.0 : -1.0);
    for (int i = 0; i < k && !term.is_zero(); ++i) term = term * *m[i][perm[i]];
    out += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// DifferentialForm

class DifferentialForm {
 public:
  using Terms = std::map<IndexSet, ScalarField>;

  DifferentialForm(int dim = 0, int degree = 0) : dim_(dim), degree_(degree) {
    require(dim >= 0 && degree >= 0, "DifferentialForm: negative dimension or degree");
  }

  static DifferentialForm zero(int dim, int degree) { return DifferentialForm(dim, degree); }
  static DifferentialForm function(const ScalarField& f) {
    DifferentialForm w(f.dim(), 0);
    w.add_term({}, f);
    return w;
  }
  /// The constant form dx_I.
  static DifferentialForm basis(int dim, const IndexSet& indices) {
    DifferentialForm w(dim, static_cast<int>(indices.size()));
    w.add_term(indices, ScalarField::constant(dim, 1.0));
    return w;
  }
  /// f dx_I.
  static DifferentialForm term(const ScalarField& f, const IndexSet& indices) {
    DifferentialForm w(f.dim(), static_cast<int>(indices.size()));
    w.add_term(indices, f);
    return w;
  }

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  const Terms& terms() const { return terms_; }

  bool is_polynomial() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second.is_polynomial(); });
  }
  /// Structural zero: no terms left. Callable coefficients never cancel.
  bool is_zero() const { return terms_.empty(); }

  ScalarField coefficient(const IndexSet& indices) const {
    auto it = terms_.find(indices);
    return it == terms_.end() ? ScalarField(Polynomial(dim_)) : it->second;
  }

  void add_term(const IndexSet& indices, const ScalarField& f) {
    require(static_cast<int>(indices.size()) == degree_, "DifferentialForm: index set size differs from degree");
    require(detail::strictly_increasing(indices), "DifferentialForm: index set must be strictly increasing");
    require(indices.empty() || (indices.front() >= 0 && indices.back() < dim_),
            "DifferentialForm: index out of range");
    require(f.dim() == dim_, "DifferentialForm: coefficient dimension mismatch");
    if (f.is_zero()) return;
    auto it = terms_.find(indices);
    if (it == terms_.end()) {
      terms_.emplace(indices, f);
      return;
    }
    it->second = it->second + f;
    if (it->second.is_zero()) terms_.erase(it);
  }

  /// Coefficient values at x, keyed like terms().
  std::vector<std::pair<const IndexSet*, double>> values_at(const Vec& x) const {
    std::vector<std::pair<const IndexSet*, double>> out;
    out.reserve(terms_.size());
    for (const auto& [idx, f] : terms_) out.emplace_back(&idx, f(x));
    return out;
  }

  DifferentialForm& operator+=(const DifferentialForm& o) {
    require(o.dim_ == dim_ && o.degree_ == degree_, "DifferentialForm: shape mismatch in sum");
    for (const auto& [idx, f] : o.terms_) add_term(idx, f);
    return *this;
  }
  friend DifferentialForm operator+(DifferentialForm a, const DifferentialForm& b) { return a += b; }
  friend DifferentialForm operator*(const ScalarField& f, const DifferentialForm& a) {
    require(f.dim() == a.dim_, "DifferentialForm: coefficient dimension mismatch");
    DifferentialForm out(a.dim_, a.degree_);
    for (const auto& [idx, g] : a.terms_) out.add_term(idx, f * g);
    return out;
  }
  friend DifferentialForm operator*(double s, const DifferentialForm& a) {
    DifferentialForm out(a.dim_, a.degree_);
    for (const auto& [idx, g] : a.terms_) out.add_term(idx, s * g);
    return out;
  }
  friend DifferentialForm operator-(const DifferentialForm& a) { return -1.0 * a; }
  friend DifferentialForm operator-(const DifferentialForm& a, const DifferentialForm& b) { return a + (-b); }

  /// Exact equality of polynomial forms.
  friend bool operator==(const DifferentialForm& a, const DifferentialForm& b) {
    if (a.dim_ != b.dim_ || a.degree_ != b.degree_ || a.terms_.size() != b.terms_.size()) return false;
    for (auto ia = a.terms_.begin(), ib = b.terms_.begin(); ia != a.terms_.end(); ++ia, ++ib) {
      if (ia->first != ib->first) return false;
      if (!ia->second.is_polynomial() || !ib->second.is_polynomial()) return false;
      if (!(ia->second.polynomial() == ib->second.polynomial())) return false;
    }
    return true;
  }

 private:
  int dim_;
  int degree_;
  Terms terms_;
};

/// Alternating product. Degrees summing above the dimension give the zero form.
inline DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b) {
  require(a.dim() == b.dim(), "wedge: forms live on different spaces");
  DifferentialForm out(a.dim(), a.degree() + b.degree());
  if (a.degree() + b.degree() > a.dim()) return out;
  IndexSet merged;
  for (const auto& [ia, fa] : a.terms())
    for (const auto& [ib, fb] : b.terms()) {
      const int sign = detail::merge_sign(ia, ib, merged);
      if (sign == 0) continue;
      out.add_term(merged, sign > 0 ? fa * fb : -(fa * fb));
    }
  return out;
}

inline DifferentialForm exterior_d(const DifferentialForm& a) {
  DifferentialForm out(a.dim(), a.degree() + 1);
  if (a.degree() >= a.dim()) return out;
  IndexSet merged;
  for (const auto& [idx, f] : a.terms())
    for (int i = 0; i < a.dim(); ++i) {
      const int sign = detail::merge_sign({i}, idx, merged);
      if (sign == 0) continue;
      const ScalarField di = f.partial(i);
      out.add_term(merged, sign > 0 ? di : -di);
    }
  return out;
}

/// Alternating multilinear evaluation a_x(v_1, ..., v_k); columns of `vectors`
/// are the v_i. Swapping two vectors negates the result exactly.
inline double evaluate_form(const DifferentialForm& a, const Vec& x, const Mat& vectors) {
  require(x.size() == a.dim(), "evaluate_form: point has wrong dimension");
  require(vectors.cols() == a.degree(), "evaluate_form: number of vectors differs from degree");
  require(vectors.rows() == a.dim(), "evaluate_form: vectors have wrong dimension");
  const int k = a.degree();
  // Canonical column order makes the sign flip under swaps exact.
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  auto less = [&](int i, int j) {
    for (int r = 0; r < vectors.rows(); ++r) {
      if (vectors(r, i) < vectors(r, j)) return true;
      if (vectors(r, i) > vectors(r, j)) return false;
    }
    return false;
  };
  int sign = 1;
  for (int i = 1; i < k; ++i)  // insertion sort tracking parity
    for (int j = i; j > 0 && less(order[j], order[j - 1]); --j) {
      std::swap(order[j], order[j - 1]);
      sign = -sign;
    }
  for (int i = 1; i < k; ++i)
    if (!less(order[i - 1], order[i])) return 0.0;  // repeated vector
  Mat sorted(vectors.rows(), k);
  for (int i = 0; i < k; ++i) sorted.col(i) = vectors.col(order[i]);
  double sum = 0.0;
  Mat minor(k, k);
  for (const auto& [idx, f] : a.terms()) {
    for (int r = 0; r < k; ++r) minor.row(r) = sorted.row(idx[r]);
    sum += f(x) * detail::small_det(minor);
  }
  return sign * sum;
}

inline double evaluate_form(const DifferentialForm& a, const Vec& x, const std::vector<Vec>& vectors) {
  Mat m(a.dim(), static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = vectors[i];
  return evaluate_form(a, x, m);
}

// ---------------------------------------------------------------------------
// SmoothMap

class SmoothMap {
 public:
  using EvalFn = std::function<Vec(const Vec&)>;
  using JacFn = std::function<Mat(const Vec&)>;

  static SmoothMap polynomial(std::vector<Polynomial> components) {
    require(!components.empty(), "SmoothMap: need at least one component");
    const int d = components.front().vars();
    for (const auto& c : components) require(c.vars() == d, "SmoothMap: components disagree on domain dimension");
    SmoothMap m;
    m.domain_dim_ = d;
    m.codomain_dim_ = static_cast<int>(components.size());
    std::vector<std::vector<Polynomial>> partials(components.size());
    for (std::size_t r = 0; r < components.size(); ++r)
      for (int c = 0; c < d; ++c) partials[r].push_back(components[r].partial(c));
    m.eval_ = [components](const Vec& x) {
      Vec y(static_cast<Eigen::Index>(components.size()));
      for (std::size_t r = 0; r < components.size(); ++r) y[static_cast<Eigen::Index>(r)] = components[r](x);
      return y;
    };
    m.jac_ = [partials, d](const Vec& x) {
      Mat j(static_cast<Eigen::Index>(partials.size()), d);
      for (std::size_t r = 0; r < partials.size(); ++r)
        for (int c = 0; c < d; ++c) j(static_cast<Eigen::Index>(r), c) = partials[r][c](x);
      return j;
    };
    m.poly_ = std::move(components);
    return m;
  }

  /// Map given by procedures; without a Jacobian procedure, central
  /// differences with step `fd_step` are used.
  static SmoothMap callable(int domain_dim, int codomain_dim, EvalFn eval, JacFn jac = {},
                            double fd_step = kDefaultFdStep) {
    require(domain_dim >= 0 && codomain_dim >= 1, "SmoothMap: bad dimensions");
    require(static_cast<bool>(eval), "SmoothMap: empty evaluation procedure");
    SmoothMap m;
    m.domain_dim_ = domain_dim;
    m.codomain_dim_ = codomain_dim;
    m.eval_ = std::move(eval);
    m.jac_ = std::move(jac);
    m.fd_step_ = fd_step;
    return m;
  }

  static SmoothMap identity(int dim) {
    std::vector<Polynomial> comps;
    for (int i = 0; i < dim; ++i) comps.push_back(Polynomial::variable(dim, i));
    return polynomial(std::move(comps));
  }

  static SmoothMap constant(int domain_dim, const Vec& value) {
    std::vector<Polynomial> comps;
    for (int i = 0; i < value.size(); ++i) comps.push_back(Polynomial::constant(domain_dim, value[i]));
    return polynomial(std::move(comps));
  }

  int domain_dim() const { return domain_dim_; }
  int codomain_dim() const { return codomain_dim_; }
  bool is_polynomial() const { return poly_.has_value(); }
  bool has_exact_jacobian() const { return static_cast<bool>(jac_); }
  const std::vector<Polynomial>& components() const {
    require(is_polynomial(), "SmoothMap: map is not polynomial");
    return *poly_;
  }

  Vec operator()(const Vec& x) const {
    require(x.size() == domain_dim_, "SmoothMap: point has wrong dimension");
    return eval_(x);
  }

  Mat jacobian(const Vec& x) const {
    require(x.size() == domain_dim_, "SmoothMap: point has wrong dimension");
    if (jac_) return jac_(x);
    Mat j(codomain_dim_, domain_dim_);
    Vec xp = x, xm = x;
    for (int c = 0; c < domain_dim_; ++c) {
      xp[c] = x[c] + fd_step_;
      xm[c] = x[c] - fd_step_;
      j.col(c) = (eval_(xp) - eval_(xm)) / (2.0 * fd_step_);
      xp[c] = xm[c] = x[c];
    }
    return j;
  }

  /// outer o inner
  friend SmoothMap compose(const SmoothMap& outer, const SmoothMap& inner) {
    require(outer.domain_dim_ == inner.codomain_dim_, "compose: dimension mismatch");
    if (outer.is_polynomial() && inner.is_polynomial()) {
      std::vector<Polynomial> comps;
      for (const auto& c : outer.components()) comps.push_back(c.compose(inner.components()));
      return polynomial(std::move(comps));
    }
    return callable(
        inner.domain_dim_, outer.codomain_dim_, [outer, inner](const Vec& x) { return outer(inner(x)); },
        [outer, inner](const Vec& x) -> Mat { return outer.jacobian(inner(x)) * inner.jacobian(x); });
  }

 private:
  SmoothMap() = default;

  int domain_dim_ = 0;
  int codomain_dim_ = 0;
  EvalFn eval_;
  JacFn jac_;
  std::optional<std::vector<Polynomial>> poly_;
  double fd_step_ = kDefaultFdStep;
};

/// f^* a. Exact when both f and a are polynomial; otherwise each coefficient
/// is a procedure contracting a(f(x)) with minors of Df(x).
inline DifferentialForm pullback(const SmoothMap& f, const DifferentialForm& a) {
  require(f.codomain_dim() == a.dim(), "pullback: map codomain differs from form's space");
  const int d = f.domain_dim();
  const int k = a.degree();
  DifferentialForm out(d, k);
  if (k > d || a.is_zero()) return out;
  const auto targets = detail::subsets(d, k);

  if (f.is_polynomial() && a.is_polynomial()) {
    const auto& comps = f.components();
    std::vector<std::vector<Polynomial>> partials(comps.size());
    for (std::size_t r = 0; r < comps.size(); ++r)
      for (int c = 0; c < d; ++c) partials[r].push_back(comps[r].partial(c));
    for (const auto& [idx, coeff] : a.terms()) {
      const Polynomial composed = coeff.polynomial().compose(comps);
      for (const auto& cols : targets) {
        std::vector<std::vector<const Polynomial*>> minor(k, std::vector<const Polynomial*>(k));
        for (int r = 0; r < k; ++r)
          for (int c = 0; c < k; ++c) minor[r][c] = &partials[idx[r]][cols[c]];
        const Polynomial det = detail::poly_det(minor, d);
        if (det.is_zero()) continue;
        out.add_term(cols, ScalarField(composed * det));
      }
    }
    return out;
  }

  for (const auto& cols : targets) {
    auto coefficient = [f, a, cols, k](const Vec& x) {
      const Vec y = f(x);
      const Mat j = f.jacobian(x);
      Mat minor(k, k);
      double sum = 0.0;
      for (const auto& [idx, coeff] : a.terms()) {
        for (int r = 0; r < k; ++r)
          for (int c = 0; c < k; ++c) minor(r, c) = j(idx[r], cols[c]);
        sum += coeff(y) * detail::small_det(minor);
      }
      return sum;
    };
    out.add_term(cols, ScalarField::callable(d, coefficient));
  }
  return out;
}

/// Value of (f^* a) at x on the vectors given as columns of `vectors`, without
/// building the pulled-back form.
inline double evaluate_pullback(const SmoothMap& f, const DifferentialForm& a, const Vec& x, const Mat& vectors) {
  return evaluate_form(a, f(x), f.jacobian(x) * vectors);
}

}  // namespace heislab

#endif  // HEISLAB_FORMS_HPP
