#ifndef HEISLAB_POLYNOMIAL_HPP
#define HEISLAB_POLYNOMIAL_HPP

#include <heislab/common.hpp>

#include <map>
#include <vector>

namespace heislab {

/// Sparse real polynomial in a fixed number of variables, stored as
/// exponent multi-index -> coefficient. Zero coefficients are never stored,
/// so two polynomials are equal iff their term maps are equal.
class Polynomial {
 public:
  using Exponents = std::vector<int>;
  using Terms = std::map<Exponents, double>;

  explicit Polynomial(int vars = 0) : vars_(vars) { require(vars >= 0, "Polynomial: negative variable count"); }

  static Polynomial constant(int vars, double c) {
    Polynomial p(vars);
    p.add_term(Exponents(vars, 0), c);
    return p;
  }
  static Polynomial variable(int vars, int i) {
    require(i >= 0 && i < vars, "Polynomial::variable: index out of range");
    Polynomial p(vars);
    Exponents e(vars, 0);
    e[i] = 1;
    p.add_term(e, 1.0);
    return p;
  }
  static Polynomial monomial(const Exponents& e, double c) {
    Polynomial p(static_cast<int>(e.size()));
    p.add_term(e, c);
    return p;
  }

  int vars() const { return vars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) {
      int s = 0;
      for (int k : e) s += k;
      d = std::max(d, s);
    }
    return d;
  }

  void add_term(const Exponents& e, double c) {
    require(static_cast<int>(e.size()) == vars_, "Polynomial: exponent length mismatch");
    for (int k : e) require(k >= 0, "Polynomial: negative exponent");
    if (c == 0.0) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0.0) terms_.erase(it);
    }
  }

  double operator()(const Vec& x) const {
    require(x.size() == vars_, "Polynomial: evaluation point has wrong dimension");
    double sum = 0.0;
    for (const auto& [e, c] : terms_) {
      double m = c;
      for (int i = 0; i < vars_; ++i)
        for (int k = 0; k < e[i]; ++k) m *= x[i];
      sum += m;
    }
    return sum;
  }

  Polynomial partial(int i) const {
    require(i >= 0 && i < vars_, "Polynomial::partial: index out of range");
    Polynomial out(vars_);
    for (const auto& [e, c] : terms_) {
      if (e[i] == 0) continue;
      Exponents f = e;
      f[i] -= 1;
      out.add_term(f, c * e[i]);
    }
    return out;
  }

  Polynomial& operator+=(const Polynomial& o) {
    require(o.vars_ == vars_, "Polynomial: variable count mismatch");
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    require(o.vars_ == vars_, "Polynomial: variable count mismatch");
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  Polynomial& operator*=(double s) {
    if (s == 0.0) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) { return a *= -1.0; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    require(a.vars_ == b.vars_, "Polynomial: variable count mismatch");
    Polynomial out(a.vars_);
    Exponents e(a.vars_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        for (int i = 0; i < a.vars_; ++i) e[i] = ea[i] + eb[i];
        out.add_term(e, ca * cb);
      }
    return out;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.vars_ == b.vars_ && a.terms_ == b.terms_;
  }

  /// Substitutes variable i by polys[i]; the result lives in polys' variables.
  Polynomial compose(const std::vector<Polynomial>& polys) const {
    require(static_cast<int>(polys.size()) == vars_, "Polynomial::compose: wrong number of substitutions");
    const int out_vars = vars_ == 0 ? 0 : polys.front().vars();
    for (const auto& p : polys) require(p.vars() == out_vars, "Polynomial::compose: inconsistent variable counts");
    std::vector<std::vector<Polynomial>> powers(vars_);
    auto power = [&](int i, int k) -> const Polynomial& {
      auto& cache = powers[i];
      if (cache.empty()) cache.push_back(Polynomial::constant(out_vars, 1.0));
      while (static_cast<int>(cache.size()) <= k) cache.push_back(cache.back() * polys[i]);
      return cache[k];
    };
    Polynomial out(out_vars);
    for (const auto& [e, c] : terms_) {
      Polynomial m = Polynomial::constant(out_vars, c);
      for (int i = 0; i < vars_; ++i)
        if (e[i] > 0) m = m * power(i, e[i]);
      out += m;
    }
    return out;
  }

 private:
  int vars_;
  Terms terms_;
};

}  // namespace heislab

#endif  // HEISLAB_POLYNOMIAL_HPP
