#ifndef HEISLAB_HEIS_CORE_HPP
#define HEISLAB_HEIS_CORE_HPP

// The Heisenberg group H_n realised on R^{2n+1} with coordinates
// (x_1, y_1, ..., x_n, y_n, t); index 2j is x_{j+1}, 2j+1 is y_{j+1}, 2n is t.
//
// Conventions fixed here and used everywhere else:
//   contact form   alpha = dt + 2 sum_j (y_j dx_j - x_j dy_j)
//   group law      (z,t)*(z',t') = (z+z', t+t' + 2 sum_j (x_j y'_j - y_j x'_j))
//   frame          X_j = d/dx_j - 2 y_j d/dt,  Y_j = d/dy_j + 2 x_j d/dt
// With this sign of the group law the frame is left invariant, spans ker alpha,
// and the Koranyi gauge below is a left-invariant metric.

#include <heislab/common.hpp>

#include <algorithm>
#include <array>
#include <limits>
#include <vector>

namespace heislab {

class HeisenbergPoint {
 public:
  HeisenbergPoint(int n, Vec coords) : n_(n), coords_(std::move(coords)) {
    require(n_ >= 1, "HeisenbergPoint: n must be positive");
    require(coords_.size() == 2 * n_ + 1, "HeisenbergPoint: expected 2n+1 coordinates");
    require(coords_.allFinite(), "HeisenbergPoint: coordinates must be finite");
  }

  static HeisenbergPoint origin(int n) { return HeisenbergPoint(n, Vec::Zero(2 * n + 1)); }

  int n() const { return n_; }
  int ambient_dim() const { return 2 * n_ + 1; }
  const Vec& coords() const { return coords_; }
  double x(int j) const { return coords_[2 * j]; }
  double y(int j) const { return coords_[2 * j + 1]; }
  double t() const { return coords_[2 * n_]; }
  double operator[](int i) const { return coords_[i]; }

  friend bool operator==(const HeisenbergPoint& a, const HeisenbergPoint& b) {
    return a.n_ == b.n_ && a.coords_ == b.coords_;
  }

 private:
  int n_;
  Vec coords_;
};

inline void require_same_group(const HeisenbergPoint& p, const HeisenbergPoint& q) {
  require(p.n() == q.n(), "Heisenberg points belong to different groups H_n");
}

inline HeisenbergPoint group_mul(const HeisenbergPoint& p, const HeisenbergPoint& q) {
  require_same_group(p, q);
  Vec r = p.coords() + q.coords();
  double twist = 0.0;
  for (int j = 0; j < p.n(); ++j) twist += p.x(j) * q.y(j) - p.y(j) * q.x(j);
  r[2 * p.n()] += 2.0 * twist;
  return HeisenbergPoint(p.n(), std::move(r));
}

inline HeisenbergPoint group_inv(const HeisenbergPoint& p) { return HeisenbergPoint(p.n(), -p.coords()); }

/// Koranyi distance ((sum_i |z_i - z'_i|^2)^2 + |t - t' + 2 sum_j (x_j y'_j - y_j x'_j)|^2)^{1/4}.
/// The twisted vertical term is the t-coordinate of q^{-1} * p, so the distance
/// is left invariant; it is written so that d(p,q) == d(q,p) bit for bit.
inline double koranyi_dist(const HeisenbergPoint& p, const HeisenbergPoint& q) {
  require_same_group(p, q);
  const int n = p.n();
  double horizontal = 0.0;
  double twist = 0.0;
  for (int j = 0; j < n; ++j) {
    const double dx = p.x(j) - q.x(j);
    const double dy = p.y(j) - q.y(j);
    horizontal += dx * dx + dy * dy;
    twist += p.x(j) * q.y(j) - p.y(j) * q.x(j);
  }
  const double vertical = (p.t() - q.t()) + 2.0 * twist;
  return std::pow(horizontal * horizontal + vertical * vertical, 0.25);
}

/// Carnot dilation (z, t) -> (r z, r^2 t).
inline HeisenbergPoint dilation(double r, const HeisenbergPoint& p) {
  require(r > 0.0, "dilation: factor must be positive");
  Vec c = p.coords() * r;
  c[2 * p.n()] = r * r * p.t();
  return HeisenbergPoint(p.n(), std::move(c));
}

struct Covector {
  Vec components;

  int base_dim() const { return static_cast<int>(components.size()); }
  double operator()(const Vec& v) const {
    require(v.size() == components.size(), "Covector: dimension mismatch");
    return components.dot(v);
  }
};

/// alpha evaluated at p.
inline Covector contact_form_at(const HeisenbergPoint& p) {
  Vec c = Vec::Zero(p.ambient_dim());
  for (int j = 0; j < p.n(); ++j) {
    c[2 * j] = 2.0 * p.y(j);
    c[2 * j + 1] = -2.0 * p.x(j);
  }
  c[2 * p.n()] = 1.0;
  return Covector{std::move(c)};
}

struct HorizontalFrame {
  HeisenbergPoint point;
  std::vector<Vec> vectors;  // X_1, Y_1, ..., X_n, Y_n
};

inline HorizontalFrame horizontal_frame(const HeisenbergPoint& p) {
  const int n = p.n();
  std::vector<Vec> vectors;
  vectors.reserve(2 * n);
  for (int j = 0; j < n; ++j) {
    Vec xj = Vec::Zero(2 * n + 1);
    xj[2 * j] = 1.0;
    xj[2 * n] = -2.0 * p.y(j);
    Vec yj = Vec::Zero(2 * n + 1);
    yj[2 * j + 1] = 1.0;
    yj[2 * n] = 2.0 * p.x(j);
    vectors.push_back(std::move(xj));
    vectors.push_back(std::move(yj));
  }
  return HorizontalFrame{p, std::move(vectors)};
}

/// True iff |alpha_p(v)| <= tol * (1 + |v|).
inline bool is_horizontal_velocity(const HeisenbergPoint& p, const Vec& v, double tol) {
  require(v.size() == p.ambient_dim(), "is_horizontal_velocity: velocity has wrong length");
  require(tol >= 0.0, "is_horizontal_velocity: tolerance must be nonnegative");
  return std::abs(contact_form_at(p)(v)) <= tol * (1.0 + v.norm());
}

// ---------------------------------------------------------------------------
// Metric comparison scan.

struct ComparisonRatios {
  /// |p-q| / ((|p|+|q|+1) d_H(p,q))
  double euclidean_over_koranyi = 0.0;
  /// d_H(p,q) / ((|p|^{1/2}+|q|^{1/2}+1) |p-q|^{1/2})
  double koranyi_over_root_euclidean = 0.0;
};

inline ComparisonRatios comparison_ratios(const HeisenbergPoint& p, const HeisenbergPoint& q) {
  const double dh = koranyi_dist(p, q);
  const double de = (p.coords() - q.coords()).norm();
  const double np = p.coords().norm(), nq = q.coords().norm();
  return {de / ((np + nq + 1.0) * dh), dh / ((std::sqrt(np) + std::sqrt(nq) + 1.0) * std::sqrt(de))};
}

struct ComparisonScan {
  bool valid = false;        // false when every sampled pair was degenerate
  std::size_t pairs_used = 0;
  ComparisonRatios raw;      // maxima over the uniform sample
  ComparisonRatios refined;  // after local ascent from the best sampled pairs
};

namespace detail {

// Pattern search maximising `ratio` over pairs (p, q) in the closed ball.
template <class Ratio>
double ascend_pair(Vec p, Vec q, int n, double radius, Ratio ratio) {
  const int dim = 2 * n + 1;
  auto value = [&](const Vec& a, const Vec& b) {
    if (a.norm() > radius || b.norm() > radius || a == b) return -1.0;
    const double r = ratio(HeisenbergPoint(n, a), HeisenbergPoint(n, b));
    return std::isfinite(r) ? r : -1.0;
  };
  double best = value(p, q);
  double step = 0.25 * std::max((p - q).norm(), 1e-3);
  for (int iter = 0; iter < 400 && step > 1e-9; ++iter) {
    bool improved = false;
    for (int c = 0; c < 2 * dim && !improved; ++c) {
      for (double sign : {1.0, -1.0}) {
        Vec a = p, b = q;
        if (c < dim) a[c] += sign * step;
        else b[c - dim] += sign * step;
        const double v = value(a, b);
        if (v > best) {
          best = v;
          p = std::move(a);
          q = std::move(b);
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

}  // namespace detail

/// Maxima over explicitly supplied pairs; no refinement.
inline ComparisonScan comparison_ratio_scan(const std::vector<std::pair<HeisenbergPoint, HeisenbergPoint>>& pairs) {
  ComparisonScan scan;
  for (const auto& [p, q] : pairs) {
    if (p == q) continue;
    const auto r = comparison_ratios(p, q);
    ++scan.pairs_used;
    scan.raw.euclidean_over_koranyi = std::max(scan.raw.euclidean_over_koranyi, r.euclidean_over_koranyi);
    scan.raw.koranyi_over_root_euclidean =
        std::max(scan.raw.koranyi_over_root_euclidean, r.koranyi_over_root_euclidean);
  }
  scan.valid = scan.pairs_used > 0;
  scan.refined = scan.raw;
  return scan;
}

/// Extremal comparison ratios over `sample_count` independent uniform pairs
/// in the Euclidean ball of the given radius. Degenerate pairs (p == q) are
/// skipped. The refined maxima start a deterministic local ascent from the
/// `refine_count` best pairs of each ratio.
inline ComparisonScan comparison_ratio_scan(std::size_t sample_count, double radius, std::uint64_t seed,
                                            int n = 1, std::size_t refine_count = 8) {
  require(sample_count >= 1, "comparison_ratio_scan: need at least one sample");
  require(radius > 0.0, "comparison_ratio_scan: radius must be positive");
  const int dim = 2 * n + 1;
  Rng rng(seed);
  struct Scored {
    double value;
    Vec p, q;
  };
  std::vector<Scored> best1, best2;
  auto keep = [refine_count](std::vector<Scored>& pool, double v, const Vec& p, const Vec& q) {
    if (pool.size() < refine_count) {
      pool.push_back({v, p, q});
    } else {
      auto worst = std::min_element(pool.begin(), pool.end(),
                                    [](const Scored& a, const Scored& b) { return a.value < b.value; });
      if (v > worst->value) *worst = {v, p, q};
    }
  };
  ComparisonScan scan;
  for (std::size_t s = 0; s < sample_count; ++s) {
    Vec p = random_in_ball(rng, dim, radius);
    Vec q = random_in_ball(rng, dim, radius);
    if (p == q) continue;
    const auto r = comparison_ratios(HeisenbergPoint(n, p), HeisenbergPoint(n, q));
    if (!std::isfinite(r.euclidean_over_koranyi) || !std::isfinite(r.koranyi_over_root_euclidean)) continue;
    ++scan.pairs_used;
    scan.raw.euclidean_over_koranyi = std::max(scan.raw.euclidean_over_koranyi, r.euclidean_over_koranyi);
    scan.raw.koranyi_over_root_euclidean =
        std::max(scan.raw.koranyi_over_root_euclidean, r.koranyi_over_root_euclidean);
    keep(best1, r.euclidean_over_koranyi, p, q);
    keep(best2, r.koranyi_over_root_euclidean, p, q);
  }
  scan.valid = scan.pairs_used > 0;
  if (!scan.valid) return scan;
  scan.refined = scan.raw;
  for (const auto& s : best1) {
    const double v = detail::ascend_pair(s.p, s.q, n, radius, [](const auto& a, const auto& b) {
      return comparison_ratios(a, b).euclidean_over_koranyi;
    });
    scan.refined.euclidean_over_koranyi = std::max(scan.refined.euclidean_over_koranyi, v);
  }
  for (const auto& s : best2) {
    const double v = detail::ascend_pair(s.p, s.q, n, radius, [](const auto& a, const auto& b) {
      return comparison_ratios(a, b).koranyi_over_root_euclidean;
    });
    scan.refined.koranyi_over_root_euclidean = std::max(scan.refined.koranyi_over_root_euclidean, v);
  }
  return scan;
}

}  // namespace heislab

#endif  // HEISLAB_HEIS_CORE_HPP
