#ifndef HEISLAB_GALLERY_HPP
#define HEISLAB_GALLERY_HPP

// Concrete maps: horizontal figure-eight lifts of S^1 into H_1, disks and
// radial extensions, the identity into H_n, and the Hopf map.

#include <heislab/approximation.hpp>
#include <heislab/common.hpp>
#include <heislab/forms.hpp>
#include <heislab/heis_core.hpp>

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace heislab {

enum class ParamDomain {
  Circle,    // S^1 in R^2
  Sphere2,   // S^2 in R^3
  Sphere3,   // S^3 in R^4
  Ball,      // closed unit ball in R^d
  Cube,      // [-a, a]^d
  Interval,  // [-1, 1]
};

struct ParametricMap {
  std::string name;
  std::string description;
  ParamDomain domain = ParamDomain::Cube;
  int domain_dim = 1;        // dimension of the ambient parameter space
  double half_width = 1.0;   // cube half width
  SmoothMap map = SmoothMap::identity(1);
  std::map<std::string, double> holder_tags;  // metric name -> declared exponent
  int heisenberg_n = 0;                       // > 0 when the target is H_n
  bool horizontal = false;                    // f^* alpha = 0

  Vec operator()(const Vec& x) const { return map(x); }
};

// ---------------------------------------------------------------------------
// Figure-eight lifts

/// Gerono lemniscate (sin s, sin s cos s) lifted to H_1 by
/// t(s) = 2 int_0^s (x y' - y x') = 2 cos s - (2/3) cos^3 s - 4/3.
/// The two passes through the planar origin sit at heights t(0) = 0 and
/// t(pi) = -8/3. As a polynomial in u = (cos s, sin s):
/// (u2, u1 u2, 2 u1 - (2/3) u1^3 - 4/3).
inline ParametricMap figure_eight_lift() {
  const Polynomial u1 = Polynomial::variable(2, 0), u2 = Polynomial::variable(2, 1);
  const Polynomial t = 2.0 * u1 - (2.0 / 3.0) * (u1 * u1 * u1) - Polynomial::constant(2, 4.0 / 3.0);
  ParametricMap m;
  m.name = "figure_eight_lift";
  m.description = "horizontal lift of the Gerono lemniscate, S^1 -> H_1";
  m.domain = ParamDomain::Circle;
  m.domain_dim = 2;
  m.map = SmoothMap::polynomial({u2, u1 * u2, t});
  m.holder_tags = {{"euclidean", 1.0}, {"koranyi", 1.0}};
  m.heisenberg_n = 1;
  m.horizontal = true;
  return m;
}

namespace detail {

/// Planar vertices of the polygonal figure eight; each edge takes 1/6 of the
/// circle's angle.
inline const std::array<Eigen::Vector2d, 7>& polygon_vertices() {
  static const std::array<Eigen::Vector2d, 7> v = {Eigen::Vector2d(0, 0),  Eigen::Vector2d(1, 1),
                                                   Eigen::Vector2d(1, -1), Eigen::Vector2d(0, 0),
                                                   Eigen::Vector2d(-1, 1), Eigen::Vector2d(-1, -1),
                                                   Eigen::Vector2d(0, 0)};
  return v;
}

/// Point of the polygonal lift at angle s and its s-derivative.
inline void polygon_lift(double s, Vec& value, Vec& velocity) {
  const auto& v = polygon_vertices();
  const double seg = kPi / 3.0;
  double w = std::fmod(s, 2.0 * kPi);
  if (w < 0) w += 2.0 * kPi;
  int i = std::min(5, static_cast<int>(w / seg));
  const double tau = (w - i * seg) / seg;
  double t0 = 0.0;
  for (int j = 0; j < i; ++j) t0 += 2.0 * (v[j].x() * v[j + 1].y() - v[j].y() * v[j + 1].x());
  const Eigen::Vector2d p = v[i], q = v[i + 1];
  const double dt = 2.0 * (p.x() * q.y() - p.y() * q.x());
  value = Vec(3);
  value << p.x() + tau * (q.x() - p.x()), p.y() + tau * (q.y() - p.y()), t0 + tau * dt;
  velocity = Vec(3);
  velocity << (q.x() - p.x()) / seg, (q.y() - p.y()) / seg, dt / seg;
}

}  // namespace detail

/// Horizontal lift of a polygonal figure eight, Lipschitz but with corners.
/// Origin passes at heights 0 and -4.
inline ParametricMap figure_eight_polygon() {
  ParametricMap m;
  m.name = "figure_eight_polygon";
  m.description = "horizontal lift of a polygonal figure eight (Lipschitz, corners), S^1 -> H_1";
  m.domain = ParamDomain::Circle;
  m.domain_dim = 2;
  m.map = SmoothMap::callable(
      2, 3,
      [](const Vec& u) {
        Vec val, vel;
        detail::polygon_lift(std::atan2(u[1], u[0]), val, vel);
        return val;
      },
      [](const Vec& u) -> Mat {
        Vec val, vel;
        detail::polygon_lift(std::atan2(u[1], u[0]), val, vel);
        // ds = (u1 du2 - u2 du1) / |u|^2
        const double r2 = u.squaredNorm();
        Mat j(3, 2);
        j.col(0) = vel * (-u[1] / r2);
        j.col(1) = vel * (u[0] / r2);
        return j;
      });
  m.holder_tags = {{"euclidean", 1.0}, {"koranyi", 1.0}};
  m.heisenberg_n = 1;
  m.horizontal = true;
  return m;
}

/// A circle map evaluated at angle s.
inline Vec at_angle(const ParametricMap& m, double s) {
  require(m.domain == ParamDomain::Circle, "at_angle: map is not defined on S^1");
  return m.map(Eigen::Vector2d(std::cos(s), std::sin(s)));
}

/// d/ds of a circle map at angle s.
inline Vec velocity_at_angle(const ParametricMap& m, double s) {
  require(m.domain == ParamDomain::Circle, "velocity_at_angle: map is not defined on S^1");
  const Eigen::Vector2d u(std::cos(s), std::sin(s)), tangent(-std::sin(s), std::cos(s));
  return m.map.jacobian(u) * tangent;
}

// ---------------------------------------------------------------------------
// Extensions and disks

/// Phi(x) = phi(x / |x|) on R^{k+1} minus the origin.
inline ParametricMap radial_extension(const ParametricMap& phi) {
  require(phi.domain == ParamDomain::Circle || phi.domain == ParamDomain::Sphere2 ||
              phi.domain == ParamDomain::Sphere3,
          "radial_extension: map must be defined on a sphere");
  const SmoothMap inner = phi.map;
  ParametricMap m;
  m.name = "radial_" + phi.name;
  m.description = "radial extension x -> phi(x/|x|) of " + phi.name;
  m.domain = ParamDomain::Ball;
  m.domain_dim = phi.domain_dim;
  m.map = SmoothMap::callable(
      phi.domain_dim, inner.codomain_dim(),
      [inner](const Vec& x) {
        const double r = x.norm();
        require(r > 0.0, "radial_extension: undefined at the origin");
        return inner(x / r);
      },
      [inner](const Vec& x) -> Mat {
        const double r = x.norm();
        require(r > 0.0, "radial_extension: undefined at the origin");
        const Vec u = x / r;
        const Mat proj = (Mat::Identity(x.size(), x.size()) - u * u.transpose()) / r;
        return inner.jacobian(u) * proj;
      });
  m.heisenberg_n = phi.heisenberg_n;
  m.horizontal = phi.horizontal;
  return m;
}

/// Phi(u, v) = (u (1 + v^2) / 2, 0, 0): a disk with image in the x-axis.
inline ParametricMap horizontal_disk() {
  const Polynomial u = Polynomial::variable(2, 0), v = Polynomial::variable(2, 1);
  ParametricMap m;
  m.name = "horizontal_disk";
  m.description = "disk B^2 -> H_1 with image in the x-axis";
  m.domain = ParamDomain::Ball;
  m.domain_dim = 2;
  m.map = SmoothMap::polynomial({0.5 * (u + u * v * v), Polynomial(2), Polynomial(2)});
  m.holder_tags = {{"euclidean", 1.0}, {"koranyi", 1.0}};
  m.heisenberg_n = 1;
  m.horizontal = true;
  return m;
}

/// Phi(u, v) = L(pi u (1 + v / 4)) with L the lemniscate lift: a Lipschitz
/// horizontal disk of rank one whose boundary runs along the figure eight
/// forth and back. The v-dependence breaks the reflection symmetry v -> -v.
inline ParametricMap folded_figure_eight_disk() {
  const ParametricMap lift = figure_eight_lift();
  ParametricMap m;
  m.name = "folded_figure_eight_disk";
  m.description = "rank-one Lipschitz horizontal disk (u, v) -> L(pi u (1 + v/4)) over the figure eight";
  m.domain = ParamDomain::Ball;
  m.domain_dim = 2;
  m.map = SmoothMap::callable(
      2, 3, [lift](const Vec& x) { return at_angle(lift, kPi * x[0] * (1.0 + 0.25 * x[1])); },
      [lift](const Vec& x) -> Mat {
        const Vec vel = kPi * velocity_at_angle(lift, kPi * x[0] * (1.0 + 0.25 * x[1]));
        Mat j(3, 2);
        j.col(0) = (1.0 + 0.25 * x[1]) * vel;
        j.col(1) = 0.25 * x[0] * vel;
        return j;
      });
  m.holder_tags = {{"euclidean", 1.0}, {"koranyi", 1.0}};
  m.heisenberg_n = 1;
  m.horizontal = true;
  return m;
}

inline ParametricMap identity_into_H(int n, double cube_half_width = 1.0) {
  require(n >= 1, "identity_into_H: n must be positive");
  require(cube_half_width > 0.0, "identity_into_H: cube half width must be positive");
  ParametricMap m;
  m.name = "identity_H" + std::to_string(n);
  m.description = "identity of the cube [-a,a]^{2n+1} into H_n";
  m.domain = ParamDomain::Cube;
  m.domain_dim = 2 * n + 1;
  m.half_width = cube_half_width;
  m.map = SmoothMap::identity(2 * n + 1);
  m.holder_tags = {{"euclidean", 1.0}, {"koranyi", 0.5}};
  m.heisenberg_n = n;
  return m;
}

/// s -> (0, 0, s) on [-1, 1]; Koranyi distances are exactly |ds|^{1/2}.
inline ParametricMap vertical_segment() {
  const Polynomial s = Polynomial::variable(1, 0);
  ParametricMap m;
  m.name = "vertical_segment";
  m.description = "vertical segment s -> (0,0,s) in H_1";
  m.domain = ParamDomain::Interval;
  m.domain_dim = 1;
  m.map = SmoothMap::polynomial({Polynomial(1), Polynomial(1), s});
  m.holder_tags = {{"euclidean", 1.0}, {"koranyi", 0.5}};
  m.heisenberg_n = 1;
  return m;
}

/// h(x) = (2(x1 x3 + x2 x4), 2(x2 x3 - x1 x4), x1^2 + x2^2 - x3^2 - x4^2).
inline ParametricMap hopf_map() {
  std::vector<Polynomial> x;
  for (int i = 0; i < 4; ++i) x.push_back(Polynomial::variable(4, i));
  ParametricMap m;
  m.name = "hopf_map";
  m.description = "Hopf map S^3 -> S^2";
  m.domain = ParamDomain::Sphere3;
  m.domain_dim = 4;
  m.map = SmoothMap::polynomial({2.0 * (x[0] * x[2] + x[1] * x[3]), 2.0 * (x[1] * x[2] - x[0] * x[3]),
                                 x[0] * x[0] + x[1] * x[1] - x[2] * x[2] - x[3] * x[3]});
  m.holder_tags = {{"euclidean", 1.0}};
  return m;
}

// ---------------------------------------------------------------------------
// Registry and generic checks

inline std::vector<std::string> gallery_names() {
  return {"figure_eight_lift", "figure_eight_polygon", "radial_figure_eight_lift", "folded_figure_eight_disk",
          "horizontal_disk",   "identity_H1",          "identity_H2",              "vertical_segment",
          "hopf_map"};
}

inline ParametricMap gallery_map(const std::string& name) {
  if (name == "figure_eight_lift") return figure_eight_lift();
  if (name == "figure_eight_polygon") return figure_eight_polygon();
  if (name == "radial_figure_eight_lift") return radial_extension(figure_eight_lift());
  if (name == "folded_figure_eight_disk") return folded_figure_eight_disk();
  if (name == "horizontal_disk") return horizontal_disk();
  if (name == "identity_H1") return identity_into_H(1);
  if (name == "identity_H2") return identity_into_H(2);
  if (name == "vertical_segment") return vertical_segment();
  if (name == "hopf_map") return hopf_map();
  throw InvalidArgument("unknown gallery map '" + name + "'");
}

/// Uniform random parameter point of the map's domain.
inline Vec random_parameter(const ParametricMap& m, Rng& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  switch (m.domain) {
    case ParamDomain::Circle:
    case ParamDomain::Sphere2:
    case ParamDomain::Sphere3: return random_unit_vector(rng, m.domain_dim);
    case ParamDomain::Ball: return random_in_ball(rng, m.domain_dim, 1.0);
    case ParamDomain::Cube: {
      Vec p(m.domain_dim);
      for (int i = 0; i < m.domain_dim; ++i) p[i] = m.half_width * unif(rng);
      return p;
    }
    case ParamDomain::Interval: return Vec::Constant(1, unif(rng));
  }
  return Vec();
}

/// Jacobian restricted to the intrinsic tangent space of the domain: on
/// spheres it acts on an orthonormal tangent basis at x.
inline Mat intrinsic_jacobian(const ParametricMap& m, const Vec& x) {
  const Mat j = m.map.jacobian(x);
  if (m.domain != ParamDomain::Circle && m.domain != ParamDomain::Sphere2 && m.domain != ParamDomain::Sphere3)
    return j;
  const Vec u = x.normalized();
  const Mat proj = Mat::Identity(x.size(), x.size()) - u * u.transpose();
  Eigen::JacobiSVD<Mat> svd(proj, Eigen::ComputeFullU);
  const Mat basis = svd.matrixU().leftCols(x.size() - 1);
  return j * basis;
}

/// Singular values of the intrinsic Jacobian at x, in decreasing order.
inline Vec jacobian_singular_values(const ParametricMap& m, const Vec& x) {
  return Eigen::JacobiSVD<Mat>(intrinsic_jacobian(m, x)).singularValues();
}

/// Hoelder fit of a gallery map on its own domain with the given metric.
/// Circle maps use the angle as parameter; sphere maps use geodesic gaps.
inline HolderFit holder_fit(const ParametricMap& m, MetricTag metric, std::size_t pair_budget, std::uint64_t seed) {
  switch (m.domain) {
    case ParamDomain::Circle: {
      ContinuousDomain d{DomainKind::Torus, 1, 0.0, 2.0 * kPi};
      return holder_fit([&m](const Vec& s) { return at_angle(m, s[0]); }, d, metric, pair_budget, seed);
    }
    case ParamDomain::Cube: {
      ContinuousDomain d{DomainKind::Cube, m.domain_dim, -m.half_width, m.half_width};
      return holder_fit(m.map, d, metric, pair_budget, seed);
    }
    case ParamDomain::Interval: {
      ContinuousDomain d{DomainKind::Cube, 1, -1.0, 1.0};
      return holder_fit(m.map, d, metric, pair_budget, seed);
    }
    case ParamDomain::Ball: {
      // Pairs are drawn in the inscribed cube.
      const double a = 1.0 / std::sqrt(static_cast<double>(m.domain_dim));
      ContinuousDomain d{DomainKind::Cube, m.domain_dim, -a, a};
      return holder_fit(m.map, d, metric, pair_budget, seed);
    }
    case ParamDomain::Sphere2:
    case ParamDomain::Sphere3: {
      require(pair_budget >= 1000, "holder_fit: pair budget must be at least 1000");
      Rng rng(seed);
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      const double gmin = 1e-3 * kPi, gmax = 0.1 * kPi;
      std::vector<double> gaps, dists;
      while (gaps.size() < pair_budget) {
        const Vec p = random_unit_vector(rng, m.domain_dim);
        Vec dir = random_unit_vector(rng, m.domain_dim);
        dir -= dir.dot(p) * p;
        if (dir.norm() < 1e-8) continue;
        dir.normalize();
        const double g = gmin * std::pow(gmax / gmin, unif(rng));
        const Vec q = std::cos(g) * p + std::sin(g) * dir;
        gaps.push_back(g);
        dists.push_back(target_distance(m.map(p), m.map(q), metric));
      }
      return fit_holder_envelope(gaps, dists, metric);
    }
  }
  return {};
}

/// Samples a circle map on the torus grid of T^1 with `res` points.
inline SampledMap sample_circle_map(const ParametricMap& m, int res) {
  return sample_torus(1, res, [&m](const Vec& s) { return at_angle(m, s[0]); });
}

}  // namespace heislab

#endif  // HEISLAB_GALLERY_HPP
