#ifndef HEISLAB_TESTS_ORACLES_HPP
#define HEISLAB_TESTS_ORACLES_HPP

// Reference computations that do not go through the library code paths they
// check: closed forms, integer arithmetic, and planar-diagram crossing counts.

#include <heislab/linking.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using heislab::Vec;

/// Korányi distance on H_1 written out by hand: for w = p^{-1} q,
/// ((dx^2 + dy^2)^2 + dt^2)^{1/4} with dt = t' - t - 2 (x y' - y x').
inline double koranyi_h1(double x, double y, double t, double x2, double y2, double t2) {
  const double dx = x2 - x, dy = y2 - y;
  const double dt = t2 - t - 2.0 * (x * y2 - y * x2);
  const double r2 = dx * dx + dy * dy;
  return std::pow(r2 * r2 + dt * dt, 0.25);
}

/// Linking number from the xy-projection: each crossing of a segment of `a`
/// with a segment of `b` contributes +-1/2 by the right-hand rule.
inline double crossing_count(const heislab::PLCurve& a, const heislab::PLCurve& b) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.segment_count(); ++i) {
    const Vec& p0 = a.segment_start(i);
    const Vec& p1 = a.segment_end(i);
    for (std::size_t j = 0; j < b.segment_count(); ++j) {
      const Vec& q0 = b.segment_start(j);
      const Vec& q1 = b.segment_end(j);
      const Eigen::Vector2d r(p1[0] - p0[0], p1[1] - p0[1]), s(q1[0] - q0[0], q1[1] - q0[1]);
      const double denom = r[0] * s[1] - r[1] * s[0];
      if (denom == 0.0) continue;
      const Eigen::Vector2d d(q0[0] - p0[0], q0[1] - p0[1]);
      const double u = (d[0] * s[1] - d[1] * s[0]) / denom;
      const double v = (d[0] * r[1] - d[1] * r[0]) / denom;
      if (u < 0.0 || u >= 1.0 || v < 0.0 || v >= 1.0) continue;
      const double za = p0[2] + u * (p1[2] - p0[2]);
      const double zb = q0[2] + v * (q1[2] - q0[2]);
      // a over b: sign of (r x s)_z; a under b: the opposite.
      const double sign = (denom > 0.0 ? 1.0 : -1.0) * (za > zb ? 1.0 : -1.0);
      total += 0.5 * sign;
    }
  }
  return total;
}

/// Distance from x in S^3 to the Hopf fiber over unit p, for the map
/// (2 z1 conj(z2), |z1|^2 - |z2|^2) with z1 = x1 + i x2, z2 = x3 + i x4.
/// The fiber is e^{i s} (a, b e^{-i phi}) with a^2 = (1 + p3)/2,
/// b^2 = (1 - p3)/2, phi = arg(p1 + i p2).
inline double hopf_fiber_distance(const Vec& x, const Eigen::Vector3d& p) {
  using C = std::complex<double>;
  const double a = std::sqrt(std::max(0.0, (1.0 + p[2]) / 2.0));
  const double b = std::sqrt(std::max(0.0, (1.0 - p[2]) / 2.0));
  const double phi = std::atan2(p[1], p[0]);
  const C w1(a, 0.0), w2 = b * std::polar(1.0, -phi);
  const C z1(x[0], x[1]), z2(x[2], x[3]);
  const double overlap = std::abs(z1 * std::conj(w1) + z2 * std::conj(w2));
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * overlap));
}

/// Region predicate on the grid gamma = i/20, theta = j/10 in integer
/// arithmetic: 2 gamma + theta (k-1) - k > 0  <=>  2i + 2j(k-1) - 20k > 0.
inline bool gromov_inside(int k, int i, int j) { return 2 * i + 2 * j * (k - 1) - 20 * k > 0; }

/// Dual cycles of the k = 1 linking form: loops on the sphere of radius
/// 3 tau around p_plus and p_minus, offset by tau along the curve tangent
/// `tangent_plus` / `tangent_minus`, each oriented along the Hodge dual of
/// eta = d chi ^ d omega_0 where that vector is largest on the loop. The sum of
/// Gauss linking numbers of the curve with these loops is the integral of
/// omega_1 over the curve.
inline double dual_cycle_linking(const heislab::LinkingForm& f, const heislab::PLCurve& curve,
                                 const Eigen::Vector3d& tangent_plus, const Eigen::Vector3d& tangent_minus,
                                 std::size_t segments = 256) {
  const double tau = f.tube_radius;
  double total = 0.0;
  for (int e = 0; e < 2; ++e) {
    const Eigen::Vector3d centre = e == 0 ? Eigen::Vector3d(f.p_plus) : Eigen::Vector3d(f.p_minus);
    const Eigen::Vector3d t = (e == 0 ? tangent_plus : tangent_minus).normalized();
    Eigen::Vector3d u = t.unitOrthogonal(), v = t.cross(u);
    const double radius = std::sqrt(8.0) * tau;
    auto loop_point = [&](double s) {
      return Vec(centre + tau * t + radius * (std::cos(s) * u + std::sin(s) * v));
    };
    heislab::PLCurve loop = heislab::sample_closed_curve(loop_point, segments);
    double best = 0.0, orient = 0.0;
    for (std::size_t i = 0; i < segments; ++i) {
      const double s = 2.0 * heislab::kPi * static_cast<double>(i) / segments;
      const Vec x = loop_point(s);
      const Eigen::Vector3d dir = -std::sin(s) * u + std::cos(s) * v;
      double exy = 0.0, exz = 0.0, eyz = 0.0;
      for (const auto& [idx, c] : f.eta.terms()) {
        if (idx == heislab::IndexSet{0, 1}) exy = c(x);
        if (idx == heislab::IndexSet{0, 2}) exz = c(x);
        if (idx == heislab::IndexSet{1, 2}) eyz = c(x);
      }
      const Eigen::Vector3d star(eyz, -exz, exy);
      if (star.norm() > best) {
        best = star.norm();
        orient = star.dot(dir);
      }
    }
    if (best == 0.0) continue;
    total += (orient > 0.0 ? 1.0 : -1.0) * heislab::gauss_linking(curve, loop);
  }
  return total;
}

}  // namespace oracle

#endif  // HEISLAB_TESTS_ORACLES_HPP
