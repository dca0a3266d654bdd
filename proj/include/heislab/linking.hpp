#ifndef HEISLAB_LINKING_HPP
#define HEISLAB_LINKING_HPP

// Linking numbers: the Gauss integral for polygonal curves, analytic linking
// via (mollified) pullback integrals, the inductive construction of linking
// forms for embedded S^0 and S^1, and the horizontality obstruction sweep.

#include <heislab/approximation.hpp>
#include <heislab/common.hpp>
#include <heislab/forms.hpp>
#include <heislab/parallel.hpp>
#include <heislab/quadrature.hpp>
#include <heislab/sphere_mesh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace heislab {

struct PLCurve {
  std::vector<Vec> points;
  bool closed = true;

  std::size_t segment_count() const { return closed ? points.size() : points.size() - 1; }
  const Vec& segment_start(std::size_t i) const { return points[i]; }
  const Vec& segment_end(std::size_t i) const { return points[(i + 1) % points.size()]; }
};

inline void validate_curve(const PLCurve& c) {
  require(c.points.size() >= 2, "PLCurve: need at least two points");
  const auto dim = c.points.front().size();
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    require(c.points[i].size() == dim, "PLCurve: inconsistent point dimensions");
    require(c.points[i].allFinite(), "PLCurve: points must be finite");
  }
  for (std::size_t i = 0; i < c.segment_count(); ++i)
    require(c.segment_start(i) != c.segment_end(i), "PLCurve: consecutive points must be distinct");
}

/// Closed polygon through f(theta_i), theta_i = 2 pi i / segments.
inline PLCurve sample_closed_curve(const std::function<Vec(double)>& f, std::size_t segments) {
  require(segments >= 3, "sample_closed_curve: need at least three segments");
  PLCurve c;
  for (std::size_t i = 0; i < segments; ++i) c.points.push_back(f(2.0 * kPi * static_cast<double>(i) / segments));
  return c;
}

namespace detail {

/// Distance between segments [p0,p1] and [q0,q1] (closest-point parameters
/// clamped to the segments).
inline double segment_distance(const Vec& p0, const Vec& p1, const Vec& q0, const Vec& q1) {
  const Vec d1 = p1 - p0, d2 = q1 - q0, r = p0 - q0;
  const double a = d1.squaredNorm(), e = d2.squaredNorm(), f = d2.dot(r);
  double s = 0.0, t = 0.0;
  if (a <= 0.0 && e <= 0.0) return r.norm();
  if (a <= 0.0) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (e <= 0.0) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = d1.dot(d2), denom = a * e - b * b;
      s = denom > 0.0 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return (p0 + s * d1 - (q0 + t * d2)).norm();
}

/// Closest point to x on segment [a, b].
inline Vec closest_on_segment(const Vec& x, const Vec& a, const Vec& b) {
  const Vec d = b - a;
  const double len2 = d.squaredNorm();
  const double s = len2 > 0.0 ? std::clamp((x - a).dot(d) / len2, 0.0, 1.0) : 0.0;
  return a + s * d;
}

/// Signed solid angle subtended by segment pair (r1->r2, r3->r4), divided by
/// 4 pi: the exact Gauss double integral over the two segments.
inline double segment_pair_linking(const Eigen::Vector3d& r1, const Eigen::Vector3d& r2, const Eigen::Vector3d& r3,
                                   const Eigen::Vector3d& r4) {
  const Eigen::Vector3d r13 = r3 - r1, r14 = r4 - r1, r23 = r3 - r2, r24 = r4 - r2;
  Eigen::Vector3d n[4] = {r13.cross(r14), r14.cross(r24), r24.cross(r23), r23.cross(r13)};
  for (auto& v : n) {
    const double len = v.norm();
    if (len == 0.0) return 0.0;  // coplanar degenerate pair contributes nothing
    v /= len;
  }
  double omega = 0.0;
  for (int i = 0; i < 4; ++i) omega += std::asin(std::clamp(n[i].dot(n[(i + 1) % 4]), -1.0, 1.0));
  const double orient = (r4 - r3).cross(r2 - r1).dot(r13);
  if (orient == 0.0) return 0.0;
  return (orient > 0.0 ? omega : -omega) / (4.0 * kPi);
}

}  // namespace detail

/// Smallest distance between a segment of `a` and a segment of `b`.
inline double min_segment_distance(const PLCurve& a, const PLCurve& b) {
  auto partial = map_chunks<double>(a.segment_count(), 32, [&](std::size_t lo, std::size_t hi) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = lo; i < hi; ++i)
      for (std::size_t j = 0; j < b.segment_count(); ++j)
        best = std::min(best, detail::segment_distance(a.segment_start(i), a.segment_end(i), b.segment_start(j),
                                                       b.segment_end(j)));
    return best;
  });
  return *std::min_element(partial.begin(), partial.end());
}

/// Gauss linking number of two closed polygons in R^3, summing the exact
/// segment-pair solid angles. Rejects curves closer than 1e-9.
inline double gauss_linking(const PLCurve& a, const PLCurve& b) {
  validate_curve(a);
  validate_curve(b);
  require(a.closed && b.closed, "gauss_linking: both curves must be closed");
  require(a.points.front().size() == 3 && b.points.front().size() == 3, "gauss_linking: curves must lie in R^3");
  require(min_segment_distance(a, b) > 1e-9, "gauss_linking: curves intersect");
  return chunked_sum(
      a.segment_count(),
      [&](std::size_t i) {
        const Eigen::Vector3d r1 = a.segment_start(i), r2 = a.segment_end(i);
        double s = 0.0;
        for (std::size_t j = 0; j < b.segment_count(); ++j)
          s += detail::segment_pair_linking(r1, r2, b.segment_start(j), b.segment_end(j));
        return s;
      },
      8);
}

// ---------------------------------------------------------------------------
// Linking forms

struct LinkingForm {
  int level = 0;
  DifferentialForm omega;
  DifferentialForm eta;      // d omega
  double support_gap = 0.0;  // eta vanishes within this distance of the embedded sphere
  // Construction data.
  Vec p_plus, p_minus;       // images of the S^0 points (+1, 0, ...) and (-1, 0, ...)
  double bump_radius = 0.0;  // omega_0 is +-1 within this radius of p_plus / p_minus
  double tube_radius = 0.0;
};

namespace detail {

/// Smooth step S(u): 0 for u <= 0, 1 for u >= 1, with S' and S''.
struct SmoothStep {
  static double e(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }
  static double de(double u) { return u > 0.0 ? e(u) / (u * u) : 0.0; }
  static double dde(double u) { return u > 0.0 ? e(u) * (1.0 / (u * u * u * u) - 2.0 / (u * u * u)) : 0.0; }

  static void eval(double u, double& s, double& ds, double& dds) {
    if (u <= 0.0) {
      s = ds = dds = 0.0;
      return;
    }
    if (u >= 1.0) {
      s = 1.0;
      ds = dds = 0.0;
      return;
    }
    const double a = e(u), b = e(1.0 - u);
    const double a1 = de(u), b1 = -de(1.0 - u);
    const double a2 = dde(u), b2 = dde(1.0 - u);
    const double d = a + b, d1 = a1 + b1;
    const double num = a1 * b - a * b1;
    const double num1 = a2 * b - a * b2;
    s = a / d;
    ds = num / (d * d);
    dds = (num1 * d - 2.0 * num * d1) / (d * d * d);
  }
};

/// Radial plateau B(|x - center|): 1 for r <= rho, 0 for r >= 2 rho.
struct Plateau {
  Vec center;
  double rho;

  void eval(const Vec& x, double& value, Vec* grad, Mat* hess) const {
    const Vec dx = x - center;
    const double r = dx.norm();
    double s, ds, dds;
    SmoothStep::eval((r - rho) / rho, s, ds, dds);
    value = 1.0 - s;
    const auto n = x.size();
    if (grad) *grad = Vec::Zero(n);
    if (hess) *hess = Mat::Zero(n, n);
    if (ds == 0.0 && dds == 0.0) return;
    const double b1 = -ds / rho, b2 = -dds / (rho * rho);
    const Vec u = dx / r;
    if (grad) *grad = b1 * u;
    if (hess) *hess = b2 * (u * u.transpose()) + (b1 / r) * (Mat::Identity(n, n) - u * u.transpose());
  }
};

/// omega_0 = B(|x - P+|) - B(|x - P-|) with exact derivatives.
inline ScalarField dipole_field(const Vec& plus, const Vec& minus, double rho) {
  const Plateau bp{plus, rho}, bm{minus, rho};
  const int n = static_cast<int>(plus.size());
  return ScalarField::callable(
      n,
      [bp, bm](const Vec& x) {
        double a, b;
        bp.eval(x, a, nullptr, nullptr);
        bm.eval(x, b, nullptr, nullptr);
        return a - b;
      },
      [bp, bm](const Vec& x) -> Vec {
        double a, b;
        Vec ga, gb;
        bp.eval(x, a, &ga, nullptr);
        bm.eval(x, b, &gb, nullptr);
        return ga - gb;
      },
      [bp, bm](const Vec& x) -> Mat {
        double a, b;
        Mat ha, hb;
        bp.eval(x, a, nullptr, &ha);
        bm.eval(x, b, nullptr, &hb);
        return ha - hb;
      });
}

/// Distance to a polyline and its gradient.
inline double polyline_distance(const std::vector<Vec>& pts, const Vec& x, Vec* grad) {
  double best = std::numeric_limits<double>::infinity();
  Vec best_point;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Vec c = closest_on_segment(x, pts[i], pts[i + 1]);
    const double d = (x - c).norm();
    if (d < best) {
      best = d;
      best_point = c;
    }
  }
  if (grad) *grad = best > 0.0 ? Vec((x - best_point) / best) : Vec(Vec::Zero(x.size()));
  return best;
}

/// Partition chi = psi(d+) / (psi(d+) + psi(d-)), psi(d) = exp(-tau / (d - tau))
/// for d > tau and 0 otherwise: chi = 0 within tau of arc+, 1 within tau of arc-.
struct ArcPartition {
  std::vector<Vec> arc_plus, arc_minus;
  double tau;

  static void psi(double d, double tau, double& v, double& dv) {
    if (d <= tau) {
      v = dv = 0.0;
      return;
    }
    const double s = d - tau;
    v = std::exp(-tau / s);
    dv = v * tau / (s * s);
  }

  void eval(const Vec& x, double& chi, Vec& grad) const {
    Vec gp, gm;
    const double dp = polyline_distance(arc_plus, x, &gp);
    const double dm = polyline_distance(arc_minus, x, &gm);
    double pp, dpp, pm, dpm;
    psi(dp, tau, pp, dpp);
    psi(dm, tau, pm, dpm);
    const double sum = pp + pm;
    if (!(sum > 0.0)) throw DegenerateInput("linking form: partition undefined (point within tau of both arcs)");
    chi = pp / sum;
    grad = (dpp * pm * gp - pp * dpm * gm) / (sum * sum);
  }
};

}  // namespace detail

/// Inductive linking form for an embedded S^0 (k = 0, phi: R -> R^N evaluated
/// at +-1) or S^1 (k = 1, phi: R^2 -> R^N on the unit circle).
///
/// k = 0: omega_0 = B(|x - phi(1)|) - B(|x - phi(-1)|) with plateau radius
///        rho = tube_radius, so the S^0 integral omega_0(phi(1)) - omega_0(phi(-1))
///        equals 2.
/// k = 1: eta_0 = d omega_0 (rho = 2 tube_radius) is split by the partition chi
///        subordinate to the tubes around the upper and lower arcs;
///        omega_1 = chi eta_0 and eta_1 = d omega_1 vanishes within tube_radius
///        of the curve.
inline LinkingForm mv_induction_build(const SmoothMap& phi, int k, double tube_radius, std::size_t arc_samples = 512) {
  require(k == 0 || k == 1, "mv_induction_build: only k = 0 and k = 1 are supported");
  require(tube_radius > 0.0, "mv_induction_build: tube radius must be positive");
  require(phi.domain_dim() == k + 1, "mv_induction_build: map domain must be R^{k+1}");
  const int n = phi.codomain_dim();
  Vec e_plus = Vec::Zero(k + 1), e_minus = Vec::Zero(k + 1);
  e_plus[0] = 1.0;
  e_minus[0] = -1.0;
  LinkingForm out;
  out.level = k;
  out.tube_radius = tube_radius;
  out.p_plus = phi(e_plus);
  out.p_minus = phi(e_minus);
  const double sep = (out.p_plus - out.p_minus).norm();

  if (k == 0) {
    require(sep > 4.0 * tube_radius, "mv_induction_build: images of S^0 closer than 4 tube radii");
    out.bump_radius = tube_radius;
    out.omega = DifferentialForm::function(detail::dipole_field(out.p_plus, out.p_minus, tube_radius));
    out.eta = exterior_d(out.omega);
    out.support_gap = tube_radius;
    return out;
  }

  const double tau = tube_radius;
  const double rho = 2.0 * tau;
  require(sep > 8.0 * tau, "mv_induction_build: phi(1, 0) and phi(-1, 0) closer than 8 tube radii");
  detail::ArcPartition part;
  part.tau = tau;
  for (std::size_t i = 0; i <= arc_samples; ++i) {
    const double th = kPi * static_cast<double>(i) / arc_samples;
    part.arc_plus.push_back(phi(Eigen::Vector2d(std::cos(th), std::sin(th))));
    part.arc_minus.push_back(phi(Eigen::Vector2d(std::cos(kPi + th), std::sin(kPi + th))));
  }
  auto check_arc = [&](const std::vector<Vec>& arc, const std::vector<Vec>& other) {
    for (const auto& a : arc) {
      if ((a - out.p_plus).norm() <= 2.0 * tau || (a - out.p_minus).norm() <= 2.0 * tau) continue;
      require(detail::polyline_distance(other, a, nullptr) > 2.0 * tau,
              "mv_induction_build: arcs closer than 2 tube radii away from their endpoints");
    }
  };
  check_arc(part.arc_plus, part.arc_minus);
  check_arc(part.arc_minus, part.arc_plus);

  const ScalarField omega0 = detail::dipole_field(out.p_plus, out.p_minus, rho);
  out.bump_radius = rho;
  DifferentialForm omega(n, 1);
  for (int i = 0; i < n; ++i) {
    omega.add_term(
        {i}, ScalarField::callable(
                 n,
                 [omega0, part, i](const Vec& x) {
                   const double g = omega0.gradient(x)[i];
                   if (g == 0.0) return 0.0;
                   double chi;
                   Vec gchi;
                   part.eval(x, chi, gchi);
                   return chi * g;
                 },
                 [omega0, part, i](const Vec& x) -> Vec {
                   const Vec g = omega0.gradient(x);
                   const Mat h = omega0.hessian(x);
                   if (g.isZero(0.0) && h.isZero(0.0)) return Vec::Zero(x.size());
                   double chi;
                   Vec gchi;
                   part.eval(x, chi, gchi);
                   return gchi * g[i] + chi * h.row(i).transpose();
                 }));
  }
  out.omega = std::move(omega);
  out.eta = exterior_d(out.omega);
  out.support_gap = tau;
  return out;
}

// ---------------------------------------------------------------------------
// Analytic linking

struct AnalyticLinking {
  double value = 0.0;
  std::vector<double> eps;
  std::vector<double> integrals;  // int phi_eps^* omega per eps
  std::vector<double> defects;    // |I_i - I_{i+1}|
  bool converged = true;          // false: defects do not decrease ("no convergence evidence")
  bool extrapolated = false;
};

namespace detail {

/// Largest |d omega| coefficient over the given points.
inline double max_exterior_derivative(const DifferentialForm& omega, const std::vector<Vec>& points) {
  const DifferentialForm eta = exterior_d(omega);
  double worst = 0.0;
  for (const auto& p : points)
    for (const auto& [idx, f] : eta.terms()) worst = std::max(worst, std::abs(f(p)));
  return worst;
}

inline void finish_linking(AnalyticLinking& out) {
  out.defects.clear();
  for (std::size_t i = 0; i + 1 < out.integrals.size(); ++i)
    out.defects.push_back(std::abs(out.integrals[i] - out.integrals[i + 1]));
  out.converged = true;
  for (std::size_t i = 0; i + 1 < out.defects.size(); ++i)
    if (!(out.defects[i + 1] < out.defects[i]) && out.defects[i] > 1e-13) out.converged = false;
  out.value = out.integrals.back();
  out.extrapolated = false;
  if (out.integrals.size() >= 3) {
    std::vector<std::pair<double, double>> seq;
    for (std::size_t i = 0; i < out.eps.size(); ++i) seq.emplace_back(out.eps[i], out.integrals[i]);
    const RichardsonResult r = richardson_limit(seq);
    if (r.order_defined && r.order > 0.0 && std::isfinite(r.limit)) {
      out.value = r.limit;
      out.extrapolated = true;
    }
  }
}

inline void check_eps_list(const std::vector<double>& eps) {
  require(eps.size() >= 3, "analytic_linking: need at least three eps values");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    require(eps[i] > 0.0, "analytic_linking: eps must be positive");
    if (i > 0) require(eps[i] < eps[i - 1], "analytic_linking: eps list must be decreasing");
  }
}

}  // namespace detail

/// Smooth phi needs no mollification: the value is the pullback integral and
/// every defect is zero. With `check_support`, d omega must vanish (below
/// `support_tol`) at the images of the mesh vertices.
inline AnalyticLinking analytic_linking(const SmoothMap& phi, const DifferentialForm& omega,
                                        const SimplicialSphereMesh& mesh, const std::vector<double>& eps_list,
                                        bool check_support = true, double support_tol = 1e-10) {
  detail::check_eps_list(eps_list);
  require(omega.degree() == mesh.k, "analytic_linking: form degree differs from sphere dimension");
  if (check_support) {
    std::vector<Vec> images;
    for (const auto& v : mesh.vertices) images.push_back(phi(v));
    require(detail::max_exterior_derivative(omega, images) <= support_tol,
            "analytic_linking: d omega does not vanish on the image of the sphere");
  }
  const double value = integrate_pullback(phi, omega, mesh);
  AnalyticLinking out;
  out.eps = eps_list;
  out.integrals.assign(eps_list.size(), value);
  detail::finish_linking(out);
  out.value = value;
  out.extrapolated = false;
  return out;
}

/// Sampled closed curve (torus T^1 grid): phi_eps by periodic convolution,
/// int phi_eps^* omega by the trapezoid rule (spectrally accurate for periodic
/// integrands), then Cauchy defects and Richardson extrapolation in eps.
inline AnalyticLinking analytic_linking(const SampledMap& phi, const DifferentialForm& omega,
                                        const std::vector<double>& eps_list, const MollifierKernel& kernel = {},
                                        bool check_support = true, double support_tol = 1e-10) {
  detail::check_eps_list(eps_list);
  require(phi.domain == DomainKind::Torus && phi.param_dim == 1,
          "analytic_linking: sampled maps must live on the circle T^1");
  require(omega.degree() == 1, "analytic_linking: need a 1-form for a curve");
  require(omega.dim() == phi.codim(), "analytic_linking: form lives on wrong space");
  if (check_support)
    require(detail::max_exterior_derivative(omega, phi.values) <= support_tol,
            "analytic_linking: d omega does not vanish on the image of the curve");
  AnalyticLinking out;
  out.eps = eps_list;
  const double h = phi.spacing();
  for (double eps : eps_list) {
    const SampledMap smooth = mollify(phi, eps, kernel);
    const double integral = h * chunked_sum(smooth.size(), [&](std::size_t i) {
      return evaluate_form(omega, smooth.values[i], smooth.jacobians[i]);
    });
    out.integrals.push_back(integral);
  }
  detail::finish_linking(out);
  return out;
}

// ---------------------------------------------------------------------------
// Horizontality obstruction

/// Continuous mollification of a map given on the closed unit ball of R^D:
/// outside the ball it is extended by Phi(x / |x|). The convolution with the
/// eps-rescaled kernel uses a tensor Gauss-Legendre rule on [-1, 1]^D;
/// derivative weights are normalised to reproduce linear maps.
inline SmoothMap mollify_on_ball(const SmoothMap& phi, double eps, const MollifierKernel& kernel = {},
                                 int nodes_per_axis = 24) {
  require(eps > 0.0, "mollify_on_ball: eps must be positive");
  const int dim = phi.domain_dim();
  require(dim >= 1 && dim <= 3, "mollify_on_ball: domain dimension must be 1..3");
  std::vector<double> gx, gw;
  gauss_legendre(nodes_per_axis, gx, gw);
  std::vector<Vec> offsets;
  std::vector<double> weights;
  std::vector<Vec> dweights;
  std::vector<int> idx(dim, 0);
  double mass = 0.0;
  Vec moment = Vec::Zero(dim);
  for (;;) {
    Vec y(dim);
    double w = 1.0;
    for (int a = 0; a < dim; ++a) {
      y[a] = gx[idx[a]];
      w *= gw[idx[a]];
    }
    const double r2 = y.squaredNorm();
    const double kv = kernel(r2);
    if (kv > 0.0) {
      offsets.push_back(y);
      weights.push_back(w * kv);
      const Vec g = w * 2.0 * kernel.derivative(r2) * y;
      dweights.push_back(g);
      mass += w * kv;
      moment -= g.cwiseProduct(y);
    }
    int a = dim - 1;
    while (a >= 0 && ++idx[a] == nodes_per_axis) idx[a--] = 0;
    if (a < 0) break;
  }
  for (auto& w : weights) w /= mass;
  for (auto& g : dweights) g = g.cwiseQuotient(moment) / eps;
  auto extended = [phi](const Vec& x) {
    const double r = x.norm();
    return r <= 1.0 ? phi(x) : phi(x / r);
  };
  auto value = [=](const Vec& x) {
    Vec acc = Vec::Zero(phi.codomain_dim());
    for (std::size_t q = 0; q < offsets.size(); ++q) acc += weights[q] * extended(x - eps * offsets[q]);
    return acc;
  };
  auto jacobian = [=](const Vec& x) -> Mat {
    Mat acc = Mat::Zero(phi.codomain_dim(), dim);
    for (std::size_t q = 0; q < offsets.size(); ++q) acc += extended(x - eps * offsets[q]) * dweights[q].transpose();
    return acc;
  };
  return SmoothMap::callable(dim, phi.codomain_dim(), value, jacobian);
}

struct ObstructionSweep {
  std::vector<double> eps;
  std::vector<double> values;    // |int_{S^k} Phi_eps^* kappa|
  std::vector<double> interior;  // int_B Phi_eps^* d kappa (when requested)
  double predicted_slope = 0.0;  // 2 nu - 1 + k (nu - 1)
  LineFit fit;                   // log value against log eps
  bool fit_valid = false;
};

/// Boundary integrals of mollified pullbacks for a map Phi: B^{k+1} -> H_n of
/// class C^nu. With `with_interior`, also the flat-ball integral of
/// Phi_eps^* d kappa for a Stokes cross-check.
inline ObstructionSweep horizontality_obstruction_test(const SmoothMap& phi, const DifferentialForm& kappa,
                                                       const BallMesh& ball, const std::vector<double>& eps_list,
                                                       int n, double nu, const MollifierKernel& kernel = {},
                                                       bool with_interior = false) {
  const int k = kappa.degree();
  require(ball.dim == k + 1, "horizontality_obstruction_test: ball dimension must be deg(kappa) + 1");
  require(phi.domain_dim() == ball.dim, "horizontality_obstruction_test: map domain differs from ball");
  require(phi.codomain_dim() == 2 * n + 1 && kappa.dim() == 2 * n + 1,
          "horizontality_obstruction_test: map and form must live on R^{2n+1}");
  require(k >= n, "horizontality_obstruction_test: needs deg(kappa) >= n");
  require(!eps_list.empty(), "horizontality_obstruction_test: empty eps list");
  ObstructionSweep out;
  out.eps = eps_list;
  out.predicted_slope = 2.0 * nu - 1.0 + k * (nu - 1.0);
  const SimplicialSphereMesh boundary = ball_boundary(ball);
  const QuadratureRule rule = simplex_rule(k, 4);
  const DifferentialForm dkappa = exterior_d(kappa);
  for (double eps : eps_list) {
    const SmoothMap smooth = mollify_on_ball(phi, eps, kernel);
    out.values.push_back(std::abs(integrate_pullback(smooth, kappa, boundary, rule)));
    if (with_interior) out.interior.push_back(integrate_pullback(smooth, dkappa, ball, simplex_rule(k + 1, 4)));
  }
  bool ok = eps_list.size() >= 2;
  for (double v : out.values) ok = ok && v > 0.0 && std::isfinite(v);
  out.fit_valid = ok;
  if (ok) out.fit = fit_loglog(out.eps, out.values);
  return out;
}

}  // namespace heislab

#endif  // HEISLAB_LINKING_HPP
