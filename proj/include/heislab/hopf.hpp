#ifndef HEISLAB_HOPF_HPP
#define HEISLAB_HOPF_HPP

// Hopf invariant of maps S^3 -> S^2: linking number of two extracted fibers,
// and the integral of omega ^ phi^* eta for a supplied primitive omega.

#include <heislab/common.hpp>
#include <heislab/forms.hpp>
#include <heislab/linking.hpp>
#include <heislab/parallel.hpp>
#include <heislab/sphere_mesh.hpp>

#include <Eigen/Geometry>

#include <array>
#include <map>
#include <optional>
#include <vector>

namespace heislab {

/// Unit vectors of S^2 at the vertices of a mesh of S^3. Inside a
/// tetrahedron the map is the normalised linear interpolant.
struct SphereMapSample {
  SimplicialSphereMesh mesh;
  std::vector<Eigen::Vector3d> values;
};

inline SphereMapSample sample_sphere_map(const SmoothMap& f, const SimplicialSphereMesh& mesh) {
  require(mesh.k == 3, "sample_sphere_map: need a mesh of S^3");
  require(f.domain_dim() == 4 && f.codomain_dim() == 3, "sample_sphere_map: map must go from R^4 to R^3");
  SphereMapSample s;
  s.mesh = mesh;
  for (const auto& v : mesh.vertices) {
    const Eigen::Vector3d y = f(v);
    const double len = y.norm();
    require(len > 0.0 && std::isfinite(len), "sample_sphere_map: map value vanishes");
    s.values.push_back(y / len);
  }
  return s;
}

struct FiberOptions {
  double vertex_gap = 1e-6;  // reject p closer than this to a vertex value
  double max_spread = 1.0;   // largest allowed chord between values inside a tetrahedron
};

namespace detail {

/// Oriented orthonormal basis (e1, e2) of the plane orthogonal to unit p, with
/// (p, e1, e2) positively oriented.
inline std::pair<Eigen::Vector3d, Eigen::Vector3d> plane_basis(const Eigen::Vector3d& p) {
  Eigen::Vector3d a = std::abs(p[0]) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  const Eigen::Vector3d e1 = (a - a.dot(p) * p).normalized();
  return {e1, p.cross(e1)};
}

using FaceKey = std::array<int, 3>;

inline FaceKey face_key(int a, int b, int c) {
  FaceKey k{a, b, c};
  std::sort(k.begin(), k.end());
  return k;
}

}  // namespace detail

/// Preimage of p as closed PL curves on S^3 (points re-projected to the
/// sphere). Each fiber crosses a tetrahedron between two faces where the
/// interpolated value is parallel to p; segments are oriented so that
/// (T, grad g1, grad g2) is positive for the components g of the value in
/// the plane orthogonal to p.
inline std::vector<PLCurve> extract_fiber(const SphereMapSample& map, const Eigen::Vector3d& p_in,
                                          const FiberOptions& opt = {}) {
  require(map.mesh.k == 3, "extract_fiber: need a mesh of S^3");
  require(map.values.size() == map.mesh.vertices.size(), "extract_fiber: one value per vertex required");
  require(std::abs(p_in.norm() - 1.0) < 1e-9, "extract_fiber: p must be a unit vector");
  const Eigen::Vector3d p = p_in.normalized();
  for (const auto& v : map.values)
    if ((v - p).norm() < opt.vertex_gap) throw DegenerateInput("extract_fiber: p hits a vertex value; perturb p and retry");
  const auto [e1, e2] = detail::plane_basis(p);

  struct Segment {
    detail::FaceKey from, to;
    Vec a, b;
  };
  const std::size_t nt = map.mesh.simplices.size();
  auto per_chunk = map_chunks<std::vector<Segment>>(nt, 256, [&](std::size_t lo, std::size_t hi) {
    std::vector<Segment> out;
    for (std::size_t t = lo; t < hi; ++t) {
      const auto& s = map.mesh.simplices[t];
      double spread = 0.0;
      bool near = false;
      for (int i = 0; i < 4; ++i) {
        near = near || map.values[s[i]].dot(p) > 0.0;
        for (int j = i + 1; j < 4; ++j) spread = std::max(spread, (map.values[s[i]] - map.values[s[j]]).norm());
      }
      if (!near) continue;
      if (spread >= opt.max_spread)
        throw InvalidArgument("extract_fiber: tetrahedron value spread too large; refine the mesh");
      Eigen::Vector2d g[4];
      for (int i = 0; i < 4; ++i) g[i] = {map.values[s[i]].dot(e1), map.values[s[i]].dot(e2)};
      // Zero of the plane component on each face.
      std::vector<std::pair<detail::FaceKey, Vec>> hits;
      for (int skip = 0; skip < 4; ++skip) {
        int f[3], m = 0;
        for (int i = 0; i < 4; ++i)
          if (i != skip) f[m++] = i;
        Eigen::Matrix3d a;
        for (int c = 0; c < 3; ++c) a.col(c) << g[f[c]], 1.0;
        // Singular when two face values coincide; the zero set then misses the face.
        if (std::abs(a.determinant()) < 1e-14) continue;
        const Eigen::Vector3d lam = a.partialPivLu().solve(Eigen::Vector3d(0.0, 0.0, 1.0));
        if (!(lam.minCoeff() >= 0.0)) continue;
        Eigen::Vector3d val = Eigen::Vector3d::Zero();
        Vec x = Vec::Zero(4);
        for (int c = 0; c < 3; ++c) {
          val += lam[c] * map.values[s[f[c]]];
          x += lam[c] * map.mesh.vertices[s[f[c]]];
        }
        if (val.dot(p) <= 0.0) continue;
        hits.emplace_back(detail::face_key(s[f[0]], s[f[1]], s[f[2]]), x);
      }
      if (hits.empty()) continue;
      if (hits.size() != 2) throw DegenerateInput("extract_fiber: fiber passes through a mesh edge; perturb p and retry");
      // Kernel direction of the linear map mu -> G mu in tetrahedron coordinates.
      Eigen::Matrix<double, 2, 3> gm;
      Mat edges(4, 3);
      for (int c = 0; c < 3; ++c) {
        gm.col(c) = g[c + 1] - g[0];
        edges.col(c) = map.mesh.vertices[s[c + 1]] - map.mesh.vertices[s[0]];
      }
      const Eigen::Vector3d r1 = gm.row(0).transpose(), r2 = gm.row(1).transpose();
      const Vec tangent = edges * r1.cross(r2);
      Segment seg{hits[0].first, hits[1].first, hits[0].second, hits[1].second};
      if ((seg.b - seg.a).dot(tangent) < 0.0) {
        std::swap(seg.from, seg.to);
        std::swap(seg.a, seg.b);
      }
      out.push_back(std::move(seg));
    }
    return out;
  });

  std::vector<Segment> segments;
  for (auto& c : per_chunk)
    for (auto& s : c) segments.push_back(std::move(s));
  std::map<detail::FaceKey, std::size_t> by_start;
  for (std::size_t i = 0; i < segments.size(); ++i)
    if (!by_start.emplace(segments[i].from, i).second)
      throw DegenerateInput("extract_fiber: inconsistent fiber orientation; perturb p and retry");
  std::vector<bool> used(segments.size(), false);
  std::vector<PLCurve> curves;
  for (std::size_t start = 0; start < segments.size(); ++start) {
    if (used[start]) continue;
    PLCurve c;
    std::size_t cur = start;
    while (!used[cur]) {
      used[cur] = true;
      c.points.push_back(segments[cur].a.normalized());
      const auto it = by_start.find(segments[cur].to);
      if (it == by_start.end()) throw DegenerateInput("extract_fiber: open fiber; perturb p and retry");
      cur = it->second;
    }
    if (cur != start) throw DegenerateInput("extract_fiber: fiber branches; perturb p and retry");
    if (c.points.size() >= 3) curves.push_back(std::move(c));
  }
  return curves;
}

/// Stereographic projection of S^3 from the unit pole N onto the hyperplane
/// orthogonal to N, in an orthonormal basis (b1, b2, b3) with
/// det[N, b1, b2, b3] < 0.
struct Stereographic {
  Eigen::Vector4d pole;
  Eigen::Matrix<double, 4, 3> basis;

  explicit Stereographic(const Vec& n) {
    require(n.size() == 4 && std::abs(n.norm() - 1.0) < 1e-9, "Stereographic: pole must be a unit vector in R^4");
    pole = n;
    Eigen::Matrix4d m;
    m.col(0) = pole;
    int c = 1;
    for (int i = 0; i < 4 && c < 4; ++i) {
      Eigen::Vector4d v = Eigen::Vector4d::Unit(i);
      for (int j = 0; j < c; ++j) v -= v.dot(m.col(j)) * m.col(j);
      if (v.norm() > 1e-6) m.col(c++) = v.normalized();
    }
    if (m.determinant() > 0.0) m.col(3) = -m.col(3);
    basis = m.rightCols<3>();
  }

  Vec operator()(const Vec& x) const {
    const double denom = 1.0 - pole.dot(x);
    require(denom > 0.0, "Stereographic: point at the pole");
    return basis.transpose() * x / denom;
  }
};

struct HopfFiberResult {
  double value = 0.0;
  Eigen::Vector3d p, q;  // regular values actually used (after any perturbation)
  Vec pole;
  double pole_distance = 0.0;  // distance from the pole to the nearest fiber point
  std::size_t fibers_p = 0, fibers_q = 0;
};

namespace detail {

inline double distance_to_curves(const Vec& x, const std::vector<PLCurve>& curves) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : curves)
    for (const auto& pt : c.points) best = std::min(best, (pt - x).norm());
  return best;
}

inline std::vector<Vec> pole_candidates() {
  std::vector<Vec> out;
  for (int i = 0; i < 4; ++i)
    for (double s : {1.0, -1.0}) out.push_back(s * Vec(Eigen::Vector4d::Unit(i)));
  for (int m = 0; m < 16; ++m) {
    Vec v(4);
    for (int i = 0; i < 4; ++i) v[i] = (m >> i) & 1 ? 0.5 : -0.5;
    out.push_back(v);
  }
  return out;
}

}  // namespace detail

/// Fibers over p, perturbing p by small deterministic rotations while the
/// extraction reports a degenerate position.
inline std::vector<PLCurve> extract_fiber_perturbed(const SphereMapSample& map, Eigen::Vector3d& p,
                                                    const FiberOptions& opt = {}, int attempts = 8) {
  Rng rng(0x5eedULL);
  for (int i = 0;; ++i) {
    try {
      return extract_fiber(map, p, opt);
    } catch (const DegenerateInput&) {
      if (i + 1 >= attempts) throw;
      const Eigen::Vector3d axis = random_unit_vector(rng, 3);
      p = Eigen::AngleAxisd(1e-3, axis) * p;
    }
  }
}

/// Linking number of the fibers over p and q after stereographic projection.
/// Without an explicit pole, the candidate farthest from both fibers is used.
inline HopfFiberResult hopf_via_fibers(const SphereMapSample& map, const Eigen::Vector3d& p, const Eigen::Vector3d& q,
                                       std::optional<Vec> pole = std::nullopt, const FiberOptions& opt = {}) {
  require((p - q).norm() > 1e-9, "hopf_via_fibers: p and q must differ");
  HopfFiberResult out;
  out.p = p.normalized();
  out.q = q.normalized();
  const auto fp = extract_fiber_perturbed(map, out.p, opt);
  const auto fq = extract_fiber_perturbed(map, out.q, opt);
  out.fibers_p = fp.size();
  out.fibers_q = fq.size();
  auto clearance = [&](const Vec& n) { return std::min(detail::distance_to_curves(n, fp), detail::distance_to_curves(n, fq)); };
  if (pole) {
    require(pole->size() == 4, "hopf_via_fibers: pole must lie in R^4");
    out.pole = pole->normalized();
  } else {
    double best = -1.0;
    for (const auto& c : detail::pole_candidates()) {
      const double d = clearance(c);
      if (d > best) {
        best = d;
        out.pole = c.normalized();
      }
    }
  }
  out.pole_distance = clearance(out.pole);
  if (out.pole_distance < 0.1) throw DegenerateInput("hopf_via_fibers: projection pole closer than 0.1 to a fiber; retry with another pole");
  if (fp.empty() || fq.empty()) return out;
  const Stereographic proj(out.pole);
  auto project = [&](const std::vector<PLCurve>& cs) {
    std::vector<PLCurve> r;
    for (const auto& c : cs) {
      PLCurve pc;
      for (const auto& pt : c.points) pc.points.push_back(proj(pt));
      r.push_back(std::move(pc));
    }
    return r;
  };
  const auto pp = project(fp), pq = project(fq);
  for (const auto& a : pp)
    for (const auto& b : pq) out.value += gauss_linking(a, b);
  return out;
}

/// normalize(0.3 (x1, x2, x3) + e3): image in an open hemisphere, hence
/// null-homotopic with Hopf invariant 0.
inline SmoothMap null_homotopic_map() {
  return SmoothMap::callable(4, 3, [](const Vec& x) {
    const Eigen::Vector3d y(0.3 * x[0], 0.3 * x[1], 0.3 * x[2] + 1.0);
    return Vec(y.normalized());
  });
}

// ---------------------------------------------------------------------------
// Form-based invariant

/// Area form of S^2 with total integral one: (x dy^dz - y dx^dz + z dx^dy) / (4 pi).
inline DifferentialForm hopf_area_form() {
  DifferentialForm eta(3, 2);
  const double c = 1.0 / (4.0 * kPi);
  eta.add_term({1, 2}, c * Polynomial::variable(3, 0));
  eta.add_term({0, 2}, -c * Polynomial::variable(3, 1));
  eta.add_term({0, 1}, c * Polynomial::variable(3, 2));
  return eta;
}

/// c (x1 dx2 - x2 dx1 + x3 dx4 - x4 dx3) on R^4; c = -1/(2 pi) is a primitive
/// of the pullback of hopf_area_form under the gallery Hopf map.
inline DifferentialForm hopf_primitive(double c = -1.0 / (2.0 * kPi)) {
  DifferentialForm w(4, 1);
  auto x = [](int i) { return Polynomial::variable(4, i); };
  w.add_term({1}, c * x(0));
  w.add_term({0}, -c * x(1));
  w.add_term({3}, c * x(2));
  w.add_term({2}, -c * x(3));
  return w;
}

/// Largest |d omega - phi^* eta| on pairs of orthonormal tangent vectors of S^3
/// at the mesh vertices.
inline double primitive_defect(const SmoothMap& map, const DifferentialForm& eta, const DifferentialForm& omega,
                               const SimplicialSphereMesh& mesh) {
  const DifferentialForm d_omega = exterior_d(omega);
  const DifferentialForm pulled = pullback(map, eta);
  auto partial = map_chunks<double>(mesh.vertices.size(), 128, [&](std::size_t lo, std::size_t hi) {
    double worst = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const Vec& x = mesh.vertices[i];
      // x with the three unit vectors other than its largest axis is a basis.
      Eigen::Index big = 0;
      x.cwiseAbs().maxCoeff(&big);
      Mat frame(4, 4);
      frame.col(0) = x;
      for (int a = 0, c = 1; a < 4; ++a)
        if (a != big) frame.col(c++) = Vec::Unit(4, a);
      Eigen::HouseholderQR<Mat> qr(frame);
      const Mat q = qr.householderQ();
      for (int a = 1; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
          Mat v(4, 2);
          v.col(0) = q.col(a);
          v.col(1) = q.col(b);
          worst = std::max(worst, std::abs(evaluate_form(d_omega, x, v) - evaluate_form(pulled, x, v)));
        }
    }
    return worst;
  });
  return *std::max_element(partial.begin(), partial.end());
}

/// H(phi) = int_{S^3} omega ^ phi^* eta, after checking d omega = phi^* eta on
/// the sphere to within `tolerance`.
inline double hopf_via_forms(const SmoothMap& map, const DifferentialForm& eta, const DifferentialForm& omega,
                             const SimplicialSphereMesh& mesh, double tolerance = 1e-6) {
  require(mesh.k == 3, "hopf_via_forms: need a mesh of S^3");
  require(map.domain_dim() == 4 && map.codomain_dim() == 3, "hopf_via_forms: map must go from R^4 to R^3");
  require(eta.dim() == 3 && eta.degree() == 2, "hopf_via_forms: eta must be a 2-form on R^3");
  require(omega.dim() == 4 && omega.degree() == 1, "hopf_via_forms: omega must be a 1-form on R^4");
  require(primitive_defect(map, eta, omega, mesh) < tolerance,
          "hopf_via_forms: omega is not a primitive of phi^* eta on S^3");
  const DifferentialForm integrand = wedge(omega, pullback(map, eta));
  return integrate_pullback(SmoothMap::identity(4), integrand, mesh);
}

}  // namespace heislab

#endif  // HEISLAB_HOPF_HPP
