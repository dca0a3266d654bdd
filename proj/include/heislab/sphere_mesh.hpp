#ifndef HEISLAB_SPHERE_MESH_HPP
#define HEISLAB_SPHERE_MESH_HPP

// Oriented simplicial spheres S^k (k = 1, 2, 3) and cone-built balls, with
// quadrature of pulled-back forms.
//
// Orientation convention: a simplex (v_0, ..., v_k) of S^k is positive when
// det[v_0, ..., v_k] > 0, i.e. outward normal followed by the simplex frame.
// A ball simplex (w_0, ..., w_{k+1}) is positive when det[w_1 - w_0, ...] > 0.

#include <heislab/common.hpp>
#include <heislab/forms.hpp>
#include <heislab/parallel.hpp>
#include <heislab/quadrature.hpp>

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <array>
#include <limits>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace heislab {

using Simplex = std::vector<int>;

struct SimplicialSphereMesh {
  int k = 0;
  int level = 0;
  std::vector<Vec> vertices;     // unit vectors in R^{k+1}
  std::vector<Simplex> simplices;  // k+1 vertex indices each

  /// Longest edge.
  double max_edge() const {
    double h = 0.0;
    for (const auto& s : simplices)
      for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) h = std::max(h, (vertices[s[i]] - vertices[s[j]]).norm());
    return h;
  }
};

struct BallMesh {
  int dim = 0;  // k+1
  int level = 0;
  int layers = 0;
  std::vector<Vec> vertices;
  std::vector<Simplex> simplices;  // dim+1 vertex indices each

  double max_edge() const {
    double h = 0.0;
    for (const auto& s : simplices)
      for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) h = std::max(h, (vertices[s[i]] - vertices[s[j]]).norm());
    return h;
  }
};

namespace detail {

inline double simplex_det(const std::vector<Vec>& verts, const Simplex& s, bool affine) {
  const auto rows = verts[s[0]].size();
  if (affine) {
    Mat m(rows, static_cast<Eigen::Index>(s.size() - 1));
    for (std::size_t i = 1; i < s.size(); ++i) m.col(static_cast<Eigen::Index>(i - 1)) = verts[s[i]] - verts[s[0]];
    return m.determinant();
  }
  Mat m(rows, static_cast<Eigen::Index>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = verts[s[i]];
  return m.determinant();
}

inline void orient_positive(const std::vector<Vec>& verts, std::vector<Simplex>& simplices, bool affine) {
  for (auto& s : simplices)
    if (simplex_det(verts, s, affine) < 0.0) std::swap(s[0], s[1]);
}

class MidpointCache {
 public:
  explicit MidpointCache(std::vector<Vec>& verts) : verts_(verts) {}
  int operator()(int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    verts_.push_back(0.5 * (verts_[a] + verts_[b]));
    const int id = static_cast<int>(verts_.size()) - 1;
    cache_.emplace(key, id);
    return id;
  }

 private:
  std::vector<Vec>& verts_;
  std::map<std::pair<int, int>, int> cache_;
};

inline SimplicialSphereMesh icosphere(int level) {
  const double phi = 0.5 * (1.0 + std::sqrt(5.0));
  const double raw[12][3] = {{-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0}, {0, -1, phi}, {0, 1, phi},
                             {0, -1, -phi}, {0, 1, -phi}, {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
  const int faces[20][3] = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                            {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                            {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  SimplicialSphereMesh mesh;
  mesh.k = 2;
  mesh.level = level;
  for (const auto& r : raw) mesh.vertices.push_back(Eigen::Vector3d(r[0], r[1], r[2]).normalized());
  for (const auto& f : faces) mesh.simplices.push_back({f[0], f[1], f[2]});
  for (int l = 0; l < level; ++l) {
    MidpointCache mid(mesh.vertices);
    std::vector<Simplex> next;
    next.reserve(4 * mesh.simplices.size());
    for (const auto& s : mesh.simplices) {
      const int a = mid(s[0], s[1]), b = mid(s[1], s[2]), c = mid(s[2], s[0]);
      next.push_back({s[0], a, c});
      next.push_back({a, s[1], b});
      next.push_back({c, b, s[2]});
      next.push_back({a, b, c});
    }
    mesh.simplices = std::move(next);
    for (auto& v : mesh.vertices) v.normalize();
  }
  return mesh;
}

/// Boundary of the cross-polytope in R^4, refined by Bey's 1->8 split of
/// tetrahedra (the interior octahedron is cut along the x02-x13 diagonal).
inline SimplicialSphereMesh sixteen_cell(int level) {
  SimplicialSphereMesh mesh;
  mesh.k = 3;
  mesh.level = level;
  for (int i = 0; i < 4; ++i)
    for (double sign : {1.0, -1.0}) {
      Vec v = Vec::Zero(4);
      v[i] = sign;
      mesh.vertices.push_back(v);
    }
  for (int mask = 0; mask < 16; ++mask) {
    Simplex s(4);
    for (int i = 0; i < 4; ++i) s[i] = 2 * i + ((mask >> i) & 1);
    mesh.simplices.push_back(s);
  }
  for (int l = 0; l < level; ++l) {
    MidpointCache mid(mesh.vertices);
    std::vector<Simplex> next;
    next.reserve(8 * mesh.simplices.size());
    for (const auto& s : mesh.simplices) {
      const int x0 = s[0], x1 = s[1], x2 = s[2], x3 = s[3];
      const int x01 = mid(x0, x1), x02 = mid(x0, x2), x03 = mid(x0, x3);
      const int x12 = mid(x1, x2), x13 = mid(x1, x3), x23 = mid(x2, x3);
      next.push_back({x0, x01, x02, x03});
      next.push_back({x01, x1, x12, x13});
      next.push_back({x02, x12, x2, x23});
      next.push_back({x03, x13, x23, x3});
      next.push_back({x01, x02, x03, x13});
      next.push_back({x01, x02, x12, x13});
      next.push_back({x02, x03, x13, x23});
      next.push_back({x02, x12, x13, x23});
    }
    mesh.simplices = std::move(next);
    for (auto& v : mesh.vertices) v.normalize();
  }
  return mesh;
}

}  // namespace detail

/// Oriented triangulation of the unit sphere S^k.
///   k = 1: regular 3 * 2^level-gon.
///   k = 2: icosahedron, each level splits triangles 1->4 and reprojects.
///   k = 3: 16-cell boundary, each level splits tetrahedra 1->8 and reprojects.
inline SimplicialSphereMesh make_sphere_mesh(int k, int level) {
  require(level >= 0, "make_sphere_mesh: level must be nonnegative");
  SimplicialSphereMesh mesh;
  switch (k) {
    case 1: {
      require(level <= 24, "make_sphere_mesh: level too large");
      mesh.k = 1;
      mesh.level = level;
      const int count = 3 << level;
      for (int i = 0; i < count; ++i) {
        const double a = 2.0 * kPi * i / count;
        mesh.vertices.push_back(Eigen::Vector2d(std::cos(a), std::sin(a)));
        mesh.simplices.push_back({i, (i + 1) % count});
      }
      break;
    }
    case 2:
      require(level <= 8, "make_sphere_mesh: level too large");
      mesh = detail::icosphere(level);
      break;
    case 3:
      require(level <= 6, "make_sphere_mesh: level too large");
      mesh = detail::sixteen_cell(level);
      break;
    default: throw InvalidArgument("make_sphere_mesh: k must be 1, 2 or 3");
  }
  detail::orient_positive(mesh.vertices, mesh.simplices, false);
  return mesh;
}

/// Same mesh with every simplex orientation reversed.
inline SimplicialSphereMesh reversed(SimplicialSphereMesh mesh) {
  for (auto& s : mesh.simplices) std::swap(s[0], s[1]);
  return mesh;
}

namespace detail {

/// Sorted copy of the face opposite vertex i, with the sign of the induced
/// orientation (-1)^i times the sorting parity.
inline int oriented_face(const Simplex& s, std::size_t i, Simplex& face) {
  face.clear();
  for (std::size_t j = 0; j < s.size(); ++j)
    if (j != i) face.push_back(s[j]);
  int sign = (i % 2 == 0) ? 1 : -1;
  for (std::size_t a = 1; a < face.size(); ++a)
    for (std::size_t b = a; b > 0 && face[b] < face[b - 1]; --b) {
      std::swap(face[b], face[b - 1]);
      sign = -sign;
    }
  return sign;
}

/// Sum of induced orientations per codimension-one face.
inline std::map<Simplex, std::vector<int>> face_incidence(const std::vector<Simplex>& simplices) {
  std::map<Simplex, std::vector<int>> faces;
  Simplex face;
  for (const auto& s : simplices)
    for (std::size_t i = 0; i < s.size(); ++i) {
      const int sign = oriented_face(s, i, face);
      faces[face].push_back(sign);
    }
  return faces;
}

}  // namespace detail

/// True iff every (k-1)-face is shared by exactly two simplices inducing
/// opposite orientations on it, and all vertices are unit vectors.
inline bool is_closed_oriented(const SimplicialSphereMesh& mesh, double unit_tol = 1e-14) {
  for (const auto& v : mesh.vertices)
    if (std::abs(v.norm() - 1.0) > unit_tol) return false;
  for (const auto& s : mesh.simplices)
    if (static_cast<int>(s.size()) != mesh.k + 1) return false;
  for (const auto& [face, signs] : detail::face_incidence(mesh.simplices))
    if (signs.size() != 2 || signs[0] + signs[1] != 0) return false;
  return true;
}

/// Cone of the level-`level` sphere mesh of S^k over the origin, with `layers`
/// uniform radial shells (0 picks 2^level, so all edge lengths halve together).
/// Prisms between shells are split by the staircase rule on global vertex
/// order, so neighbouring prisms match.
inline BallMesh make_ball_mesh(int k, int level, int layers = 0) {
  const SimplicialSphereMesh sphere = make_sphere_mesh(k, level);
  if (layers <= 0) layers = 1 << level;
  const int nv = static_cast<int>(sphere.vertices.size());
  BallMesh ball;
  ball.dim = k + 1;
  ball.level = level;
  ball.layers = layers;
  ball.vertices.push_back(Vec::Zero(k + 1));
  for (int j = 1; j <= layers; ++j)
    for (const auto& v : sphere.vertices) ball.vertices.push_back(v * (static_cast<double>(j) / layers));
  auto id = [nv](int layer, int v) { return layer == 0 ? 0 : 1 + (layer - 1) * nv + v; };
  for (const auto& s : sphere.simplices) {
    Simplex sorted = s;
    std::sort(sorted.begin(), sorted.end());
    Simplex cone{0};
    for (int v : sorted) cone.push_back(id(1, v));
    ball.simplices.push_back(cone);
    for (int j = 1; j < layers; ++j)
      for (int i = 0; i <= k; ++i) {
        Simplex cell;
        for (int a = 0; a <= i; ++a) cell.push_back(id(j, sorted[a]));
        for (int a = i; a <= k; ++a) cell.push_back(id(j + 1, sorted[a]));
        ball.simplices.push_back(cell);
      }
  }
  detail::orient_positive(ball.vertices, ball.simplices, true);
  return ball;
}

/// Faces of the ball mesh used by a single simplex, with the induced
/// orientation. For a cone-built ball this is the outer sphere.
inline SimplicialSphereMesh ball_boundary(const BallMesh& ball) {
  std::map<Simplex, std::pair<int, Simplex>> once;
  Simplex face;
  for (const auto& s : ball.simplices)
    for (std::size_t i = 0; i < s.size(); ++i) {
      const int sign = detail::oriented_face(s, i, face);
      auto it = once.find(face);
      if (it == once.end()) {
        Simplex oriented = face;
        if (sign < 0) std::swap(oriented[0], oriented[1]);
        once.emplace(face, std::make_pair(1, oriented));
      } else {
        ++it->second.first;
      }
    }
  SimplicialSphereMesh out;
  out.k = ball.dim - 1;
  out.level = ball.level;
  std::map<int, int> remap;
  for (const auto& [key, entry] : once) {
    if (entry.first != 1) continue;
    Simplex s;
    for (int v : entry.second) {
      auto [it, inserted] = remap.emplace(v, static_cast<int>(out.vertices.size()));
      if (inserted) out.vertices.push_back(ball.vertices[v]);
      s.push_back(it->second);
    }
    out.simplices.push_back(s);
  }
  return out;
}

/// Boundary of a closed complex: faces whose induced orientations do not cancel.
inline std::size_t unmatched_faces(const std::vector<Simplex>& simplices) {
  std::size_t count = 0;
  for (const auto& [face, signs] : detail::face_incidence(simplices)) {
    int total = 0;
    for (int s : signs) total += s;
    if (total != 0) ++count;
  }
  return count;
}

// ---------------------------------------------------------------------------
// Integration.

namespace detail {

/// Integral over one simplex, evaluated on the sorted vertex order and
/// multiplied by the sorting parity so that reversing orientation negates the
/// result exactly. `curved` selects the radial-projection chart onto the sphere.
inline double simplex_integral(const SmoothMap& f, const DifferentialForm& a, const std::vector<Vec>& verts,
                               const Simplex& s, const QuadratureRule& rule, bool curved) {
  Simplex sorted = s;
  int parity = 1;
  for (std::size_t i = 1; i < sorted.size(); ++i)
    for (std::size_t j = i; j > 0 && sorted[j] < sorted[j - 1]; --j) {
      std::swap(sorted[j], sorted[j - 1]);
      parity = -parity;
    }
  const int k = static_cast<int>(sorted.size()) - 1;
  const auto n = verts[sorted[0]].size();
  Mat edges(n, k);
  for (int j = 0; j < k; ++j) edges.col(j) = verts[sorted[j + 1]] - verts[sorted[0]];
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    Vec point = Vec::Zero(n);
    for (int i = 0; i <= k; ++i) point += rule.nodes(i, static_cast<Eigen::Index>(q)) * verts[sorted[i]];
    Mat tangents;
    if (curved) {
      const double r = point.norm();
      point /= r;
      tangents = (edges - point * (point.transpose() * edges)) / r;
    } else {
      tangents = edges;
    }
    sum += rule.weights[q] * evaluate_form(a, f(point), f.jacobian(point) * tangents);
  }
  return parity * sum;
}

inline void check_integrand(const SmoothMap& f, const DifferentialForm& a, int k, int ambient) {
  require(a.degree() == k, "integrate: form degree differs from mesh dimension");
  require(f.domain_dim() == ambient, "integrate: map domain differs from mesh ambient dimension");
  require(f.codomain_dim() == a.dim(), "integrate: map codomain differs from form's space");
}

}  // namespace detail

/// Integral over S^k of f^* a. Each simplex is parametrised by radial
/// projection of its affine hull onto the sphere, so the only error is
/// quadrature error.
inline double integrate_pullback(const SmoothMap& f, const DifferentialForm& a, const SimplicialSphereMesh& mesh,
                                 const QuadratureRule& rule) {
  detail::check_integrand(f, a, mesh.k, mesh.k + 1);
  require(rule.dim == mesh.k, "integrate_pullback: quadrature rule dimension differs from mesh");
  return chunked_sum(mesh.simplices.size(), [&](std::size_t i) {
    return detail::simplex_integral(f, a, mesh.vertices, mesh.simplices[i], rule, true);
  });
}

inline double integrate_pullback(const SmoothMap& f, const DifferentialForm& a, const SimplicialSphereMesh& mesh) {
  return integrate_pullback(f, a, mesh, simplex_rule(mesh.k, 4));
}

/// Integral over the (flat, piecewise affine) ball mesh of f^* a.
inline double integrate_pullback(const SmoothMap& f, const DifferentialForm& a, const BallMesh& ball,
                                 const QuadratureRule& rule) {
  detail::check_integrand(f, a, ball.dim, ball.dim);
  require(rule.dim == ball.dim, "integrate_pullback: quadrature rule dimension differs from mesh");
  return chunked_sum(ball.simplices.size(), [&](std::size_t i) {
    return detail::simplex_integral(f, a, ball.vertices, ball.simplices[i], rule, false);
  });
}

/// int_{dB} F^* omega - int_B F^* d omega. The boundary is integrated on the
/// exact sphere and the interior on the polyhedral ball, so the residual
/// measures the O(h^2) geometric error of the ball mesh.
inline double stokes_residual(const SmoothMap& F, const DifferentialForm& omega, const BallMesh& ball,
                              const QuadratureRule& boundary_rule, const QuadratureRule& ball_rule) {
  require(omega.degree() == ball.dim - 1, "stokes_residual: form degree must be one less than ball dimension");
  const SimplicialSphereMesh boundary = ball_boundary(ball);
  const double outer = integrate_pullback(F, omega, boundary, boundary_rule);
  const double inner = integrate_pullback(F, exterior_d(omega), ball, ball_rule);
  return outer - inner;
}

inline double stokes_residual(const SmoothMap& F, const DifferentialForm& omega, const BallMesh& ball) {
  return stokes_residual(F, omega, ball, simplex_rule(ball.dim - 1, 4), simplex_rule(ball.dim, 4));
}

// ---------------------------------------------------------------------------
// Extrapolation.

struct RichardsonResult {
  double limit = 0.0;
  double order = 0.0;
  double constant = 0.0;
  bool order_defined = false;  // false for a (numerically) constant sequence
  double rms_residual = 0.0;
};

/// Least-squares fit of value(h) = L + C h^q. The exponent is found by a grid
/// scan followed by Brent's method on the profiled sum of squares.
inline RichardsonResult richardson_limit(const std::vector<std::pair<double, double>>& values) {
  require(values.size() >= 3, "richardson_limit: need at least three (h, value) entries");
  for (std::size_t i = 0; i < values.size(); ++i) {
    require(values[i].first > 0.0 && std::isfinite(values[i].second), "richardson_limit: invalid entry");
    if (i > 0) require(values[i].first < values[i - 1].first, "richardson_limit: h must be strictly decreasing");
  }
  RichardsonResult out;
  double mean = 0.0;
  for (const auto& [h, v] : values) mean += v;
  mean /= static_cast<double>(values.size());
  double spread = 0.0;
  for (const auto& [h, v] : values) spread = std::max(spread, std::abs(v - mean));
  if (spread <= 1e-14 * (1.0 + std::abs(mean))) {
    out.limit = mean;
    out.order = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  // Scale h to O(1) so that h^q stays representable over the scan range.
  const double h0 = values.front().first;
  auto solve = [&](double q, double& l, double& c) {
    double s1 = 0, sx = 0, sxx = 0, sy = 0, sxy = 0;
    for (const auto& [h, v] : values) {
      const double x = std::pow(h / h0, q);
      s1 += 1;
      sx += x;
      sxx += x * x;
      sy += v;
      sxy += x * v;
    }
    const double det = s1 * sxx - sx * sx;
    c = (s1 * sxy - sx * sy) / det;
    l = (sy - c * sx) / s1;
    double sse = 0;
    for (const auto& [h, v] : values) {
      const double r = v - l - c * std::pow(h / h0, q);
      sse += r * r;
    }
    return sse;
  };
  auto sse = [&](double q) {
    double l, c;
    return solve(q, l, c);
  };
  const double q_min = 0.1, q_max = 10.0, step = 0.05;
  double best_q = q_min, best = sse(q_min);
  for (double q = q_min + step; q <= q_max + 1e-12; q += step) {
    const double v = sse(q);
    if (v < best) {
      best = v;
      best_q = q;
    }
  }
  const auto [q, err] = boost::math::tools::brent_find_minima(sse, std::max(q_min, best_q - step),
                                                              std::min(q_max, best_q + step), 52);
  (void)err;
  double l, c;
  const double final_sse = solve(q, l, c);
  out.limit = l;
  out.order = q;
  out.constant = c * std::pow(h0, -q);
  out.order_defined = true;
  out.rms_residual = std::sqrt(final_sse / static_cast<double>(values.size()));
  return out;
}

}  // namespace heislab

#endif  // HEISLAB_SPHERE_MESH_HPP
