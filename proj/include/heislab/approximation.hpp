#ifndef HEISLAB_APPROXIMATION_HPP
#define HEISLAB_APPROXIMATION_HPP

// Sampled maps, mollification with measured contact-defect rates, empirical
// Hoelder exponents and the Gromov no-embedding region.

#include <heislab/common.hpp>
#include <heislab/forms.hpp>
#include <heislab/heis_core.hpp>
#include <heislab/parallel.hpp>
#include <heislab/quadrature.hpp>
#include <heislab/sphere_mesh.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace heislab {

// ---------------------------------------------------------------------------
// Kernels

enum class KernelKind { Bump, Polynomial };

/// Radial mollifier profile K(|y|^2) on the unit ball, unnormalised.
///   Bump:       exp(-1 / (1 - r^2))   (C-infinity)
///   Polynomial: (1 - r^2)^3           (C^2, used as an independent second choice)
struct MollifierKernel {
  KernelKind kind = KernelKind::Bump;

  double operator()(double r2) const {
    if (r2 >= 1.0) return 0.0;
    const double s = 1.0 - r2;
    return kind == KernelKind::Bump ? std::exp(-1.0 / s) : s * s * s;
  }
  /// d K / d(r^2)
  double derivative(double r2) const {
    if (r2 >= 1.0) return 0.0;
    const double s = 1.0 - r2;
    return kind == KernelKind::Bump ? -std::exp(-1.0 / s) / (s * s) : -3.0 * s * s;
  }
  std::string name() const { return kind == KernelKind::Bump ? "bump" : "polynomial"; }
};

inline MollifierKernel kernel_from_name(const std::string& name) {
  if (name == "bump") return {KernelKind::Bump};
  if (name == "polynomial") return {KernelKind::Polynomial};
  throw InvalidArgument("unknown kernel '" + name + "' (expected bump or polynomial)");
}

// ---------------------------------------------------------------------------
// Sampled maps

enum class DomainKind { Torus, Cube, Sphere };

/// Values of a map on a regular grid of the torus [0, 2pi)^d, on a grid of the
/// cube [-a, a]^d, or at the vertices of a sphere mesh. Grid points are stored
/// in row-major order of their multi-index. `jacobians` is filled only for
/// mollified grid maps.
struct SampledMap {
  DomainKind domain = DomainKind::Torus;
  int param_dim = 1;
  int resolution = 0;
  double half_width = 1.0;
  std::shared_ptr<const SimplicialSphereMesh> mesh;
  std::vector<Vec> values;
  std::vector<Mat> jacobians;

  int codim() const { return values.empty() ? 0 : static_cast<int>(values.front().size()); }
  std::size_t size() const { return values.size(); }

  double spacing() const {
    switch (domain) {
      case DomainKind::Torus: return 2.0 * kPi / resolution;
      case DomainKind::Cube: return 2.0 * half_width / (resolution - 1);
      case DomainKind::Sphere: return mesh->max_edge();
    }
    return 0.0;
  }

  std::vector<int> multi_index(std::size_t flat) const {
    std::vector<int> m(param_dim);
    for (int i = param_dim - 1; i >= 0; --i) {
      m[i] = static_cast<int>(flat % resolution);
      flat /= resolution;
    }
    return m;
  }
  std::size_t flat_index(const std::vector<int>& m) const {
    std::size_t flat = 0;
    for (int i = 0; i < param_dim; ++i) flat = flat * resolution + static_cast<std::size_t>(m[i]);
    return flat;
  }

  Vec parameter(std::size_t flat) const {
    if (domain == DomainKind::Sphere) return mesh->vertices[flat];
    const auto m = multi_index(flat);
    Vec p(param_dim);
    for (int i = 0; i < param_dim; ++i)
      p[i] = domain == DomainKind::Torus ? spacing() * m[i] : -half_width + spacing() * m[i];
    return p;
  }
};

namespace detail {

inline std::size_t grid_size(int dim, int res) {
  std::size_t total = 1;
  for (int i = 0; i < dim; ++i) total *= static_cast<std::size_t>(res);
  return total;
}

inline void validate_samples(const SampledMap& m) {
  require(!m.values.empty(), "SampledMap: no samples");
  const auto c = m.values.front().size();
  require(c >= 1, "SampledMap: values must be nonempty vectors");
  for (const auto& v : m.values) {
    require(v.size() == c, "SampledMap: inconsistent value dimensions");
    require(v.allFinite(), "SampledMap: values must be finite");
  }
}

}  // namespace detail

/// Samples fn on the grid x_i = 2 pi i / res of the torus T^d.
inline SampledMap sample_torus(int d, int res, const std::function<Vec(const Vec&)>& fn) {
  require(d >= 1 && d <= 3, "sample_torus: dimension must be 1..3");
  require(res >= 16, "sample_torus: resolution must be at least 16 per axis");
  SampledMap m;
  m.domain = DomainKind::Torus;
  m.param_dim = d;
  m.resolution = res;
  const std::size_t n = detail::grid_size(d, res);
  m.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) m.values[i] = fn(m.parameter(i));
  detail::validate_samples(m);
  return m;
}

/// Samples fn on the res^d grid of [-a, a]^d including the faces.
inline SampledMap sample_cube(int d, int res, double half_width, const std::function<Vec(const Vec&)>& fn) {
  require(d >= 1 && d <= 3, "sample_cube: dimension must be 1..3");
  require(res >= 16, "sample_cube: resolution must be at least 16 per axis");
  require(half_width > 0.0, "sample_cube: half width must be positive");
  SampledMap m;
  m.domain = DomainKind::Cube;
  m.param_dim = d;
  m.resolution = res;
  m.half_width = half_width;
  const std::size_t n = detail::grid_size(d, res);
  m.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) m.values[i] = fn(m.parameter(i));
  detail::validate_samples(m);
  return m;
}

inline SampledMap sample_sphere(const SimplicialSphereMesh& mesh, const std::function<Vec(const Vec&)>& fn) {
  SampledMap m;
  m.domain = DomainKind::Sphere;
  m.param_dim = mesh.k;
  m.mesh = std::make_shared<const SimplicialSphereMesh>(mesh);
  m.values.reserve(mesh.vertices.size());
  for (const auto& v : mesh.vertices) m.values.push_back(fn(v));
  detail::validate_samples(m);
  return m;
}

/// Largest |a_i - b_i| over samples; on cubes only samples at least `margin`
/// away from the boundary are compared.
inline double sup_distance(const SampledMap& a, const SampledMap& b, double margin = 0.0) {
  require(a.size() == b.size() && a.domain == b.domain, "sup_distance: maps sampled on different domains");
  double sup = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.domain == DomainKind::Cube && margin > 0.0) {
      const Vec p = a.parameter(i);
      if ((a.half_width - p.array().abs()).minCoeff() < margin - 1e-12) continue;
    }
    sup = std::max(sup, (a.values[i] - b.values[i]).norm());
  }
  return sup;
}

// ---------------------------------------------------------------------------
// Mollification

namespace detail {

struct Stencil {
  std::vector<std::vector<int>> offsets;
  std::vector<double> weights;                   // unit discrete mass
  std::vector<std::vector<double>> derivatives;  // per axis, normalised on linear data
};

inline Stencil make_stencil(int d, double h, double eps, const MollifierKernel& kernel) {
  const int reach = static_cast<int>(std::floor(eps / h));
  Stencil st;
  std::vector<int> o(d, -reach);
  double mass = 0.0;
  std::vector<double> moment(d, 0.0);
  std::vector<std::vector<double>> grads(d);
  for (;;) {
    double r2 = 0.0;
    for (int i = 0; i < d; ++i) r2 += (o[i] * h) * (o[i] * h);
    r2 /= eps * eps;
    const double w = kernel(r2);
    if (w > 0.0) {
      st.offsets.push_back(o);
      st.weights.push_back(w);
      mass += w;
      const double dk = kernel.derivative(r2);
      for (int i = 0; i < d; ++i) {
        const double y = o[i] * h;
        const double g = 2.0 * y / (eps * eps) * dk;
        grads[i].push_back(g);
        moment[i] -= g * y;
      }
    }
    int i = d - 1;
    while (i >= 0 && o[i] == reach) o[i--] = -reach;
    if (i < 0) break;
    ++o[i];
  }
  for (auto& w : st.weights) w /= mass;
  st.derivatives.resize(d);
  for (int i = 0; i < d; ++i) {
    st.derivatives[i].resize(grads[i].size());
    for (std::size_t s = 0; s < grads[i].size(); ++s) st.derivatives[i][s] = grads[i][s] / moment[i];
  }
  return st;
}

/// Value at multi-index m, with periodic wrap on tori and odd reflection
/// (2 phi(b) - phi(mirror)) across cube faces, which reproduces affine data.
inline Vec extended_value(const SampledMap& base, std::vector<int> m) {
  const int res = base.resolution;
  if (base.domain == DomainKind::Torus) {
    for (auto& v : m) v = ((v % res) + res) % res;
    return base.values[base.flat_index(m)];
  }
  for (int i = 0; i < base.param_dim; ++i) {
    if (m[i] >= 0 && m[i] < res) continue;
    const int b = m[i] < 0 ? 0 : res - 1;
    std::vector<int> mb = m, mm = m;
    mb[i] = b;
    mm[i] = 2 * b - m[i];
    return 2.0 * extended_value(base, mb) - extended_value(base, mm);
  }
  return base.values[base.flat_index(m)];
}

}  // namespace detail

/// Componentwise convolution with the eps-rescaled kernel. On grid domains the
/// first derivatives are produced by convolving with the kernel gradient.
inline SampledMap mollify(const SampledMap& base, double eps, const MollifierKernel& kernel = {}) {
  require(eps > 0.0, "mollify: eps must be positive");
  const double h = base.spacing();
  require(eps >= 2.0 * h - 1e-12, "mollify: eps must be at least twice the grid spacing");
  SampledMap out = base;
  out.jacobians.clear();
  if (base.domain == DomainKind::Sphere) {
    const auto& verts = base.mesh->vertices;
    auto rows = map_chunks<std::vector<Vec>>(verts.size(), 64, [&](std::size_t b, std::size_t e) {
      std::vector<Vec> chunk;
      for (std::size_t i = b; i < e; ++i) {
        Vec acc = Vec::Zero(base.codim());
        double mass = 0.0;
        for (std::size_t j = 0; j < verts.size(); ++j) {
          const double angle = std::acos(std::clamp(verts[i].dot(verts[j]), -1.0, 1.0));
          const double w = kernel(angle * angle / (eps * eps));
          if (w == 0.0) continue;
          acc += w * base.values[j];
          mass += w;
        }
        chunk.push_back(acc / mass);
      }
      return chunk;
    });
    std::size_t i = 0;
    for (auto& chunk : rows)
      for (auto& v : chunk) out.values[i++] = std::move(v);
    return out;
  }
  const int d = base.param_dim;
  if (base.domain == DomainKind::Cube) {
    const double extent = 2.0 * base.half_width;
    require(eps < 0.5 * extent, "mollify: eps too large for the cube");
  }
  const detail::Stencil st = detail::make_stencil(d, h, eps, kernel);
  const int c = base.codim();
  // Pad the grid by the stencil reach so the convolution is index arithmetic.
  int reach = 0;
  for (const auto& o : st.offsets)
    for (int v : o) reach = std::max(reach, std::abs(v));
  const int res = base.resolution;
  const int padded = res + 2 * reach;
  std::size_t padded_count = 1;
  for (int a = 0; a < d; ++a) padded_count *= static_cast<std::size_t>(padded);
  Mat data(c, static_cast<Eigen::Index>(padded_count));
  {
    std::vector<int> m(d, -reach);
    for (std::size_t p = 0; p < padded_count; ++p) {
      data.col(static_cast<Eigen::Index>(p)) = detail::extended_value(base, m);
      for (int a = d - 1; a >= 0; --a) {
        if (++m[a] < res + reach) break;
        m[a] = -reach;
      }
    }
  }
  std::vector<std::ptrdiff_t> delta(st.offsets.size());
  for (std::size_t s = 0; s < st.offsets.size(); ++s) {
    std::ptrdiff_t off = 0;
    for (int a = 0; a < d; ++a) off = off * padded - st.offsets[s][a];
    delta[s] = off;
  }
  struct Chunk {
    std::vector<Vec> values;
    std::vector<Mat> jacobians;
  };
  auto chunks = map_chunks<Chunk>(base.size(), 256, [&](std::size_t b, std::size_t e) {
    Chunk ch;
    for (std::size_t i = b; i < e; ++i) {
      const auto center = base.multi_index(i);
      std::ptrdiff_t pc = 0;
      for (int a = 0; a < d; ++a) pc = pc * padded + center[a] + reach;
      Vec v = Vec::Zero(c);
      Mat jac = Mat::Zero(c, d);
      for (std::size_t s = 0; s < delta.size(); ++s) {
        const auto sample = data.col(static_cast<Eigen::Index>(pc + delta[s]));
        v.noalias() += st.weights[s] * sample;
        for (int a = 0; a < d; ++a) jac.col(a).noalias() += st.derivatives[a][s] * sample;
      }
      ch.values.push_back(std::move(v));
      ch.jacobians.push_back(std::move(jac));
    }
    return ch;
  });
  out.jacobians.reserve(base.size());
  std::size_t i = 0;
  for (auto& ch : chunks)
    for (std::size_t j = 0; j < ch.values.size(); ++j, ++i) {
      out.values[i] = std::move(ch.values[j]);
      out.jacobians.push_back(std::move(ch.jacobians[j]));
    }
  return out;
}

struct MollifiedFamily {
  SampledMap base;
  MollifierKernel kernel;
  std::vector<double> eps_list;
  std::vector<SampledMap> smoothed;
};

inline MollifiedFamily make_mollified_family(const SampledMap& base, const std::vector<double>& eps_list,
                                             const MollifierKernel& kernel = {}) {
  require(!eps_list.empty(), "make_mollified_family: empty eps list");
  for (std::size_t i = 1; i < eps_list.size(); ++i)
    require(eps_list[i] < eps_list[i - 1], "make_mollified_family: eps list must be strictly decreasing");
  MollifiedFamily fam{base, kernel, eps_list, {}};
  for (double eps : eps_list) fam.smoothed.push_back(mollify(base, eps, kernel));
  return fam;
}

// ---------------------------------------------------------------------------
// Contact-defect rates

/// Euclidean norm of the coefficient vector of (f^* a) at a point where f has
/// value `y` and Jacobian `jac`.
inline double pullback_norm(const DifferentialForm& a, const Vec& y, const Mat& jac) {
  const int d = static_cast<int>(jac.cols());
  const int k = a.degree();
  if (k > d) return 0.0;
  double sum = 0.0;
  for (const auto& cols : detail::subsets(d, k)) {
    Mat vecs(jac.rows(), k);
    for (int j = 0; j < k; ++j) vecs.col(j) = jac.col(cols[j]);
    const double v = evaluate_form(a, y, vecs);
    sum += v * v;
  }
  return std::sqrt(sum);
}

struct DefectRates {
  std::vector<double> eps;
  std::vector<std::vector<double>> defects;  // [form][eps index]
  std::vector<LineFit> fits;                 // log defect against log eps, per form
  std::vector<bool> fit_valid;               // false when a defect is 0 or not finite
};

/// For each eps and form, the sup over grid points of |phi_eps^* form|. On
/// cubes, points closer than the largest eps to the boundary are excluded, so
/// every eps is measured on the same point set.
inline DefectRates contact_defect_rates(const MollifiedFamily& family, const std::vector<DifferentialForm>& forms) {
  require(!family.eps_list.empty(), "contact_defect_rates: empty eps list");
  require(!forms.empty(), "contact_defect_rates: no forms");
  require(family.base.domain != DomainKind::Sphere, "contact_defect_rates: needs a grid domain");
  for (const auto& f : forms) require(f.dim() == family.base.codim(), "contact_defect_rates: form lives on wrong space");
  DefectRates out;
  out.eps = family.eps_list;
  out.defects.assign(forms.size(), {});
  for (std::size_t e = 0; e < family.eps_list.size(); ++e) {
    const SampledMap& m = family.smoothed[e];
    const double margin = family.eps_list.front();
    for (std::size_t f = 0; f < forms.size(); ++f) {
      auto sups = map_chunks<double>(m.size(), 512, [&](std::size_t b, std::size_t end) {
        double sup = 0.0;
        for (std::size_t i = b; i < end; ++i) {
          if (m.domain == DomainKind::Cube) {
            const Vec p = m.parameter(i);
            if ((m.half_width - p.array().abs()).minCoeff() < margin - 1e-12) continue;
          }
          sup = std::max(sup, pullback_norm(forms[f], m.values[i], m.jacobians[i]));
        }
        return sup;
      });
      out.defects[f].push_back(*std::max_element(sups.begin(), sups.end()));
    }
  }
  for (std::size_t f = 0; f < forms.size(); ++f) {
    bool ok = out.eps.size() >= 2;
    for (double v : out.defects[f]) ok = ok && v > 0.0 && std::isfinite(v);
    out.fit_valid.push_back(ok);
    out.fits.push_back(ok ? fit_loglog(out.eps, out.defects[f]) : LineFit{});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hoelder exponent estimation

enum class MetricTag { Euclidean, Koranyi };

inline std::string metric_name(MetricTag m) { return m == MetricTag::Koranyi ? "koranyi" : "euclidean"; }
inline MetricTag metric_from_name(const std::string& s) {
  if (s == "koranyi") return MetricTag::Koranyi;
  if (s == "euclidean") return MetricTag::Euclidean;
  throw InvalidArgument("unknown metric '" + s + "' (expected koranyi or euclidean)");
}

/// Target distance between two values under the tagged metric.
inline double target_distance(const Vec& a, const Vec& b, MetricTag metric) {
  if (metric == MetricTag::Euclidean) return (a - b).norm();
  require(a.size() >= 3 && a.size() % 2 == 1, "koranyi metric needs values in R^{2n+1}");
  const int n = static_cast<int>(a.size() - 1) / 2;
  return koranyi_dist(HeisenbergPoint(n, a), HeisenbergPoint(n, b));
}

struct HolderFit {
  double exponent = 0.0;
  double constant = 0.0;
  MetricTag metric = MetricTag::Euclidean;
  double residual = 0.0;
  bool defined = false;  // false for a map that is constant on every sampled pair
  std::size_t pairs = 0;
};

/// Upper-envelope fit of log d against log gap: pairs are grouped into `bins`
/// logarithmic gap bins, the 0.99 quantile of log d is taken per bin and a
/// line is fitted through the bin points.
inline HolderFit fit_holder_envelope(const std::vector<double>& gaps, const std::vector<double>& dists,
                                     MetricTag metric, int bins = 12, double quantile = 0.99) {
  require(gaps.size() == dists.size(), "fit_holder_envelope: size mismatch");
  HolderFit fit;
  fit.metric = metric;
  std::vector<double> lg, ld;
  for (std::size_t i = 0; i < gaps.size(); ++i)
    if (gaps[i] > 0.0 && dists[i] > 0.0 && std::isfinite(dists[i])) {
      lg.push_back(std::log(gaps[i]));
      ld.push_back(std::log(dists[i]));
    }
  fit.pairs = lg.size();
  if (lg.size() < 16) return fit;
  const double lo = *std::min_element(lg.begin(), lg.end());
  const double hi = *std::max_element(lg.begin(), lg.end());
  if (!(hi > lo)) return fit;
  std::vector<std::vector<std::size_t>> members(bins);
  for (std::size_t i = 0; i < lg.size(); ++i) {
    const int b = std::min(bins - 1, static_cast<int>((lg[i] - lo) / (hi - lo) * bins));
    members[b].push_back(i);
  }
  std::vector<double> bx, by;
  for (const auto& mem : members) {
    if (mem.size() < 8) continue;
    std::vector<double> vals;
    double mx = 0.0;
    for (auto i : mem) {
      vals.push_back(ld[i]);
      mx += lg[i];
    }
    const auto q = static_cast<std::size_t>(std::floor(quantile * (vals.size() - 1)));
    std::nth_element(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(q), vals.end());
    bx.push_back(mx / static_cast<double>(mem.size()));
    by.push_back(vals[q]);
  }
  if (bx.size() < 3) return fit;
  const LineFit line = fit_line(bx, by);
  fit.exponent = line.slope;
  fit.constant = std::exp(line.intercept);
  fit.residual = line.rms_residual;
  fit.defined = true;
  return fit;
}

/// Hoelder fit of a map given by a procedure on a box or torus parameter
/// domain. Pairs have a uniform base point, a uniform direction and a
/// log-uniform gap in [gap_min, gap_max].
struct ContinuousDomain {
  DomainKind kind = DomainKind::Cube;  // Cube: [lo, hi]^d; Torus: period 2 pi
  int dim = 1;
  double lo = -1.0;
  double hi = 1.0;
};

inline HolderFit holder_fit(const std::function<Vec(const Vec&)>& fn, const ContinuousDomain& domain,
                            MetricTag metric, std::size_t pair_budget, std::uint64_t seed, double gap_min = 0.0,
                            double gap_max = 0.0) {
  require(pair_budget >= 1000, "holder_fit: pair budget must be at least 1000");
  require(domain.dim >= 1, "holder_fit: bad domain");
  const double extent = domain.kind == DomainKind::Torus ? 2.0 * kPi : domain.hi - domain.lo;
  require(extent > 0.0, "holder_fit: empty domain");
  if (gap_min <= 0.0) gap_min = 1e-3 * extent;
  if (gap_max <= 0.0) gap_max = 0.1 * extent;
  require(gap_min < gap_max, "holder_fit: gap range is empty");
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> gaps, dists;
  gaps.reserve(pair_budget);
  dists.reserve(pair_budget);
  const double base_lo = domain.kind == DomainKind::Torus ? 0.0 : domain.lo;
  std::size_t attempts = 0;
  while (gaps.size() < pair_budget && attempts < 20 * pair_budget) {
    ++attempts;
    Vec p(domain.dim);
    for (int i = 0; i < domain.dim; ++i) p[i] = base_lo + extent * unif(rng);
    const double g = gap_min * std::pow(gap_max / gap_min, unif(rng));
    const Vec dir = random_unit_vector(rng, domain.dim);
    Vec q = p + g * dir;
    if (domain.kind == DomainKind::Cube) {
      if ((q.array() < domain.lo).any() || (q.array() > domain.hi).any()) continue;
    }
    gaps.push_back(g);
    dists.push_back(target_distance(fn(p), fn(q), metric));
  }
  return fit_holder_envelope(gaps, dists, metric);
}

/// Hoelder fit of a sampled map. Partners are grid points at a rounded
/// log-uniform offset (periodic on tori); on sphere meshes, random vertex
/// pairs with their geodesic distance.
inline HolderFit holder_fit(const SampledMap& map, MetricTag metric, std::size_t pair_budget, std::uint64_t seed) {
  require(pair_budget >= 1000, "holder_fit: pair budget must be at least 1000");
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> gaps, dists;
  const std::size_t n = map.size();
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  if (map.domain == DomainKind::Sphere) {
    while (gaps.size() < pair_budget) {
      const std::size_t i = pick(rng), j = pick(rng);
      if (i == j) continue;
      const double angle =
          std::acos(std::clamp(map.mesh->vertices[i].dot(map.mesh->vertices[j]), -1.0, 1.0));
      gaps.push_back(angle);
      dists.push_back(target_distance(map.values[i], map.values[j], metric));
    }
    return fit_holder_envelope(gaps, dists, metric);
  }
  const double h = map.spacing();
  const double extent = map.domain == DomainKind::Torus ? 2.0 * kPi : 2.0 * map.half_width;
  const double gmin = 2.0 * h, gmax = 0.25 * extent;
  require(gmin < gmax, "holder_fit: grid too coarse for a gap range");
  std::size_t attempts = 0;
  while (gaps.size() < pair_budget && attempts < 20 * pair_budget) {
    ++attempts;
    const std::size_t i = pick(rng);
    const double g = gmin * std::pow(gmax / gmin, unif(rng));
    const Vec dir = random_unit_vector(rng, map.param_dim);
    auto m = map.multi_index(i);
    double gap2 = 0.0;
    bool inside = true, moved = false;
    for (int a = 0; a < map.param_dim; ++a) {
      const int o = static_cast<int>(std::lround(g * dir[a] / h));
      moved = moved || o != 0;
      gap2 += (o * h) * (o * h);
      m[a] += o;
      if (map.domain == DomainKind::Torus) {
        m[a] = ((m[a] % map.resolution) + map.resolution) % map.resolution;
      } else if (m[a] < 0 || m[a] >= map.resolution) {
        inside = false;
      }
    }
    if (!inside || !moved) continue;
    gaps.push_back(std::sqrt(gap2));
    dists.push_back(target_distance(map.values[i], map.values[map.flat_index(m)], metric));
  }
  return fit_holder_envelope(gaps, dists, metric);
}

// ---------------------------------------------------------------------------
// Gromov region

struct GromovRegion {
  bool inside = false;  // no bi-Hoelder injection in this region
  double value = 0.0;   // 2 gamma + theta (k - 1) - k
};

/// 2 gamma + theta (k-1) - k > 0. Values within 1e-12 of zero count as the
/// boundary (outside), so grid points on the boundary classify exactly.
inline GromovRegion gromov_region(int k, double gamma, double theta) {
  require(k >= 1, "gromov_region: k must be at least 1");
  require(gamma > 0.5 && gamma <= 1.0, "gromov_region: gamma must lie in (1/2, 1]");
  require(theta > 0.0, "gromov_region: theta must be positive");
  GromovRegion r;
  r.value = 2.0 * gamma + theta * (k - 1) - k;
  if (std::abs(r.value) <= 1e-12) r.value = 0.0;
  r.inside = r.value > 0.0;
  return r;
}

}  // namespace heislab

#endif  // HEISLAB_APPROXIMATION_HPP
