#include <catch_amalgamated.hpp>

#include <heislab/gallery.hpp>
#include <heislab/hopf.hpp>

#include "oracles.hpp"

using namespace heislab;
using Catch::Approx;

namespace {

const SimplicialSphereMesh& mesh3() {
  static const SimplicialSphereMesh m = make_sphere_mesh(3, 3);
  return m;
}

// Reflection of the domain S^3 (degree -1).
SmoothMap domain_reflected_hopf() {
  std::vector<Polynomial> r;
  for (int i = 0; i < 4; ++i) r.push_back((i == 3 ? -1.0 : 1.0) * Polynomial::variable(4, i));
  return compose(hopf_map().map, SmoothMap::polynomial(r));
}

// Reflection of the target S^2: H picks up the square of the degree.
SmoothMap target_reflected_hopf() {
  const SmoothMap h = hopf_map().map;
  return SmoothMap::callable(4, 3, [h](const Vec& x) {
    Vec y = h(x);
    y[2] = -y[2];
    return y;
  });
}

}  // namespace

TEST_CASE("north pole fiber follows the exact Hopf circle") {
  const SphereMapSample s = sample_sphere_map(hopf_map().map, mesh3());
  const Eigen::Vector3d p = Eigen::Vector3d(0.2, -0.3, 0.9).normalized();
  const auto fibers = extract_fiber(s, p);
  REQUIRE(fibers.size() == 1);
  CHECK(fibers[0].closed);
  CHECK(fibers[0].points.size() > 20);
  double worst = 0.0;
  for (const auto& x : fibers[0].points) worst = std::max(worst, oracle::hopf_fiber_distance(x, p));
  CHECK(worst < mesh3().max_edge());
}

TEST_CASE("fibers over antipodal values stay apart") {
  const SphereMapSample s = sample_sphere_map(hopf_map().map, mesh3());
  const Eigen::Vector3d p = Eigen::Vector3d(0.3, 0.5, 0.6).normalized();
  const auto a = extract_fiber(s, p), b = extract_fiber(s, -p);
  REQUIRE(a.size() == 1);
  REQUIRE(b.size() == 1);
  CHECK(min_segment_distance(a[0], b[0]) > 0.5);
}

TEST_CASE("a map missing the value has an empty fiber") {
  const SphereMapSample s = sample_sphere_map(null_homotopic_map(), mesh3());
  CHECK(extract_fiber(s, Eigen::Vector3d(0.0, 0.0, -1.0)).empty());
}

TEST_CASE("Hopf invariant from fibers") {
  const SphereMapSample hopf = sample_sphere_map(hopf_map().map, mesh3());
  const Eigen::Vector3d p = Eigen::Vector3d(0.3, 0.4, 0.5).normalized(), q = Eigen::Vector3d(-0.6, 0.2, -0.3).normalized();
  const HopfFiberResult r = hopf_via_fibers(hopf, p, q);
  CHECK(r.value == Approx(1.0).margin(0.05));
  CHECK(r.pole_distance >= 0.1);
  Vec pole(4);
  pole << 0.5, 0.5, 0.5, -0.5;
  CHECK(hopf_via_fibers(hopf, p, q, pole).value == Approx(1.0).margin(0.05));

  const SphereMapSample refl = sample_sphere_map(domain_reflected_hopf(), mesh3());
  CHECK(hopf_via_fibers(refl, p, q).value == Approx(-1.0).margin(0.05));
  const SphereMapSample flip = sample_sphere_map(target_reflected_hopf(), mesh3());
  CHECK(hopf_via_fibers(flip, p, q).value == Approx(1.0).margin(0.05));

  const SphereMapSample null = sample_sphere_map(null_homotopic_map(), mesh3());
  CHECK(std::abs(hopf_via_fibers(null, Eigen::Vector3d(0.1, 0.05, 1.0).normalized(),
                                 Eigen::Vector3d(-0.1, 0.1, 1.0).normalized())
                     .value) < 0.05);
}

TEST_CASE("fiber extraction rejects bad input") {
  const SphereMapSample s = sample_sphere_map(hopf_map().map, make_sphere_mesh(3, 1));
  CHECK_THROWS_AS(extract_fiber(s, Eigen::Vector3d(1.0, 1.0, 0.0)), InvalidArgument);
  CHECK_THROWS_AS(extract_fiber(s, s.values[0]), DegenerateInput);
  CHECK_THROWS_AS(hopf_via_fibers(s, Eigen::Vector3d::UnitZ(), Eigen::Vector3d::UnitZ()), InvalidArgument);
  CHECK_THROWS_AS(sample_sphere_map(hopf_map().map, make_sphere_mesh(2, 1)), InvalidArgument);
}

TEST_CASE("Hopf invariant from a primitive form") {
  const SmoothMap h = hopf_map().map;
  CHECK(primitive_defect(h, hopf_area_form(), hopf_primitive(), mesh3()) < 1e-12);
  CHECK(hopf_via_forms(h, hopf_area_form(), hopf_primitive(), mesh3()) == Approx(1.0).margin(1e-3));
  CHECK_THROWS_AS(hopf_via_forms(h, hopf_area_form(), hopf_primitive(1.0), mesh3()), InvalidArgument);
}

TEST_CASE("Hopf invariant is quadratic in the area form") {
  // Scaling eta by s scales its primitive by s, so H scales by s^2.
  const SmoothMap h = hopf_map().map;
  const double s = 3.0;
  const double base = hopf_via_forms(h, hopf_area_form(), hopf_primitive(), mesh3());
  const double scaled = hopf_via_forms(h, s * hopf_area_form(), hopf_primitive(-s / (2.0 * kPi)), mesh3());
  CHECK(scaled == Approx(s * s * base).epsilon(1e-10));
}

TEST_CASE("stereographic projection is orientation reversing in the fixed frame") {
  Vec n(4);
  n << 0.0, 0.0, 0.0, 1.0;
  const Stereographic proj(n);
  Eigen::Matrix4d m;
  m.col(0) = proj.pole;
  m.rightCols<3>() = proj.basis;
  CHECK(m.determinant() == Approx(-1.0));
  Vec x(4);
  x << 1.0, 0.0, 0.0, 0.0;
  CHECK(proj(x).norm() == Approx(1.0));
  CHECK_THROWS_AS(proj(n), InvalidArgument);
}
