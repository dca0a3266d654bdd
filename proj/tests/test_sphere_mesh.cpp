#include <catch_amalgamated.hpp>

#include <heislab/hopf.hpp>
#include <heislab/sphere_mesh.hpp>

using namespace heislab;
using Catch::Approx;

TEST_CASE("sphere meshes are closed, oriented and on the unit sphere") {
  for (int k = 1; k <= 3; ++k)
    for (int level = 0; level <= 2; ++level) {
      const auto mesh = make_sphere_mesh(k, level);
      CHECK(is_closed_oriented(mesh));
      CHECK(mesh.max_edge() > 0.0);
    }
  CHECK(make_sphere_mesh(1, 0).simplices.size() == 3);
  CHECK(make_sphere_mesh(2, 0).simplices.size() == 20);
  CHECK(make_sphere_mesh(3, 0).simplices.size() == 16);
  CHECK(make_sphere_mesh(3, 1).simplices.size() == 128);
}

TEST_CASE("refinement halves the mesh size") {
  for (int k = 1; k <= 3; ++k) {
    const double h1 = make_sphere_mesh(k, 2).max_edge(), h2 = make_sphere_mesh(k, 3).max_edge();
    CHECK(h2 / h1 == Approx(0.5).margin(0.1));
  }
}

TEST_CASE("invalid mesh requests are rejected") {
  CHECK_THROWS_AS(make_sphere_mesh(4, 0), InvalidArgument);
  CHECK_THROWS_AS(make_sphere_mesh(2, -1), InvalidArgument);
}

TEST_CASE("length and area forms integrate to the sphere volumes") {
  const Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
  DifferentialForm w(2, 1);
  w.add_term({1}, x);
  w.add_term({0}, -1.0 * y);
  const auto circle = make_sphere_mesh(1, 6);
  CHECK(integrate_pullback(SmoothMap::identity(2), w, circle) == Approx(2.0 * kPi).epsilon(1e-10));
  CHECK(integrate_pullback(SmoothMap::identity(2), w, reversed(circle)) ==
        -integrate_pullback(SmoothMap::identity(2), w, circle));
  const auto s2 = make_sphere_mesh(2, 3);
  CHECK(integrate_pullback(SmoothMap::identity(3), hopf_area_form(), s2) == Approx(1.0).epsilon(1e-8));
}

TEST_CASE("exact forms integrate to zero over closed spheres") {
  const Polynomial x = Polynomial::variable(3, 0), y = Polynomial::variable(3, 1), z = Polynomial::variable(3, 2);
  DifferentialForm w(3, 1);
  w.add_term({0}, x * y * z);
  w.add_term({2}, y * y + x);
  const double coarse = integrate_pullback(SmoothMap::identity(3), exterior_d(w), make_sphere_mesh(2, 2));
  const double fine = integrate_pullback(SmoothMap::identity(3), exterior_d(w), make_sphere_mesh(2, 3));
  CHECK(std::abs(fine) < 1e-8);
  CHECK(std::abs(fine) < std::abs(coarse));
}

TEST_CASE("ball meshes have the sphere as oriented boundary") {
  for (int k = 1; k <= 2; ++k) {
    const BallMesh ball = make_ball_mesh(k, 2);
    const SimplicialSphereMesh boundary = ball_boundary(ball);
    CHECK(boundary.k == k);
    CHECK(unmatched_faces(boundary.simplices) == 0);
    CHECK(is_closed_oriented(boundary));
  }
}

TEST_CASE("Stokes residual decays at second order on B^2") {
  const Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
  DifferentialForm w(2, 1);
  w.add_term({0}, x * x * y);
  w.add_term({1}, x * y * y * y + x);
  std::vector<double> hs, rs;
  for (int level = 1; level <= 4; ++level) {
    const BallMesh ball = make_ball_mesh(1, level);
    hs.push_back(ball.max_edge());
    rs.push_back(std::abs(stokes_residual(SmoothMap::identity(2), w, ball)));
  }
  CHECK(fit_loglog(hs, rs).slope == Approx(2.0).margin(0.3));
}

TEST_CASE("Richardson extrapolation recovers limit and order") {
  std::vector<std::pair<double, double>> seq;
  for (double h : {0.4, 0.2, 0.1, 0.05}) seq.emplace_back(h, 3.0 + 0.7 * h * h);
  const RichardsonResult r = richardson_limit(seq);
  CHECK(r.order_defined);
  CHECK(r.limit == Approx(3.0).epsilon(1e-8));
  CHECK(r.order == Approx(2.0).epsilon(1e-6));
  std::vector<std::pair<double, double>> flat{{0.4, 1.0}, {0.2, 1.0}, {0.1, 1.0}};
  const RichardsonResult c = richardson_limit(flat);
  CHECK_FALSE(c.order_defined);
  CHECK(c.limit == 1.0);
}
