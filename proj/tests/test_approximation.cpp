#include <catch_amalgamated.hpp>

#include <heislab/approximation.hpp>
#include <heislab/gallery.hpp>
#include <heislab/lefschetz.hpp>

#include "oracles.hpp"

using namespace heislab;
using Catch::Approx;

TEST_CASE("kernels vanish outside the unit ball") {
  for (auto kind : {KernelKind::Bump, KernelKind::Polynomial}) {
    const MollifierKernel k{kind};
    CHECK(k(1.0) == 0.0);
    CHECK(k(2.0) == 0.0);
    CHECK(k(0.0) > k(0.5));
    CHECK(k.derivative(0.3) == Approx((k(0.3 + 1e-6) - k(0.3 - 1e-6)) / 2e-6).epsilon(1e-6));
    CHECK(kernel_from_name(k.name()).kind == kind);
  }
  CHECK_THROWS_AS(kernel_from_name("gauss"), InvalidArgument);
}

TEST_CASE("mollification reproduces affine data on a cube") {
  Mat a(3, 2);
  a << 1.0, -2.0, 0.5, 3.0, 0.0, 1.5;
  const Vec b = Eigen::Vector3d(0.1, -0.2, 0.7);
  const SampledMap base = sample_cube(2, 33, 1.0, [&](const Vec& x) { return Vec(a * x + b); });
  const SampledMap m = mollify(base, 0.3);
  for (std::size_t i = 0; i < m.size(); ++i) {
    CHECK((m.values[i] - base.values[i]).norm() < 1e-12);
    CHECK((m.jacobians[i] - a).norm() < 1e-11);
  }
}

TEST_CASE("mollified Jacobians match the smoothed values") {
  const SampledMap base = sample_torus(1, 512, [](const Vec& s) { return Vec::Constant(1, std::sin(s[0])); });
  const SampledMap m = mollify(base, 0.3);
  // The convolution of sin is c sin for a kernel constant c; its derivative is c cos.
  const double c = m.values[128][0];
  for (std::size_t i = 0; i < m.size(); i += 37) {
    const double s = base.parameter(i)[0];
    CHECK(m.values[i][0] == Approx(c * std::sin(s)).margin(1e-12));
    CHECK(m.jacobians[i](0, 0) == Approx(c * std::cos(s)).margin(1e-12));
  }
}

TEST_CASE("mollified maps converge uniformly at rate eps for Lipschitz data") {
  const SampledMap base = sample_circle_map(figure_eight_polygon(), 2048);
  double prev = std::numeric_limits<double>::infinity();
  for (double eps : {0.4, 0.2, 0.1, 0.05}) {
    const double d = sup_distance(mollify(base, eps), base);
    CHECK(d < prev);
    CHECK(d < 6.0 * eps);  // speed of the lift is at most 6 / (pi / 3) * sqrt(1 + 4)
    prev = d;
  }
}

TEST_CASE("mollification rejects bad parameters") {
  const SampledMap base = sample_torus(1, 64, [](const Vec& s) { return Vec::Constant(1, std::cos(s[0])); });
  CHECK_THROWS_AS(mollify(base, 0.05), InvalidArgument);
  CHECK_THROWS_AS(mollify(base, -1.0), InvalidArgument);
  CHECK_THROWS_AS(make_mollified_family(base, {0.2, 0.4}), InvalidArgument);
  CHECK_THROWS_AS(sample_torus(1, 8, [](const Vec& s) { return s; }), InvalidArgument);
  CHECK_THROWS_AS(sample_torus(1, 64, [](const Vec&) { return Vec::Constant(1, std::nan("")); }), InvalidArgument);
}

TEST_CASE("contact defect rates follow the regularity of the map") {
  const std::vector<double> eps{0.4, 0.2, 0.1, 0.05};
  const std::vector<DifferentialForm> alpha{contact_form(1)};
  SECTION("smooth horizontal lift: second order") {
    const auto rates = contact_defect_rates(make_mollified_family(sample_circle_map(figure_eight_lift(), 4096), eps), alpha);
    REQUIRE(rates.fit_valid[0]);
    CHECK(rates.fits[0].slope == Approx(2.0).margin(0.15));
  }
  SECTION("polygonal horizontal lift: first order") {
    const auto rates =
        contact_defect_rates(make_mollified_family(sample_circle_map(figure_eight_polygon(), 4096), eps), alpha);
    REQUIRE(rates.fit_valid[0]);
    CHECK(rates.fits[0].slope == Approx(1.0).margin(0.15));
  }
  SECTION("identity of the cube: no decay") {
    const SampledMap id = sample_cube(3, 41, 1.0, [](const Vec& x) { return x; });
    const auto rates = contact_defect_rates(make_mollified_family(id, {0.4, 0.2, 0.1}), alpha);
    REQUIRE(rates.fit_valid[0]);
    CHECK(rates.fits[0].slope == Approx(0.0).margin(0.15));
  }
}

TEST_CASE("an exactly horizontal sample has no valid fit") {
  const SampledMap flat = sample_torus(1, 256, [](const Vec& s) { return Vec(Eigen::Vector3d(std::cos(s[0]), 0.0, 0.0)); });
  const auto rates = contact_defect_rates(make_mollified_family(flat, {0.4, 0.2}), {contact_form(1)});
  CHECK_FALSE(rates.fit_valid[0]);
  CHECK(rates.defects[0][0] == 0.0);
}

TEST_CASE("Hoelder estimator on the calibration maps") {
  const ParametricMap id = identity_into_H(1);
  const HolderFit k = holder_fit(id, MetricTag::Koranyi, 20000, 1);
  const HolderFit e = holder_fit(id, MetricTag::Euclidean, 20000, 1);
  CHECK(k.defined);
  CHECK(k.exponent >= 0.45);
  CHECK(k.exponent <= 0.55);
  CHECK(e.exponent == Approx(1.0).margin(0.05));
  CHECK(holder_fit(vertical_segment(), MetricTag::Koranyi, 20000, 2).exponent == Approx(0.5).margin(0.02));
  CHECK(holder_fit(vertical_segment(), MetricTag::Euclidean, 20000, 2).exponent == Approx(1.0).margin(0.02));
}

TEST_CASE("Hoelder estimator on samples and degenerate maps") {
  const SampledMap sampled = sample_cube(1, 2001, 1.0, [](const Vec& s) { return Vec(Eigen::Vector3d(0.0, 0.0, s[0])); });
  CHECK(holder_fit(sampled, MetricTag::Koranyi, 5000, 3).exponent == Approx(0.5).margin(0.02));
  const SampledMap constant = sample_cube(1, 64, 1.0, [](const Vec&) { return Vec(Eigen::Vector3d(1.0, 2.0, 3.0)); });
  CHECK_FALSE(holder_fit(constant, MetricTag::Euclidean, 1000, 3).defined);
  CHECK_THROWS_AS(holder_fit(sampled, MetricTag::Euclidean, 10, 3), InvalidArgument);
  CHECK_THROWS_AS(metric_from_name("taxicab"), InvalidArgument);
  const HolderFit a = holder_fit(vertical_segment(), MetricTag::Koranyi, 2000, 9);
  const HolderFit b = holder_fit(vertical_segment(), MetricTag::Koranyi, 2000, 9);
  CHECK(a.exponent == b.exponent);
}

TEST_CASE("Gromov region matches integer arithmetic on the grid") {
  for (int k = 1; k <= 3; ++k)
    for (int i = 11; i <= 20; ++i)
      for (int j = 1; j <= 10; ++j) CHECK(gromov_region(k, i / 20.0, j / 10.0).inside == oracle::gromov_inside(k, i, j));
  CHECK_FALSE(gromov_region(2, 0.75, 0.5).inside);
  CHECK(gromov_region(2, 0.75, 0.5).value == 0.0);
  CHECK_THROWS_AS(gromov_region(1, 0.5, 0.3), InvalidArgument);
  CHECK_THROWS_AS(gromov_region(1, 0.7, 0.0), InvalidArgument);
  CHECK_THROWS_AS(gromov_region(0, 0.7, 0.3), InvalidArgument);
}
