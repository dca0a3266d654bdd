#include <catch_amalgamated.hpp>

#include <heislab/io.hpp>
#include <heislab/lefschetz.hpp>

#include <sstream>

using namespace heislab;

TEST_CASE("form JSON round trip is exact") {
  const Polynomial x = Polynomial::variable(3, 0), t = Polynomial::variable(3, 2);
  DifferentialForm a(3, 2);
  a.add_term({0, 1}, 0.1 * x * t + Polynomial::constant(3, 1.0 / 3.0));
  a.add_term({1, 2}, -7.0 * t * t);
  const Json j = form_to_json(a);
  CHECK(form_from_json(Json::parse(j.dump())) == a);
  CHECK(form_from_json(form_to_json(contact_form(2))) == contact_form(2));
}

TEST_CASE("malformed form JSON is rejected") {
  CHECK_THROWS_AS(form_from_json(Json::parse(R"({"dim": 3, "degree": 1, "terms": [], "extra": 1})")), InvalidArgument);
  CHECK_THROWS_AS(form_from_json(Json::parse(R"({"dim": 3, "terms": []})")), InvalidArgument);
  CHECK_THROWS_AS(form_from_json(Json::parse(R"({"dim": 3, "degree": 4, "terms": []})")), InvalidArgument);
  CHECK_THROWS_AS(
      form_from_json(Json::parse(
          R"({"dim": 3, "degree": 1, "terms": [{"indices": [0], "monomials": [{"exponents": [1, 0], "coeff": 1}]}]})")),
      InvalidArgument);
  CHECK_THROWS_AS(form_from_json(Json::parse(R"({"dim": "three", "degree": 1, "terms": []})")), InvalidArgument);
  DifferentialForm c(2, 1);
  c.add_term({0}, ScalarField::callable(2, [](const Vec& v) { return v[0]; }));
  CHECK_THROWS_AS(form_to_json(c), InvalidArgument);
}

TEST_CASE("SMESH round trip preserves the mesh bit for bit") {
  for (int k = 1; k <= 3; ++k) {
    const SimplicialSphereMesh mesh = make_sphere_mesh(k, 2);
    std::stringstream ss;
    write_smesh(ss, mesh);
    const SimplicialSphereMesh back = read_smesh(ss);
    CHECK(back.k == k);
    CHECK(back.simplices == mesh.simplices);
    REQUIRE(back.vertices.size() == mesh.vertices.size());
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) CHECK(back.vertices[i] == mesh.vertices[i]);
    CHECK(is_closed_oriented(back));
  }
}

TEST_CASE("truncated or malformed SMESH is rejected") {
  std::stringstream bad_header("MESH 2\n1\n0\n");
  CHECK_THROWS_AS(read_smesh(bad_header), InvalidArgument);
  std::stringstream truncated("SMESH 1\n3\n3\n1 0\n0 1\n");
  CHECK_THROWS_AS(read_smesh(truncated), InvalidArgument);
  std::stringstream out_of_range("SMESH 1\n2\n1\n1 0\n0 1\n0 5\n");
  CHECK_THROWS_AS(read_smesh(out_of_range), InvalidArgument);
}

TEST_CASE("curve CSV round trip") {
  PLCurve c;
  for (int i = 0; i < 5; ++i) c.points.push_back(Eigen::Vector3d(std::cos(i * 1.3), 0.1 * i, 1.0 / 3.0));
  std::stringstream ss;
  write_curve_csv(ss, c);
  const PLCurve back = read_curve_csv(ss);
  CHECK(back.closed);
  REQUIRE(back.points.size() == c.points.size());
  for (std::size_t i = 0; i < c.points.size(); ++i) CHECK(back.points[i] == c.points[i]);

  std::stringstream open("# closed=0\n0,0,0\n1,0,0\n");
  CHECK_FALSE(read_curve_csv(open).closed);
  std::stringstream ragged("0,0,0\n1,0\n2,0,0\n");
  CHECK_THROWS_AS(read_curve_csv(ragged), InvalidArgument);
  std::stringstream text("0,zero,0\n");
  CHECK_THROWS_AS(read_curve_csv(text), InvalidArgument);
}

TEST_CASE("sweep CSV has a header and full precision") {
  std::stringstream ss;
  write_sweep_csv(ss, {{0.1, 1.0 / 3.0, 1e-5}, {0.05, 2.0, 0.0}});
  std::string header, first;
  std::getline(ss, header);
  std::getline(ss, first);
  CHECK(header == "eps,value,defect");
  CHECK(first == "0.10000000000000001,0.33333333333333331,1.0000000000000001e-05");
}
