#ifndef HEISLAB_IO_HPP
#define HEISLAB_IO_HPP

// Text formats: polynomial forms as JSON, sphere meshes as SMESH text, curves
// and sweeps as CSV. Numbers are written with 17 significant digits in the C
// locale, so output is independent of the environment.

#include <heislab/common.hpp>
#include <heislab/forms.hpp>
#include <heislab/linking.hpp>
#include <heislab/sphere_mesh.hpp>

#include <fmt/format.h>
#include <json.hpp>

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace heislab {

using Json = nlohmann::json;

inline std::string format_real(double v) { return fmt::format("{:.17g}", v); }

// ---------------------------------------------------------------------------
// Forms

/// {dim, degree, terms: [{indices, monomials: [{exponents, coeff}]}]} with
/// 0-based indices. Only polynomial forms can be written.
inline Json form_to_json(const DifferentialForm& a) {
  require(a.is_polynomial(), "form_to_json: only polynomial forms can be serialised");
  Json terms = Json::array();
  for (const auto& [idx, f] : a.terms()) {
    Json monos = Json::array();
    for (const auto& [e, c] : f.polynomial().terms()) monos.push_back({{"exponents", e}, {"coeff", c}});
    terms.push_back({{"indices", idx}, {"monomials", monos}});
  }
  return {{"dim", a.dim()}, {"degree", a.degree()}, {"terms", terms}};
}

inline DifferentialForm form_from_json(const Json& j) {
  try {
    require(j.is_object(), "form JSON must be an object");
    for (const auto& [key, value] : j.items())
      require(key == "dim" || key == "degree" || key == "terms", "form JSON: unknown key '" + key + "'");
    const int dim = j.at("dim").get<int>();
    const int degree = j.at("degree").get<int>();
    require(dim >= 1 && degree >= 0 && degree <= dim, "form JSON: invalid dim/degree");
    DifferentialForm a(dim, degree);
    for (const auto& t : j.at("terms")) {
      const auto idx = t.at("indices").get<IndexSet>();
      Polynomial p(dim);
      for (const auto& m : t.at("monomials")) {
        const auto e = m.at("exponents").get<Polynomial::Exponents>();
        require(static_cast<int>(e.size()) == dim, "form JSON: exponent vector has wrong length");
        for (int x : e) require(x >= 0, "form JSON: negative exponent");
        p.add_term(e, m.at("coeff").get<double>());
      }
      a.add_term(idx, ScalarField(p));
    }
    return a;
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("form JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Meshes

/// SMESH k / vertex count / simplex count / vertex lines / simplex lines.
inline void write_smesh(std::ostream& os, const SimplicialSphereMesh& mesh) {
  os << "SMESH " << mesh.k << "\n" << mesh.vertices.size() << "\n" << mesh.simplices.size() << "\n";
  for (const auto& v : mesh.vertices) {
    for (int i = 0; i < v.size(); ++i) os << (i ? " " : "") << format_real(v[i]);
    os << "\n";
  }
  for (const auto& s : mesh.simplices) {
    for (std::size_t i = 0; i < s.size(); ++i) os << (i ? " " : "") << s[i];
    os << "\n";
  }
}

inline SimplicialSphereMesh read_smesh(std::istream& is) {
  std::string tag;
  SimplicialSphereMesh mesh;
  std::size_t nv = 0, ns = 0;
  is.imbue(std::locale::classic());
  require(static_cast<bool>(is >> tag >> mesh.k) && tag == "SMESH", "read_smesh: missing 'SMESH k' header");
  require(mesh.k >= 1 && mesh.k <= 3, "read_smesh: k must be 1..3");
  require(static_cast<bool>(is >> nv >> ns), "read_smesh: missing counts");
  mesh.level = -1;
  for (std::size_t i = 0; i < nv; ++i) {
    Vec v(mesh.k + 1);
    for (int c = 0; c <= mesh.k; ++c) require(static_cast<bool>(is >> v[c]), "read_smesh: truncated vertex list");
    mesh.vertices.push_back(v);
  }
  for (std::size_t i = 0; i < ns; ++i) {
    Simplex s(mesh.k + 1);
    for (int c = 0; c <= mesh.k; ++c) {
      require(static_cast<bool>(is >> s[c]), "read_smesh: truncated simplex list");
      require(s[c] >= 0 && static_cast<std::size_t>(s[c]) < nv, "read_smesh: vertex index out of range");
    }
    mesh.simplices.push_back(s);
  }
  return mesh;
}

// ---------------------------------------------------------------------------
// Curves and sweeps

/// "# closed=1" header, then one comma-separated point per line.
inline void write_curve_csv(std::ostream& os, const PLCurve& c) {
  os << "# closed=" << (c.closed ? 1 : 0) << "\n";
  for (const auto& p : c.points) {
    for (int i = 0; i < p.size(); ++i) os << (i ? "," : "") << format_real(p[i]);
    os << "\n";
  }
}

inline PLCurve read_curve_csv(std::istream& is) {
  PLCurve c;
  c.closed = true;
  std::string line;
  int dim = -1;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("closed=");
      if (pos != std::string::npos) c.closed = line.substr(pos + 7, 1) == "1";
      continue;
    }
    std::vector<double> vals;
    std::stringstream ss(line);
    ss.imbue(std::locale::classic());
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        vals.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw InvalidArgument("read_curve_csv: bad number '" + cell + "'");
      }
    }
    if (dim < 0) dim = static_cast<int>(vals.size());
    require(static_cast<int>(vals.size()) == dim && dim >= 2, "read_curve_csv: inconsistent column count");
    c.points.push_back(Eigen::Map<const Vec>(vals.data(), dim));
  }
  validate_curve(c);
  return c;
}

struct SweepRow {
  double eps;
  double value;
  double defect;
};

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "eps,value,defect\n";
  for (const auto& r : rows) os << format_real(r.eps) << "," << format_real(r.value) << "," << format_real(r.defect) << "\n";
}

}  // namespace heislab

#endif  // HEISLAB_IO_HPP
