#include <algorithm>
#include <cmath>

#include "equilab/error.hpp"
#include "equilab/json_io.hpp"

namespace equilab::json_io {

using namespace equilab::measures;

void require_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw ValidationError(where + ": unknown field '" + key + "'");
  }
}

double read_number(const json& j, const std::string& where) {
  double v;
  if (j.is_number()) {
    v = j.get<double>();
  } else if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    std::size_t used = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw ValidationError(where + ": '" + s + "' is not a number");
    }
    if (used != s.size()) throw ValidationError(where + ": '" + s + "' is not a number");
  } else {
    throw ValidationError(where + ": expected a number");
  }
  if (!std::isfinite(v)) throw ValidationError(where + ": non-finite number");
  return v;
}

std::vector<double> read_reals(const json& j, const std::string& where) {
  if (!j.is_array()) throw ValidationError(where + ": expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(read_number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

Eigen::VectorXd read_vector(const json& j, const std::string& where) {
  const auto xs = read_reals(j, where);
  if (xs.empty()) throw ValidationError(where + ": empty vector");
  return Eigen::Map<const Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

Eigen::MatrixXd read_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ValidationError(where + ": expected a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXd m;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto row = read_reals(j[r], where + "[" + std::to_string(r) + "]");
    if (r == 0) m.resize(rows, static_cast<Eigen::Index>(row.size()));
    if (static_cast<Eigen::Index>(row.size()) != m.cols()) throw ValidationError(where + ": ragged matrix");
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = row[c];
  }
  return m;
}

json write_vector(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json write_matrix(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(write_vector(m.row(r).transpose()));
  return out;
}

namespace {

Eigen::VectorXd optional_density(const json& j, const std::string& where) {
  return j.contains("density") ? read_vector(j.at("density"), where + ".density") : Eigen::VectorXd();
}

}  // namespace

Measure measure_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
    throw ValidationError("measure: object with a string 'type' field required");
  const std::string type = j.at("type").get<std::string>();
  const std::string where = "measure(" + type + ")";
  if (type == "circle") {
    require_keys(j, {"type", "center", "radius", "axes", "arc", "density"}, where);
    const auto center = read_vector(j.at("center"), where + ".center");
    const double radius = read_number(j.at("radius"), where + ".radius");
    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(center.size()), e2 = e1;
    if (j.contains("axes")) {
      const auto axes = read_matrix(j.at("axes"), where + ".axes");
      if (axes.rows() != 2) throw ValidationError(where + ".axes: expected two rows");
      e1 = axes.row(0).transpose();
      e2 = axes.row(1).transpose();
    } else {
      if (center.size() < 2) throw ValidationError(where + ": ambient dimension must be >= 2");
      e1(0) = 1.0;
      e2(1) = 1.0;
    }
    double u0 = 0.0, u1 = 1.0;
    if (j.contains("arc")) {
      const auto arc = read_reals(j.at("arc"), where + ".arc");
      if (arc.size() != 2) throw ValidationError(where + ".arc: expected [u0, u1]");
      u0 = arc[0];
      u1 = arc[1];
    }
    return Measure::circle(center, radius, e1, e2, u0, u1, optional_density(j, where));
  }
  if (type == "sphere") {
    require_keys(j, {"type", "center", "radius", "density"}, where);
    return Measure::sphere(read_vector(j.at("center"), where + ".center"),
                           read_number(j.at("radius"), where + ".radius"), optional_density(j, where));
  }
  if (type == "torus_of_revolution") {
    require_keys(j, {"type", "center", "major_radius", "minor_radius", "density"}, where);
    Eigen::Vector3d c = Eigen::Vector3d::Zero();
    if (j.contains("center")) {
      const auto v = read_vector(j.at("center"), where + ".center");
      if (v.size() != 3) throw ValidationError(where + ".center: expected 3 entries");
      c = v;
    }
    return Measure::torus_of_revolution(c, read_number(j.at("major_radius"), where + ".major_radius"),
                                        read_number(j.at("minor_radius"), where + ".minor_radius"),
                                        optional_density(j, where));
  }
  if (type == "graph") {
    require_keys(j, {"type", "coefficients", "interval", "density"}, where);
    const auto iv = read_reals(j.at("interval"), where + ".interval");
    if (iv.size() != 2) throw ValidationError(where + ".interval: expected [x0, x1]");
    return Measure::graph(read_reals(j.at("coefficients"), where + ".coefficients"), iv[0], iv[1],
                          optional_density(j, where));
  }
  if (type == "segment") {
    require_keys(j, {"type", "v"}, where);
    return Measure::segment(read_vector(j.at("v"), where + ".v"));
  }
  if (type == "ifs") {
    require_keys(j, {"type", "maps", "probabilities"}, where);
    if (!j.at("maps").is_array()) throw ValidationError(where + ".maps: expected an array");
    std::vector<AffineMap> maps;
    for (std::size_t k = 0; k < j.at("maps").size(); ++k) {
      const auto& mj = j.at("maps")[k];
      const std::string w = where + ".maps[" + std::to_string(k) + "]";
      require_keys(mj, {"A", "b"}, w);
      maps.push_back({read_matrix(mj.at("A"), w + ".A"), read_vector(mj.at("b"), w + ".b")});
    }
    return Measure::ifs(std::move(maps), read_reals(j.at("probabilities"), where + ".probabilities"));
  }
  if (type == "ifs_preset") {
    require_keys(j, {"type", "name"}, where);
    if (!j.at("name").is_string()) throw ValidationError(where + ".name: expected a string");
    return Measure::ifs_preset(j.at("name").get<std::string>());
  }
  if (type == "lifted_circle") {
    require_keys(j, {"type"}, where);
    return Measure::lifted_circle();
  }
  throw ValidationError("measure: unknown type '" + type + "'");
}

json measure_to_json(const Measure& m) {
  json out;
  const auto& payload = m.payload();
  if (const auto* s = std::get_if<SurfaceMeasure>(&payload)) {
    if (const auto* c = std::get_if<Circle>(&s->family)) {
      out = {{"type", "circle"}, {"center", write_vector(c->center)}, {"radius", c->radius}};
      out["axes"] = json::array({write_vector(c->e1), write_vector(c->e2)});
      if (c->u0 != 0.0 || c->u1 != 1.0) out["arc"] = {c->u0, c->u1};
    } else if (const auto* sp = std::get_if<Sphere>(&s->family)) {
      out = {{"type", "sphere"}, {"center", write_vector(sp->center)}, {"radius", sp->radius}};
    } else if (const auto* t = std::get_if<TorusOfRevolution>(&s->family)) {
      out = {{"type", "torus_of_revolution"},
             {"center", write_vector(t->center)},
             {"major_radius", t->major_radius},
             {"minor_radius", t->minor_radius}};
    } else {
      const auto& g = std::get<GraphCurve>(s->family);
      out = {{"type", "graph"}, {"coefficients", g.coefficients}, {"interval", {g.x0, g.x1}}};
    }
    if (s->density.gradient.size() > 0) out["density"] = write_vector(s->density.gradient);
  } else if (const auto* seg = std::get_if<SegmentMeasure>(&payload)) {
    out = {{"type", "segment"}, {"v", write_vector(seg->v)}};
  } else if (const auto* ifs = std::get_if<IfsMeasure>(&payload)) {
    out = {{"type", "ifs"}, {"probabilities", ifs->probabilities}};
    out["maps"] = json::array();
    for (const auto& f : ifs->maps) out["maps"].push_back({{"A", write_matrix(f.A)}, {"b", write_vector(f.b)}});
  } else {
    out = {{"type", "lifted_circle"}};
  }
  return out;
}

}  // namespace equilab::json_io
