#include "config.hpp"

#include <cmath>
#include <fstream>

#include "equilab/error.hpp"
#include "equilab/grid.hpp"
#include "equilab/json_io.hpp"

namespace equilab::cli {

using json_io::read_matrix;
using json_io::read_number;
using json_io::read_reals;
using json_io::read_vector;

json load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("config: cannot open " + path.string());
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw ValidationError("config: invalid JSON in " + path.string() + ": " + e.what());
  }
}

void require_payload_keys(const json& j, std::vector<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + ": expected an object");
  for (const char* k : kCommonKeys) allowed.push_back(k);
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw ValidationError(where + ": unknown field '" + key + "'");
  }
}

double number_or(const json& j, const char* key, double fallback, const std::string& where) {
  return j.contains(key) ? read_number(j.at(key), where + "." + key) : fallback;
}

int read_int(const json& j, const std::string& where) {
  const double v = read_number(j, where);
  if (v != std::round(v) || std::abs(v) > 1e9) throw ValidationError(where + ": expected an integer");
  return static_cast<int>(v);
}

std::size_t count_or(const json& j, const char* key, std::size_t fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const int v = read_int(j.at(key), where + "." + key);
  if (v < 0) throw ValidationError(where + "." + key + ": must be nonnegative");
  return static_cast<std::size_t>(v);
}

bool flag_or(const json& j, const char* key, bool fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) throw ValidationError(where + "." + key + ": expected true or false");
  return j.at(key).get<bool>();
}

std::string string_or(const json& j, const char* key, const std::string& fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string()) throw ValidationError(where + "." + key + ": expected a string");
  return j.at(key).get<std::string>();
}

torus::IVec read_ivec(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ValidationError(where + ": expected a nonempty integer array");
  torus::IVec k(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) k(static_cast<Eigen::Index>(i)) = read_int(j[i], where);
  return k;
}

std::complex<double> read_complex(const json& j, const std::string& where) {
  if (j.is_array()) {
    const auto v = read_reals(j, where);
    if (v.size() != 2) throw ValidationError(where + ": expected [re, im]");
    return {v[0], v[1]};
  }
  return read_number(j, where);
}

std::vector<double> read_grid(const json& j, const std::string& where) {
  std::vector<double> t;
  if (j.is_array()) {
    t = read_reals(j, where);
  } else {
    json_io::require_keys(j, {"spacing", "from", "to", "points"}, where);
    const std::string spacing = string_or(j, "spacing", "linear", where);
    if (!j.contains("from") || !j.contains("to") || !j.contains("points"))
      throw ValidationError(where + ": needs from, to and points");
    const double a = read_number(j.at("from"), where + ".from"), b = read_number(j.at("to"), where + ".to");
    const std::size_t n = count_or(j, "points", 0, where);
    if (n < 2 || !(b > a)) throw ValidationError(where + ": needs points >= 2 and to > from");
    if (spacing == "log") {
      if (!(a > 0.0)) throw ValidationError(where + ": log spacing needs from > 0");
      t = logspace(a, b, n);
    } else if (spacing == "linear") {
      t = linspace(a, b, n);
    } else {
      throw ValidationError(where + ".spacing: expected 'log' or 'linear'");
    }
  }
  if (t.empty()) throw ValidationError(where + ": empty grid");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1])) throw ValidationError(where + ": grid must be strictly increasing");
  return t;
}

FitMode read_fit_mode(const json& j, const char* key, const std::string& where) {
  const std::string m = string_or(j, key, "auto", where);
  if (m == "auto") return FitMode::Auto;
  if (m == "raw") return FitMode::Raw;
  if (m == "envelope") return FitMode::Envelope;
  throw ValidationError(where + "." + key + ": expected auto, raw or envelope");
}

torus::TorusLattice read_lattice(const json* j, int dim, const std::string& where) {
  if (!j || (j->is_string() && j->get<std::string>() == "standard")) return torus::TorusLattice::standard(dim);
  json_io::require_keys(*j, {"basis"}, where);
  if (!j->contains("basis")) throw ValidationError(where + ": missing basis");
  const auto B = read_matrix(j->at("basis"), where + ".basis");
  if (B.rows() != dim || B.cols() != dim) throw ValidationError(where + ".basis: dimension mismatch with the measure");
  return torus::TorusLattice(B);
}

torus::DilationFamily read_dilation(const json* j, int dim, const std::string& where) {
  if (!j) return torus::DilationFamily::homothety(dim);
  json_io::require_keys(*j, {"center", "rotation", "offset", "offset_rate"}, where);
  auto vec_or_zero = [&](const char* key) -> torus::Vec {
    if (!j->contains(key)) return torus::Vec::Zero(dim);
    const auto v = read_vector(j->at(key), where + "." + key);
    if (v.size() != dim) throw ValidationError(where + "." + key + ": dimension mismatch");
    return v;
  };
  torus::RotationPath rot = torus::RotationPath::identity();
  if (j->contains("rotation")) {
    const json& r = j->at("rotation");
    const std::string w = where + ".rotation";
    const std::string kind = string_or(r, "type", "identity", w);
    if (kind == "identity") {
      json_io::require_keys(r, {"type"}, w);
    } else if (kind == "constant") {
      json_io::require_keys(r, {"type", "matrix"}, w);
      if (!r.contains("matrix")) throw ValidationError(w + ": missing matrix");
      rot = torus::RotationPath::constant(read_matrix(r.at("matrix"), w + ".matrix"));
    } else if (kind == "planar") {
      json_io::require_keys(r, {"type", "plane", "omega", "phase"}, w);
      const auto plane = r.contains("plane") ? read_ivec(r.at("plane"), w + ".plane") : torus::IVec::LinSpaced(2, 0, 1);
      if (plane.size() != 2) throw ValidationError(w + ".plane: expected [i, j]");
      rot = torus::RotationPath::planar(plane(0), plane(1), number_or(r, "omega", 0.0, w), number_or(r, "phase", 0.0, w));
    } else {
      throw ValidationError(w + ".type: expected identity, constant or planar");
    }
  }
  return torus::DilationFamily(vec_or_zero("center"), rot, vec_or_zero("offset"), vec_or_zero("offset_rate"));
}

torus::TorusObservable read_observable(const json& j, const std::string& where) {
  json_io::require_keys(j, {"terms", "cosines", "real_valued"}, where);
  std::vector<torus::FourierTerm> terms;
  if (j.contains("terms")) {
    const json& ts = j.at("terms");
    if (!ts.is_array()) throw ValidationError(where + ".terms: expected an array");
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const std::string w = where + ".terms[" + std::to_string(i) + "]";
      json_io::require_keys(ts[i], {"k", "coefficient"}, w);
      if (!ts[i].contains("k")) throw ValidationError(w + ": missing k");
      terms.push_back({read_ivec(ts[i].at("k"), w + ".k"),
                       ts[i].contains("coefficient") ? read_complex(ts[i].at("coefficient"), w + ".coefficient") : 1.0});
    }
  }
  std::optional<torus::TorusObservable> f;
  if (!terms.empty()) f = torus::TorusObservable(terms, flag_or(j, "real_valued", false, where));
  if (j.contains("cosines")) {
    const json& cs = j.at("cosines");
    if (!cs.is_array()) throw ValidationError(where + ".cosines: expected an array");
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const std::string w = where + ".cosines[" + std::to_string(i) + "]";
      json_io::require_keys(cs[i], {"k", "amplitude", "phase"}, w);
      if (!cs[i].contains("k")) throw ValidationError(w + ": missing k");
      auto c = torus::TorusObservable::cosine(read_ivec(cs[i].at("k"), w + ".k"), number_or(cs[i], "amplitude", 1.0, w),
                                              number_or(cs[i], "phase", 0.0, w));
      f = f ? *f + c : c;
    }
  }
  if (!f) throw ValidationError(where + ": needs at least one term or cosine");
  return *f;
}

LieVector read_lie(const json& j, const std::string& where) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "X") return lie::X;
    if (s == "U") return lie::U;
    if (s == "V") return lie::V;
    if (s == "Theta") return lie::Theta;
    if (s == "R") return lie::R;
    throw ValidationError(where + ": unknown basis name '" + s + "'");
  }
  const auto v = read_reals(j, where);
  if (v.size() != 3) throw ValidationError(where + ": expected [a, b, c]");
  return {v[0], v[1], v[2]};
}

Sl2Element read_sl2(const json& j, const std::string& where) {
  if (j.is_object()) {
    json_io::require_keys(j, {"iwasawa"}, where);
    if (!j.contains("iwasawa")) throw ValidationError(where + ": missing iwasawa");
    const auto v = read_reals(j.at("iwasawa"), where + ".iwasawa");
    if (v.size() != 3 || !(v[1] > 0.0)) throw ValidationError(where + ".iwasawa: expected [x, y > 0, theta]");
    return from_iwasawa(v[0], v[1], v[2]);
  }
  const auto m = read_matrix(j, where);
  if (m.rows() != 2 || m.cols() != 2) throw ValidationError(where + ": expected a 2x2 matrix");
  return Sl2Element::from_entries(m(0, 0), m(0, 1), m(1, 0), m(1, 1));
}

std::shared_ptr<const fuchsian::FuchsianGroup> read_group(const json& j, const std::filesystem::path& base,
                                                          const std::string& where) {
  if (!j.is_string()) throw ValidationError(where + ": expected a path or \"builtin:bolza\"");
  const auto s = j.get<std::string>();
  if (s == "builtin:bolza") return std::make_shared<const fuchsian::FuchsianGroup>(fuchsian::FuchsianGroup::bolza());
  std::filesystem::path p(s);
  if (p.is_relative()) p = base / p;
  return std::make_shared<const fuchsian::FuchsianGroup>(fuchsian::FuchsianGroup::load(p.string()));
}

std::vector<BumpSpec> read_bumps(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ValidationError(where + ": expected a nonempty array");
  std::vector<BumpSpec> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    json_io::require_keys(j[i], {"center", "radius", "fiber_angle", "fiber_concentration", "amplitude"}, w);
    BumpSpec b;
    if (j[i].contains("center")) {
      const auto c = read_reals(j[i].at("center"), w + ".center");
      if (c.size() != 2 || !(c[1] > 0.0)) throw ValidationError(w + ".center: expected [x, y > 0]");
      b.center = UpperHalfPoint(c[0], c[1]);
    }
    b.radius = number_or(j[i], "radius", b.radius, w);
    b.fiber_angle = number_or(j[i], "fiber_angle", b.fiber_angle, w);
    b.fiber_concentration = number_or(j[i], "fiber_concentration", b.fiber_concentration, w);
    if (j[i].contains("amplitude")) b.amplitude = read_complex(j[i].at("amplitude"), w + ".amplitude");
    out.push_back(b);
  }
  return out;
}

std::vector<BumpSpec> preset_bumps(const std::string& id) {
  if (id == "two_bumps") {
    BumpSpec a;
    a.center = UpperHalfPoint(0.2, 1.1);
    a.radius = 2.0;
    BumpSpec b;
    b.center = UpperHalfPoint(-0.4, 0.7);
    b.radius = 2.0;
    b.fiber_angle = 1.0;
    b.amplitude = 0.6;
    return {a, b};
  }
  if (id == "single_bump") {
    BumpSpec a;
    a.radius = 1.5;
    return {a};
  }
  throw ValidationError("observable_id: unknown id '" + id + "' (known: two_bumps, single_bump)");
}

}  // namespace equilab::cli
