#include "bpl/config.hpp"

#include <cmath>

#include "bpl/error.hpp"

namespace bpl {

namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorCode::InvalidArgument, "config: " + what); }

const Json& need(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing key \"") + key + "\"");
  return j.at(key);
}

double number(const Json& j, const char* what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  bad(std::string(what) + " must be a number");
}

Point point(const Json& j, const char* what) {
  if (!j.is_array()) bad(std::string(what) + " must be an array");
  Point out;
  for (const auto& v : j) out.push_back(number(v, what));
  return out;
}

std::string kind_of(const Json& j) {
  const Json& k = need(j, "kind");
  if (!k.is_string()) bad("\"kind\" must be a string");
  return k.get<std::string>();
}

std::vector<UnitSignature> optional_units(const Json& j) {
  return j.contains("units") ? units_from_json(j.at("units")) : std::vector<UnitSignature>{};
}

}  // namespace

UnitSignature unit_from_json(const Json& j) {
  if (!j.is_string()) bad("unit must be a string");
  try {
    return UnitSignature::parse(j.get<std::string>());
  } catch (const Error& e) {
    bad(std::string("unit: ") + e.what());
  }
}

std::vector<UnitSignature> units_from_json(const Json& j) {
  if (!j.is_array()) bad("units must be an array");
  std::vector<UnitSignature> out;
  for (const auto& u : j) out.push_back(unit_from_json(u));
  return out;
}

Json to_json(const UnitSignature& u) { return u.str(); }

Box box_from_json(const Json& j) {
  if (!j.is_array()) bad("bounds must be an array of [lo, hi] pairs");
  Box b;
  for (const auto& a : j) {
    if (!a.is_array() || a.size() != 2) bad("bounds must be an array of [lo, hi] pairs");
    const double lo = a[0].is_null() ? -kInf : number(a[0], "bound");
    const double hi = a[1].is_null() ? kInf : number(a[1], "bound");
    b.axes.push_back({lo, hi});
  }
  return b;
}

Json to_json(const Box& b) {
  Json out = Json::array();
  for (const auto& a : b.axes) {
    Json lo = std::isfinite(a.lo) ? Json(a.lo) : Json(a.lo < 0 ? "-inf" : "inf");
    Json hi = std::isfinite(a.hi) ? Json(a.hi) : Json(a.hi < 0 ? "-inf" : "inf");
    out.push_back(Json::array({lo, hi}));
  }
  return out;
}

DiscreteDistribution discrete_from_json(const Json& j) {
  const Json& atoms = j.is_array() ? j : need(j, "atoms");
  if (!atoms.is_array() || atoms.empty()) bad("atoms must be a nonempty array");
  std::vector<DiscreteDistribution::Atom> out;
  for (const auto& a : atoms) {
    if (!a.is_array() || a.size() != 2) bad("atoms must be [value, probability] pairs");
    out.push_back({number(a[0], "atom value"), number(a[1], "atom probability")});
  }
  return DiscreteDistribution(std::move(out));
}

Density density_from_json(const Json& j) {
  const std::string kind = kind_of(j);
  if (kind == "uniform-box") return Density::uniform_box(box_from_json(need(j, "bounds")), optional_units(j));
  if (kind == "gaussian-iid") {
    return Density::gaussian_iid(point(need(j, "mean"), "mean"), number(need(j, "sigma"), "sigma"), optional_units(j));
  }
  if (kind == "constant") {
    std::optional<bool> improper;
    if (j.contains("improper")) improper = j.at("improper").get<bool>();
    return Density::constant(box_from_json(need(j, "bounds")), number(need(j, "value"), "value"), improper,
                             optional_units(j));
  }
  if (kind == "discrete") return Density::discrete(discrete_from_json(j));
  if (kind == "product") {
    std::vector<Density> factors;
    for (const auto& f : need(j, "factors")) factors.push_back(density_from_json(f));
    return Density::product(std::move(factors));
  }
  if (kind == "pushforward") return pushforward(density_from_json(need(j, "base")), diffeomorphism_from_json(need(j, "map")));
  bad("unknown density kind \"" + kind + "\"");
}

Diffeomorphism diffeomorphism_from_json(const Json& j) {
  const std::string kind = kind_of(j);
  auto dim = [&] {
    const double d = number(need(j, "dim"), "dim");
    if (!(d >= 1.0) || d != std::floor(d)) bad("dim must be a positive integer");
    return static_cast<std::size_t>(d);
  };
  if (kind == "identity") return Diffeomorphism::identity(dim());
  if (kind == "reciprocal") {
    const double r = j.contains("excluded_radius") ? number(j.at("excluded_radius"), "excluded_radius") : 1e-9;
    return Diffeomorphism::reciprocal(dim(), r);
  }
  if (kind == "affine") return Diffeomorphism::affine(point(need(j, "scale"), "scale"), point(need(j, "shift"), "shift"));
  if (kind == "compose") {
    const Json& maps = need(j, "maps");
    if (!maps.is_array() || maps.empty()) bad("maps must be a nonempty array");
    Diffeomorphism out = diffeomorphism_from_json(maps[0]);
    for (std::size_t i = 1; i < maps.size(); ++i) out = compose(diffeomorphism_from_json(maps[i]), out);
    return out;
  }
  bad("unknown diffeomorphism kind \"" + kind + "\"");
}

ForwardModel forward_from_json(const Json& j) {
  const std::string kind = kind_of(j);
  auto rays = [&] {
    RayMatrix r;
    if (!j.contains("rays")) return r;
    const Json& m = j.at("rays");
    if (!m.is_array() || m.size() != 2) bad("rays must be a 2x2 array");
    for (std::size_t i = 0; i < 2; ++i) {
      if (!m[i].is_array() || m[i].size() != 2) bad("rays must be a 2x2 array");
      for (std::size_t k = 0; k < 2; ++k) r.length[i][k] = number(m[i][k], "ray length");
    }
    return r;
  };
  if (kind == "tomography-slowness") return models::tomography_slowness(rays());
  if (kind == "tomography-velocity") return models::tomography_velocity(rays());
  if (kind == "one-block") return models::one_block(number(need(j, "L"), "L"));
  if (kind == "two-block") return models::two_block(number(need(j, "L"), "L"));
  if (kind == "linear") return models::linear(number(need(j, "k"), "k"));
  if (kind == "identity") return models::identity();
  bad("unknown forward model kind \"" + kind + "\"");
}

}  // namespace bpl
