#include "io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "bpl/error.hpp"

namespace bpl::cli {

std::string column(const std::string& name, const UnitSignature& unit) { return name + " [" + unit.str() + "]"; }

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::InvalidArgument, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorCode::InvalidArgument, "cannot write " + path.string());
}

void write_csv(const std::filesystem::path& path, const CsvTable& t) {
  std::string text;
  for (std::size_t i = 0; i < t.header.size(); ++i) text += (i ? "," : "") + t.header[i];
  text += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) text += (i ? "," : "") + format_number(row[i]);
    text += '\n';
  }
  write_text(path, text);
}

namespace {

Check make(std::string name, double value, double reference, double tol, std::string rule, bool pass) {
  return {std::move(name), value, reference, tol, std::move(rule), pass, {}};
}

}  // namespace

Check check_rel(std::string name, double value, double reference, double tol) {
  const double err = std::fabs(value - reference) / std::fabs(reference);
  return make(std::move(name), value, reference, tol, "rel", err <= tol);
}

Check check_abs(std::string name, double value, double reference, double tol) {
  return make(std::move(name), value, reference, tol, "abs", std::fabs(value - reference) <= tol);
}

Check check_max(std::string name, double value, double limit) {
  return make(std::move(name), value, limit, limit, "max", value <= limit);
}

Check check_min(std::string name, double value, double limit) {
  return make(std::move(name), value, limit, limit, "min", value > limit);
}

Check check_flag(std::string name, bool ok, std::string note) {
  Check c = make(std::move(name), ok ? 1.0 : 0.0, 1.0, 0.0, "flag", ok);
  c.note = std::move(note);
  return c;
}

Check check_error(std::string name, const std::string& message) {
  Check c = make(std::move(name), std::nan(""), std::nan(""), 0.0, "error", false);
  c.note = message;
  return c;
}

Json to_json(const Check& c) {
  Json j{{"name", c.name}, {"rule", c.rule}, {"pass", c.pass}};
  if (c.rule != "flag" && c.rule != "error") {
    j["value"] = c.value;
    j["reference"] = c.reference;
    j["tolerance"] = c.tolerance;
  }
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

Json resolve_config(const Json& defaults, const Json& user, const std::string& where) {
  if (user.is_null()) return defaults;
  if (!user.is_object()) fail(ErrorCode::InvalidArgument, where + " must be a JSON object");
  Json out = defaults;
  for (const auto& [key, value] : user.items()) {
    if (!defaults.contains(key)) fail(ErrorCode::InvalidArgument, where + ": unknown key \"" + key + "\"");
    const Json& d = defaults.at(key);
    if (d.is_object() && !d.contains("kind") && value.is_object()) {
      out[key] = resolve_config(d, value, where + "." + key);
    } else {
      out[key] = value;
    }
  }
  return out;
}

std::vector<double> parse_grid(const Json& spec, const std::string& what) {
  std::vector<double> out;
  if (spec.is_array()) {
    for (const auto& v : spec) {
      if (!v.is_number()) fail(ErrorCode::InvalidArgument, what + " entries must be numbers");
      out.push_back(v.get<double>());
    }
    return out;
  }
  if (!spec.is_string()) fail(ErrorCode::InvalidArgument, what + " must be \"a:b:n\" or an array");
  const std::string s = spec.get<std::string>();
  double a = 0.0;
  double b = 0.0;
  long n = 0;
  char tail = 0;
  if (std::sscanf(s.c_str(), "%lf:%lf:%ld%c", &a, &b, &n, &tail) != 3 || n < 2) {
    fail(ErrorCode::InvalidArgument, what + " must look like a:b:n with n >= 2, got \"" + s + "\"");
  }
  for (long i = 0; i < n; ++i) out.push_back(i + 1 == n ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  return out;
}

Json to_json(const Interval& iv) { return Json::array({iv.lo, iv.hi}); }

Json vec(const std::vector<double>& v) { return Json(v); }

}  // namespace bpl::cli
