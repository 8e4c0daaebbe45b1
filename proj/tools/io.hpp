#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bpl/config.hpp"

namespace bpl::cli {

/// Column-major numeric table; headers carry unit annotations.
struct CsvTable {
  std::string file;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// "name [unit]" with "1" for dimensionless columns.
std::string column(const std::string& name, const UnitSignature& unit);
/// 17 significant digits, '.' separator, "nan"/"inf" for non-finite values.
std::string format_number(double x);
void write_csv(const std::filesystem::path& path, const CsvTable& t);
void write_text(const std::filesystem::path& path, const std::string& text);

/// One analytic-vs-oracle comparison.
struct Check {
  std::string name;
  double value = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  /// "rel", "abs", "max" (value <= tolerance), "min" (value > tolerance) or
  /// "flag" (value != 0).
  std::string rule;
  bool pass = false;
  std::string note;
};

Check check_rel(std::string name, double value, double reference, double tol);
Check check_abs(std::string name, double value, double reference, double tol);
Check check_max(std::string name, double value, double limit);
Check check_min(std::string name, double value, double limit);
Check check_flag(std::string name, bool ok, std::string note = {});
/// A check that could not be evaluated because the computation threw.
Check check_error(std::string name, const std::string& message);
Json to_json(const Check& c);

/// Merges `user` into `defaults`; unknown keys are config errors. Nested
/// objects merge recursively unless they are kind-tagged specs, which are
/// replaced whole.
Json resolve_config(const Json& defaults, const Json& user, const std::string& where = "config");

/// "a:b:n" (n equally spaced points, n >= 2) or a JSON array.
std::vector<double> parse_grid(const Json& spec, const std::string& what);

Json to_json(const Interval& iv);
Json vec(const std::vector<double>& v);

}  // namespace bpl::cli
