#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "io.hpp"

namespace bpl::cli {

struct RunOptions {
  std::uint64_t seed = 1;
  std::optional<double> v_min;
  std::optional<double> v_max;
  std::optional<std::string> sigma_d_grid;
  std::optional<std::string> sigma_s_grid;
};

struct DemoOutput {
  /// Deterministic report: no timestamps, no timings.
  Json report;
  std::vector<CsvTable> tables;
  std::vector<Check> checks;
  /// Short lines for stdout.
  std::vector<std::string> summary;

  bool verified() const;
};

const std::vector<std::string>& demo_names();
Json demo_defaults(const std::string& name);
/// Throws bpl::Error (or nlohmann::json::exception) on config errors.
DemoOutput run_demo(const std::string& name, const Json& user_config, const RunOptions& opt);

}  // namespace bpl::cli
