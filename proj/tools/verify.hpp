#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "io.hpp"

namespace bpl::cli {

struct VerifyOptions {
  /// "fast" (quadrature only) or "full" (adds Monte Carlo and chains).
  std::string level = "fast";
  std::uint64_t seed = 1;
  /// Negative control: "gaussian-bf-constant" corrupts one constant of the
  /// Gaussian Bayes factor formula before it is compared.
  std::optional<std::string> fault_injection;
  std::size_t mc_samples = 1000000;
  std::size_t chain_steps = 1000000;
};

VerifyOptions verify_options(const std::string& level, std::uint64_t seed, const Json& config);

struct VerifyOutput {
  std::vector<Check> checks;
  Json report;
  bool pass() const;
};

VerifyOutput run_verify(const VerifyOptions& opt);

}  // namespace bpl::cli
