#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "bpl/quadrature.hpp"
#include "bpl/space.hpp"

namespace bpl {

/// An integrand used somewhere in the library, with a known value.
struct NamedIntegral {
  std::string name;
  IntegrandND f;
  /// Quadrature domain, possibly infinite.
  Box box;
  /// Finite box for Monte Carlo; must carry all but a negligible share of
  /// the mass.
  Box mc_box;
  double truth = 0.0;
  double quad_rel_tol = 1e-9;
  QuadOptions options{};
};

/// The regression set: 24 integrals from every module.
std::vector<NamedIntegral> regression_integrals();

struct RegressionRow {
  std::string name;
  double truth = 0.0;
  IntegralResult quad;
  double quad_rel_error = 0.0;
  bool quad_pass = false;
  /// Monte Carlo fields are set only when requested.
  bool mc_run = false;
  IntegralResult mc;
  /// |mc - quad| / sqrt(mc.error^2 + quad.error^2).
  double mc_z = 0.0;
  bool mc_pass = false;
};

/// Quadrature against truth, and optionally Monte Carlo against quadrature
/// within 3 combined standard errors.
RegressionRow run_regression(const NamedIntegral& item, bool with_mc, std::size_t mc_samples, std::uint64_t seed);

}  // namespace bpl
