#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>

#include "bpl/space.hpp"

namespace bpl {

struct IntegralResult {
  double value = 0.0;
  /// Estimator bound for quadrature, standard error for Monte Carlo.
  double error = 0.0;
  std::string method;
  std::size_t evaluations = 0;
  bool converged = true;
};

struct QuadOptions {
  double rel_tol = 1e-8;
  double abs_tol = 0.0;
  std::size_t max_intervals = 4000;
  /// Equal panels the range is cut into before adaptive refinement starts.
  /// Raise it for integrands whose support is a small fraction of the range.
  std::size_t initial_panels = 1;
  /// Length scale of the rational map used on infinite ranges.
  double scale = 1.0;
  /// Split point for doubly infinite ranges.
  double center = 0.0;
  /// When nonzero, a finite 1-D integral first locates the nonzero interval
  /// of its integrand with this many scan points and integrates only there;
  /// on boxes only the innermost axis does. Suits indicator-weighted
  /// integrands with convex support.
  std::size_t locate_support = 0;
};

using Integrand1D = std::function<double(double)>;
using IntegrandND = std::function<double(PointView)>;

/// Largest interval of the range on which f is nonzero, found by scanning
/// and bisecting the edges; nullopt when the scan never hits.
std::optional<Interval> nonzero_interval(const std::function<double(double)>& f, Interval range,
                                         std::size_t scan_points = 4097);

/// Globally adaptive Gauss-Kronrod (7/15) integration over an interval.
/// Infinite ends are handled with x = a + scale * (1 - t) / t. When the
/// subdivision budget runs out the result is returned with converged = false.
IntegralResult quad_integrate(const Integrand1D& f, Interval range, const QuadOptions& opt = {});

/// Iterated 1-D integration over a box of dimension 1-3 (any dimension
/// works, but cost grows geometrically). Inner integrals use a tolerance ten
/// times tighter than the outer one.
IntegralResult quad_integrate(const IntegrandND& f, const Box& box, const QuadOptions& opt = {});

}  // namespace bpl
