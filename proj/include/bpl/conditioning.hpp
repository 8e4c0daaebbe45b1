#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bpl/density.hpp"
#include "bpl/diffeomorphism.hpp"
#include "bpl/forward.hpp"
#include "bpl/quadrature.hpp"
#include "bpl/space.hpp"
#include "bpl/units.hpp"

namespace bpl {

/// A 1-D curve in a 2-D chart, t -> embed(t) for t in range.
struct Curve {
  std::string chart;
  Interval range;
  std::function<Point(double)> embed;
  /// Unit of the parameter t.
  UnitSignature unit;
  /// Direction used to cut across the curve when integrating slabs.
  Point transverse{0.0, 1.0};

  /// x2 = x1, parameterized by x1.
  static Curve diagonal(std::string chart, Interval range, UnitSignature unit = {});
  Point operator()(double t) const { return embed(t); }
};

/// Rejects curves that revisit a point at `samples` equally spaced
/// parameters.
void check_injective(const Curve& c, std::size_t samples = 257);

/// A family of slabs {x : distance(to_chart(x)) < eps} around a curve. The
/// distance lives in `chart`; `to_chart` maps the density's coordinates into
/// it (identity when absent).
struct SlabFamily {
  std::string name;
  std::string chart;
  std::function<double(PointView)> distance;
  std::optional<Diffeomorphism> to_chart;

  /// |x2 - x1| in the density's own chart.
  static SlabFamily diagonal_gap(std::string chart);
  /// |y2 - y1| with y = h(x), e.g. the velocity gap seen from slowness.
  static SlabFamily diagonal_gap_through(std::string chart, Diffeomorphism h);
  /// |x2 - x1| * width; proportional families must give the same limit.
  static SlabFamily scaled_diagonal_gap(std::string chart, double width);
};

/// Restriction of p to the curve, renormalized over the curve parameter with
/// no metric factor.
Density naive_conditional(const Density& p, const Curve& c);

/// 1-D pushforward.
Density transform_1d(const Density& p, const Diffeomorphism& h);

/// Slab marginal t -> integral of p across {distance < eps} along the
/// curve's transverse direction, renormalized over t.
Density slab_conditional(const Density& p, const SlabFamily& fam, double eps, const Curve& c);

struct SlabLimitOptions {
  std::vector<double> eps{1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
  std::size_t grid_points = 200;
  /// Relative slack allowed when successive deviations grow.
  double monotone_slack = 0.1;
  /// Deviations below this are treated as converged noise.
  double noise_floor = 1e-7;
};

struct SlabLimit {
  std::vector<double> grid;
  /// Normalized slab conditional on the grid, one row per eps.
  std::vector<std::vector<double>> values;
  /// deviation[i] = sup |values[i] - values[i-1]|; deviation[0] = NaN.
  std::vector<double> deviation;
  double order = 1.0;
  std::vector<double> extrapolated;
  Density limit;
};

/// Slab conditionals along a decreasing eps sequence with a Richardson
/// extrapolation. Fails with NoStableLimit when deviations grow.
SlabLimit slab_limit(const Density& p, const SlabFamily& fam, const Curve& c, const SlabLimitOptions& opt = {});

/// Midpoints of n equal cells covering the interval.
std::vector<double> cell_midpoints(Interval iv, std::size_t n);

/// Least-squares slope of log f against log t over the middle `fraction`
/// of the support.
double fit_loglog_exponent(const std::function<double(double)>& f, Interval support, std::size_t n = 200,
                           double fraction = 0.8);

struct BorelConfig {
  Box velocity_box{{{1.0, 5.0}, {1.0, 5.0}}};
  Box data_box{{{0.5, 1.0}, {0.5, 1.0}}};
  RayMatrix rays{};
  std::size_t grid_points = 200;
};

enum class BorelVariant { Slowness, Identity };

/// Posteriors of the tomography toy in both charts.
struct BorelModels {
  Density velocity_posterior;
  Density slowness_posterior;
  Curve velocity_diagonal;
  Curve slowness_diagonal;
};
BorelModels borel_models(const BorelConfig& cfg);

struct ContradictionReport {
  BorelVariant variant = BorelVariant::Slowness;
  Interval support;
  std::vector<double> grid;
  std::vector<double> naive_velocity;
  std::vector<double> back_transformed;
  std::vector<double> ratio;
  double constancy = 0.0;
  double exponent = 0.0;
  double ratio_exponent = 0.0;
  double ratio_spread = 0.0;
  bool constancy_pass = false;
  bool exponent_pass = false;
  bool contradiction = false;
  double velocity_mass = 0.0;
  double back_transformed_mass = 0.0;
  std::string parameterization;
};

inline constexpr double kConstancyTol = 1e-6;
inline constexpr double kExponentTol = 0.02;

/// Naive velocity conditional against the naive slowness conditional carried
/// back to velocity. The identity variant compares the velocity conditional
/// with itself.
ContradictionReport borel_contradiction_report(const BorelConfig& cfg, BorelVariant variant = BorelVariant::Slowness);

/// Slab limits of the slowness posterior for a slowness-gap slab and a
/// velocity-gap slab, compared to the naive slowness conditional.
struct SlabComparison {
  SlabLimit slowness_slab;
  SlabLimit velocity_slab;
  std::vector<double> naive_slowness;
  /// sup |slowness slab at smallest eps - naive|.
  double slowness_sup = 0.0;
  /// Exponent of velocity-slab / slowness-slab against s1.
  double ratio_exponent = 0.0;
};
SlabComparison borel_slab_comparison(const BorelConfig& cfg, const SlabLimitOptions& opt = {});

}  // namespace bpl
