#include "bpl/conditioning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

#include "bpl/error.hpp"
#include "bpl/parallel.hpp"

namespace bpl {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double loglog_slope(std::span<const double> t, std::span<const double> y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0) || !(y[i] > 0.0)) fail(ErrorCode::InvalidArgument, "log-log fit needs positive values");
    const double lx = std::log(t[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) fail(ErrorCode::SupportTooSmall, "support too small to fit exponent");
  const double denom = static_cast<double>(n) * sxx - sx * sx;
  if (!(std::fabs(denom) > 0.0)) fail(ErrorCode::SupportTooSmall, "support too small to fit exponent");
  return (static_cast<double>(n) * sxy - sx * sy) / denom;
}

Interval middle(Interval support, double fraction) {
  const double trim = 0.5 * (1.0 - fraction) * support.length();
  return {support.lo + trim, support.hi - trim};
}

double spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  if (!(*lo > 0.0)) return std::numeric_limits<double>::infinity();
  return *hi / *lo - 1.0;
}

bool too_small(const std::optional<Interval>& iv) {
  if (!iv) return true;
  const double scale = std::max(1.0, std::max(std::fabs(iv->lo), std::fabs(iv->hi)));
  return !(iv->length() > 1e-9 * scale);
}

Density linear_interpolant(std::vector<double> x, std::vector<double> y, UnitSignature unit) {
  const Interval range{x.front(), x.back()};
  auto eval = [x = std::move(x), y = std::move(y)](PointView p) {
    const double t = p[0];
    auto it = std::upper_bound(x.begin(), x.end(), t);
    if (it == x.begin()) return y.front();
    if (it == x.end()) return y.back();
    const std::size_t i = static_cast<std::size_t>(it - x.begin());
    const double w = (t - x[i - 1]) / (x[i] - x[i - 1]);
    return std::max(0.0, (1.0 - w) * y[i - 1] + w * y[i]);
  };
  return Density::custom(Box({range}), std::move(eval), {std::move(unit)});
}

}  // namespace

Curve Curve::diagonal(std::string chart, Interval range, UnitSignature unit) {
  Curve c;
  c.chart = std::move(chart);
  c.range = range;
  c.embed = [](double t) { return Point{t, t}; };
  c.unit = std::move(unit);
  return c;
}

void check_injective(const Curve& c, std::size_t samples) {
  if (samples < 2 || !c.range.finite()) return;
  std::vector<Point> pts;
  for (std::size_t i = 0; i < samples; ++i) {
    pts.push_back(c(c.range.lo + c.range.length() * static_cast<double>(i) / static_cast<double>(samples - 1)));
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (pts[i] == pts[j]) fail(ErrorCode::InvalidArgument, "curve embedding is not injective");
    }
  }
}

SlabFamily SlabFamily::diagonal_gap(std::string chart) {
  return {"gap-" + chart, chart, [](PointView y) { return std::fabs(y[1] - y[0]); }, std::nullopt};
}

SlabFamily SlabFamily::diagonal_gap_through(std::string chart, Diffeomorphism h) {
  return {"gap-" + chart, chart, [](PointView y) { return std::fabs(y[1] - y[0]); }, std::move(h)};
}

SlabFamily SlabFamily::scaled_diagonal_gap(std::string chart, double width) {
  if (!(width > 0.0)) fail(ErrorCode::InvalidArgument, "slab width factor must be positive");
  return {"scaled-gap-" + chart, chart, [width](PointView y) { return std::fabs(y[1] - y[0]) / width; },
          std::nullopt};
}

Density naive_conditional(const Density& p, const Curve& c) {
  if (p.dim() != 2) fail(ErrorCode::DimensionMismatch, "naive conditional needs a 2-D density");
  auto restricted = [p, c](double t) { return p(c(t)); };
  const auto support = nonzero_interval(restricted, c.range);
  if (!support) fail(ErrorCode::CurveMissesSupport, "curve misses support");
  QuadOptions opt;
  opt.rel_tol = 1e-11;
  opt.initial_panels = 16;
  const IntegralResult r = quad_integrate(restricted, *support, opt);
  if (!(r.value > 0.0)) fail(ErrorCode::CurveMissesSupport, "curve misses support");
  const double k = 1.0 / r.value;
  return Density::custom(Box({*support}), [restricted, k](PointView t) { return k * restricted(t[0]); }, {c.unit});
}

Density transform_1d(const Density& p, const Diffeomorphism& h) {
  if (p.dim() != 1 || h.dim() != 1) fail(ErrorCode::DimensionMismatch, "transform_1d needs 1-D inputs");
  return pushforward(p, h);
}

namespace {

struct SlabCut {
  Point x0;
  Interval across;
};

// Transverse extent of the slab through c(t); empty when c(t) itself is
// outside the slab.
std::optional<SlabCut> slab_cut(const SlabFamily& fam, double eps, const Curve& c, double t) {
  SlabCut cut{c(t), {0.0, 0.0}};
  const Point& e = c.transverse;
  auto inside = [&](double u) {
    Point x = cut.x0;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += u * e[i];
    if (fam.to_chart) {
      if (!fam.to_chart->in_domain(x)) return false;
      return fam.distance((*fam.to_chart)(x)) < eps;
    }
    return fam.distance(x) < eps;
  };
  if (!inside(0.0)) return std::nullopt;
  auto edge = [&](double sign) {
    double in = 0.0;
    double step = eps / 64.0;
    int doublings = 0;
    while (inside(sign * step)) {
      in = step;
      step *= 2.0;
      if (++doublings > 200) fail(ErrorCode::InvalidArgument, "slab '" + fam.name + "' is unbounded across the curve");
    }
    double out = step;
    for (int it = 0; it < 200; ++it) {
      const double m = 0.5 * (in + out);
      if (m == in || m == out) break;
      (inside(sign * m) ? in : out) = m;
    }
    return sign * in;
  };
  cut.across = {edge(-1.0), edge(1.0)};
  return cut;
}

double slab_mass(const Density& p, const SlabFamily& fam, double eps, const Curve& c, double t) {
  const auto cut = slab_cut(fam, eps, c, t);
  if (!cut || !(cut->across.length() > 0.0)) return 0.0;
  const Point& e = c.transverse;
  auto along = [&](double u) {
    Point x = cut->x0;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += u * e[i];
    return p(x);
  };
  // Cut the support edges out first so the quadrature sees a smooth
  // integrand.
  const auto inner = nonzero_interval(along, cut->across, 65);
  if (!inner) return 0.0;
  QuadOptions opt;
  opt.rel_tol = 1e-11;
  return quad_integrate(along, *inner, opt).value;
}

// Pieces of the curve range for the outer slab integral. Near each edge of
// the naive support the slab is partly cut off over a stretch comparable to
// its width; those stretches get their own pieces so the quadrature cannot
// step over them.
std::vector<Interval> slab_pieces(const Density& p, const SlabFamily& fam, double eps, const Curve& c) {
  const auto support = nonzero_interval([&](double t) { return p(c(t)); }, c.range);
  if (!support) fail(ErrorCode::SlabMassZero, "slab mass is zero");
  double width = 0.0;
  for (double t : {support->lo, support->mid(), support->hi}) {
    if (const auto cut = slab_cut(fam, eps, c, t)) width = std::max(width, cut->across.length());
  }
  const double h = std::min(4.0 * width, 0.25 * support->length());
  const double a = support->lo;
  const double b = support->hi;
  std::vector<Interval> pieces{{std::max(c.range.lo, a - h), a}, {a, a + h}, {a + h, b - h}, {b - h, b},
                               {b, std::min(c.range.hi, b + h)}};
  std::erase_if(pieces, [](const Interval& iv) { return !(iv.length() > 0.0); });
  return pieces;
}

}  // namespace

Density slab_conditional(const Density& p, const SlabFamily& fam, double eps, const Curve& c) {
  if (p.dim() != 2) fail(ErrorCode::DimensionMismatch, "slab conditional needs a 2-D density");
  if (!(eps > 0.0)) fail(ErrorCode::InvalidArgument, "slab width must be positive");
  auto mass = [p, fam, eps, c](double t) { return slab_mass(p, fam, eps, c, t); };
  QuadOptions opt;
  opt.rel_tol = 1e-10;
  double total = 0.0;
  for (const Interval& piece : slab_pieces(p, fam, eps, c)) total += quad_integrate(mass, piece, opt).value;
  if (!(total > 0.0)) fail(ErrorCode::SlabMassZero, "slab mass is zero");
  const double k = 1.0 / total;
  return Density::custom(Box({c.range}), [mass, k](PointView t) { return k * mass(t[0]); }, {c.unit});
}

std::vector<double> cell_midpoints(Interval iv, std::size_t n) {
  std::vector<double> out(n);
  const double h = iv.length() / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = iv.lo + (static_cast<double>(i) + 0.5) * h;
  return out;
}

SlabLimit slab_limit(const Density& p, const SlabFamily& fam, const Curve& c, const SlabLimitOptions& opt) {
  const auto& eps = opt.eps;
  if (eps.size() < 2) fail(ErrorCode::InvalidArgument, "slab limit needs at least two widths");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0) || (i > 0 && !(eps[i] < eps[i - 1]))) {
      fail(ErrorCode::InvalidArgument, "slab widths must be positive and strictly decreasing");
    }
  }
  const auto support = nonzero_interval([&](double t) { return p(c(t)); }, c.range);
  if (too_small(support)) fail(ErrorCode::SupportTooSmall, "support too small for a slab limit");

  SlabLimit out{.grid = cell_midpoints(*support, opt.grid_points),
                .values = {},
                .deviation = {},
                .extrapolated = {},
                .limit = Density::constant(Box({*support}), 1.0)};
  out.values = parallel_map<std::vector<double>>(eps.size(), [&](std::size_t i) {
    const Density q = slab_conditional(p, fam, eps[i], c);
    std::vector<double> row(out.grid.size());
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = q({out.grid[j]});
    return row;
  });

  out.deviation.assign(eps.size(), kNaN);
  for (std::size_t i = 1; i < eps.size(); ++i) {
    double d = 0.0;
    for (std::size_t j = 0; j < out.grid.size(); ++j) d = std::max(d, std::fabs(out.values[i][j] - out.values[i - 1][j]));
    out.deviation[i] = d;
    if (i >= 2 && d > out.deviation[i - 1] * (1.0 + opt.monotone_slack) + opt.noise_floor) {
      fail(ErrorCode::NoStableLimit, "no stable limit: slab deviations grow as the width shrinks");
    }
  }

  const std::size_t n = eps.size();
  if (n >= 3) {
    const double d1 = out.deviation[n - 2];
    const double d2 = out.deviation[n - 1];
    if (d2 > opt.noise_floor && d1 > d2) {
      const double est = std::log(d1 / d2) / std::log(eps[n - 2] / eps[n - 1]);
      if (std::isfinite(est)) out.order = std::clamp(est, 0.5, 4.0);
    }
  }
  const double factor = std::pow(eps[n - 2] / eps[n - 1], out.order) - 1.0;
  out.extrapolated.resize(out.grid.size());
  for (std::size_t j = 0; j < out.grid.size(); ++j) {
    const double a = out.values[n - 1][j];
    const double b = out.values[n - 2][j];
    out.extrapolated[j] = std::max(0.0, a + (a - b) / factor);
  }
  out.limit = linear_interpolant(out.grid, out.extrapolated, c.unit);
  return out;
}

double fit_loglog_exponent(const std::function<double(double)>& f, Interval support, std::size_t n, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) fail(ErrorCode::InvalidArgument, "fit fraction must lie in (0, 1]");
  if (too_small(support)) fail(ErrorCode::SupportTooSmall, "support too small to fit exponent");
  const auto t = cell_midpoints(middle(support, fraction), n);
  std::vector<double> y(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) y[i] = f(t[i]);
  return loglog_slope(t, y);
}

BorelModels borel_models(const BorelConfig& cfg) {
  if (cfg.velocity_box.dim() != 2 || cfg.data_box.dim() != 2) {
    fail(ErrorCode::DimensionMismatch, "velocity and data boxes must be 2-D");
  }
  if (cfg.velocity_box.empty()) fail(ErrorCode::EmptySupport, "empty box: velocity bounds have min > max");
  if (cfg.data_box.empty()) fail(ErrorCode::EmptySupport, "empty box: data bounds have min > max");
  for (const auto& a : cfg.velocity_box.axes) {
    if (!(a.lo > 0.0) || !a.finite()) fail(ErrorCode::InvalidArgument, "velocity bounds must be finite and positive");
  }
  if (!(cfg.velocity_box.volume() > 0.0)) fail(ErrorCode::EmptySupport, "empty box: velocity box has zero area");

  const std::vector<UnitSignature> vu{units::velocity(), units::velocity()};
  const std::vector<UnitSignature> su{units::slowness(), units::slowness()};
  const Density prior_v = Density::uniform_box(cfg.velocity_box, vu);
  const Density data = Density::constant(cfg.data_box, 1.0, false, {units::second(), units::second()});
  const Density prior_s = pushforward(prior_v, Diffeomorphism::reciprocal(2));

  const Interval diag = intersect(cfg.velocity_box.axes[0], cfg.velocity_box.axes[1]);
  if (diag.empty()) fail(ErrorCode::EmptySupport, "velocity box does not meet the diagonal");
  return {graph_restrict(data, prior_v, models::tomography_velocity(cfg.rays)),
          graph_restrict(data, prior_s, models::tomography_slowness(cfg.rays)),
          Curve::diagonal("velocity", diag, units::velocity()),
          Curve::diagonal("slowness", {1.0 / diag.hi, 1.0 / diag.lo}, units::slowness())};
}

ContradictionReport borel_contradiction_report(const BorelConfig& cfg, BorelVariant variant) {
  const BorelModels m = borel_models(cfg);
  ContradictionReport rep;
  rep.variant = variant;
  rep.parameterization = "diagonal v2 = v1 parameterized by v1; slowness diagonal s2 = s1 parameterized by s1";

  const auto support =
      nonzero_interval([&](double t) { return m.velocity_posterior(m.velocity_diagonal(t)); }, m.velocity_diagonal.range);
  if (!support) fail(ErrorCode::EmptySupport, "empty support: the data box excludes the whole diagonal");
  if (too_small(support)) fail(ErrorCode::SupportTooSmall, "support too small to fit exponent");
  rep.support = *support;

  const Density naive_v = naive_conditional(m.velocity_posterior, m.velocity_diagonal);
  const Density back = variant == BorelVariant::Slowness
                           ? transform_1d(naive_conditional(m.slowness_posterior, m.slowness_diagonal),
                                          Diffeomorphism::reciprocal(1))
                           : transform_1d(naive_v, Diffeomorphism::identity(1));

  rep.grid = cell_midpoints(rep.support, cfg.grid_points);
  for (double t : rep.grid) {
    rep.naive_velocity.push_back(naive_v({t}));
    rep.back_transformed.push_back(back({t}));
    rep.ratio.push_back(rep.back_transformed.back() / rep.naive_velocity.back());
  }
  rep.constancy = spread(rep.naive_velocity);
  rep.ratio_spread = spread(rep.ratio);
  rep.exponent = fit_loglog_exponent([&](double t) { return back({t}); }, rep.support, cfg.grid_points);
  rep.ratio_exponent =
      fit_loglog_exponent([&](double t) { return back({t}) / naive_v({t}); }, rep.support, cfg.grid_points);

  const double expected = variant == BorelVariant::Slowness ? 2.0 : 0.0;
  rep.constancy_pass = rep.constancy <= kConstancyTol;
  rep.exponent_pass = std::fabs(rep.exponent - expected) <= kExponentTol;
  rep.contradiction = rep.ratio_spread > kConstancyTol;

  QuadOptions opt;
  opt.rel_tol = 1e-11;
  opt.initial_panels = 16;
  rep.velocity_mass = quad_integrate([&](double t) { return naive_v({t}); }, rep.support, opt).value;
  rep.back_transformed_mass = quad_integrate([&](double t) { return back({t}); }, back.support().axes[0], opt).value;
  return rep;
}

SlabComparison borel_slab_comparison(const BorelConfig& cfg, const SlabLimitOptions& opt) {
  const BorelModels m = borel_models(cfg);
  SlabComparison out{
      .slowness_slab = slab_limit(m.slowness_posterior, SlabFamily::diagonal_gap("slowness"), m.slowness_diagonal, opt),
      .velocity_slab = slab_limit(m.slowness_posterior,
                                  SlabFamily::diagonal_gap_through("velocity", Diffeomorphism::reciprocal(2)),
                                  m.slowness_diagonal, opt),
      .naive_slowness = {},
  };
  const Density naive_s = naive_conditional(m.slowness_posterior, m.slowness_diagonal);
  const auto& grid = out.slowness_slab.grid;
  std::vector<double> ratio;
  std::vector<double> t_mid;
  const Interval fit_range = middle({grid.front(), grid.back()}, 0.8);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    out.naive_slowness.push_back(naive_s({grid[j]}));
    out.slowness_sup =
        std::max(out.slowness_sup, std::fabs(out.slowness_slab.values.back()[j] - out.naive_slowness.back()));
    if (fit_range.contains(grid[j])) {
      t_mid.push_back(grid[j]);
      ratio.push_back(out.velocity_slab.extrapolated[j] / out.slowness_slab.extrapolated[j]);
    }
  }
  out.ratio_exponent = loglog_slope(t_mid, ratio);
  return out;
}

}  // namespace bpl
