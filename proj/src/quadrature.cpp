#include "bpl/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "bpl/error.hpp"

namespace bpl {
namespace {

constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd Kronrod nodes xgk[1], xgk[3], xgk[5], xgk[7].
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk15(const F& f, double a, double b, std::size_t& evals) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double abs_k = std::fabs(kron);
  double fv1[7];
  double fv2[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    fv1[j] = f(c - dx);
    fv2[j] = f(c + dx);
    const double s = fv1[j] + fv2[j];
    kron += kWgk[j] * s;
    abs_k += kWgk[j] * (std::fabs(fv1[j]) + std::fabs(fv2[j]));
    if (j % 2 == 1) gauss += kWg[j / 2] * s;
  }
  evals += 15;
  const double mean = 0.5 * kron;
  double asc = kWgk[7] * std::fabs(fc - mean);
  for (int j = 0; j < 7; ++j) asc += kWgk[j] * (std::fabs(fv1[j] - mean) + std::fabs(fv2[j] - mean));

  const double result = kron * h;
  abs_k *= std::fabs(h);
  asc *= std::fabs(h);
  double err = std::fabs((kron - gauss) * h);
  if (asc != 0.0 && err != 0.0) err = asc * std::fmin(1.0, std::pow(200.0 * err / asc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (abs_k > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::fmax(50.0 * eps * abs_k, err);
  return {a, b, result, err};
}

template <class F>
IntegralResult adaptive(const F& f, double a, double b, const QuadOptions& opt) {
  IntegralResult out;
  out.method = "gauss-kronrod-15";
  if (a == b) return out;

  std::vector<Segment> heap;
  const std::size_t panels = std::max<std::size_t>(1, opt.initial_panels);
  for (std::size_t i = 0; i < panels; ++i) {
    const double lo = a + (b - a) * static_cast<double>(i) / static_cast<double>(panels);
    const double hi = i + 1 == panels ? b : a + (b - a) * static_cast<double>(i + 1) / static_cast<double>(panels);
    heap.push_back(gk15(f, lo, hi, out.evaluations));
  }
  std::make_heap(heap.begin(), heap.end());

  // Segments too narrow to bisect are retired with their error frozen.
  double frozen_value = 0.0;
  double frozen_error = 0.0;
  const std::size_t budget = std::max(opt.max_intervals, panels);

  auto totals = [&] {
    double v = frozen_value;
    double e = frozen_error;
    for (const auto& s : heap) {
      v += s.value;
      e += s.error;
    }
    return std::pair{v, e};
  };

  auto [value, error] = totals();
  std::size_t iterations = 0;
  while (!heap.empty() && error > std::fmax(opt.abs_tol, opt.rel_tol * std::fabs(value))) {
    if (heap.size() >= budget) {
      out.converged = false;
      break;
    }
    std::pop_heap(heap.begin(), heap.end());
    const Segment s = heap.back();
    heap.pop_back();
    const double m = 0.5 * (s.a + s.b);
    if (!(m > s.a && m < s.b) || std::fabs(s.b - s.a) < 1e-15 * (std::fabs(s.a) + std::fabs(s.b))) {
      frozen_value += s.value;
      frozen_error += s.error;
    } else {
      const Segment left = gk15(f, s.a, m, out.evaluations);
      const Segment right = gk15(f, m, s.b, out.evaluations);
      value += left.value + right.value - s.value;
      error += left.error + right.error - s.error;
      heap.push_back(left);
      std::push_heap(heap.begin(), heap.end());
      heap.push_back(right);
      std::push_heap(heap.begin(), heap.end());
    }
    // Running sums drift; resynchronize periodically.
    if (++iterations % 64 == 0) std::tie(value, error) = totals();
    if (heap.empty()) break;
  }
  std::tie(value, error) = totals();
  out.value = value;
  out.error = error;
  if (!std::isfinite(value)) out.converged = false;
  if (error > std::fmax(opt.abs_tol, opt.rel_tol * std::fabs(value))) out.converged = false;
  if (!out.converged) out.method += " (unconverged)";
  return out;
}

}  // namespace

std::optional<Interval> nonzero_interval(const std::function<double(double)>& f, Interval range,
                                         std::size_t scan_points) {
  if (!range.finite() || range.empty()) fail(ErrorCode::InvalidArgument, "scan range must be finite");
  const std::size_t n = std::max<std::size_t>(scan_points, 2);
  auto at = [&](std::size_t i) {
    return range.lo + range.length() * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  std::size_t first = n;
  std::size_t last = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (f(at(i)) > 0.0) {
      first = std::min(first, i);
      last = i;
    }
  }
  if (first == n) return std::nullopt;
  auto edge = [&](double zero, double hit) {
    for (int it = 0; it < 200; ++it) {
      const double m = 0.5 * (zero + hit);
      if (m == zero || m == hit) break;
      (f(m) > 0.0 ? hit : zero) = m;
    }
    return hit;
  };
  const double lo = first == 0 ? range.lo : edge(at(first - 1), at(first));
  const double hi = last == n - 1 ? range.hi : edge(at(last + 1), at(last));
  return Interval{lo, hi};
}

IntegralResult quad_integrate(const Integrand1D& f, Interval range, const QuadOptions& opt) {
  if (std::isnan(range.lo) || std::isnan(range.hi)) fail(ErrorCode::InvalidArgument, "NaN integration bound");
  double sign = 1.0;
  if (range.lo > range.hi) {
    std::swap(range.lo, range.hi);
    sign = -1.0;
  }
  const double s = opt.scale;
  if (!(s > 0.0)) fail(ErrorCode::InvalidArgument, "quadrature scale must be positive");

  // Zero integrand values short-circuit so that 0 * (huge Jacobian) near the
  // mapped endpoint stays 0.
  auto mapped = [&](double x, double jac) {
    const double v = f(x);
    return v == 0.0 ? 0.0 : v * jac;
  };

  IntegralResult r;
  if (range.finite()) {
    if (opt.locate_support > 0 && range.lo < range.hi) {
      const auto support = nonzero_interval(f, range, opt.locate_support);
      if (!support) return {0.0, 0.0, "empty-support", 0, true};
      range = *support;
    }
    r = adaptive(f, range.lo, range.hi, opt);
  } else if (std::isfinite(range.lo)) {
    const double a = range.lo;
    r = adaptive([&](double t) { return mapped(a + s * (1.0 - t) / t, s / (t * t)); }, 0.0, 1.0, opt);
  } else if (std::isfinite(range.hi)) {
    const double b = range.hi;
    r = adaptive([&](double t) { return mapped(b - s * (1.0 - t) / t, s / (t * t)); }, 0.0, 1.0, opt);
  } else {
    const double c = opt.center;
    r = adaptive(
        [&](double t) {
          const double u = s * (1.0 - t) / t;
          const double j = s / (t * t);
          return mapped(c + u, j) + mapped(c - u, j);
        },
        0.0, 1.0, opt);
    r.method += " (two-sided rational map)";
  }
  r.value *= sign;
  return r;
}

namespace {

IntegralResult nested(const IntegrandND& f, const Box& box, std::size_t axis, Point& x, const QuadOptions& opt,
                      std::size_t& evals, double& worst_inner_rel, bool& converged) {
  QuadOptions here = opt;
  if (axis + 1 == box.dim()) {
    auto g = [&](double t) {
      x[axis] = t;
      ++evals;
      return f(PointView(x));
    };
    IntegralResult r = quad_integrate(g, box.axes[axis], here);
    if (!r.converged) converged = false;
    return r;
  }
  QuadOptions inner = opt;
  inner.rel_tol = opt.rel_tol * 0.1;
  const double len = box.axes[axis].finite() ? box.axes[axis].length() : 1.0;
  inner.abs_tol = opt.abs_tol * 0.1 / std::fmax(len, 1e-300);
  auto g = [&](double t) {
    x[axis] = t;
    const IntegralResult r = nested(f, box, axis + 1, x, inner, evals, worst_inner_rel, converged);
    if (r.value != 0.0) worst_inner_rel = std::fmax(worst_inner_rel, r.error / std::fabs(r.value));
    return r.value;
  };
  here.locate_support = 0;
  IntegralResult r = quad_integrate(g, box.axes[axis], here);
  if (!r.converged) converged = false;
  return r;
}

}  // namespace

IntegralResult quad_integrate(const IntegrandND& f, const Box& box, const QuadOptions& opt) {
  if (box.dim() == 0) fail(ErrorCode::InvalidArgument, "cannot integrate over a zero-dimensional box");
  Point x(box.dim(), 0.0);
  std::size_t evals = 0;
  double worst_inner_rel = 0.0;
  bool converged = true;
  IntegralResult r = nested(f, box, 0, x, opt, evals, worst_inner_rel, converged);
  r.evaluations = evals;
  r.converged = converged;
  r.error += worst_inner_rel * std::fabs(r.value);
  r.method = box.dim() == 1 ? r.method : "iterated gauss-kronrod-15 (" + std::to_string(box.dim()) + "-D)";
  if (!converged) r.method += " (unconverged)";
  return r;
}

}  // namespace bpl
