#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace bpl {

using Point = std::vector<double>;
using PointView = std::span<const double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Closed interval, possibly half- or fully infinite.
struct Interval {
  double lo = -kInf;
  double hi = kInf;

  bool finite() const { return std::isfinite(lo) && std::isfinite(hi); }
  bool empty() const { return !(lo <= hi); }
  double length() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return x >= lo && x <= hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

inline Interval intersect(const Interval& a, const Interval& b) {
  return {std::fmax(a.lo, b.lo), std::fmin(a.hi, b.hi)};
}

/// Axis-aligned box, one interval per coordinate.
struct Box {
  std::vector<Interval> axes;

  Box() = default;
  explicit Box(std::vector<Interval> a) : axes(std::move(a)) {}

  static Box unbounded(std::size_t dim) { return Box(std::vector<Interval>(dim)); }
  static Box cube(std::size_t dim, double lo, double hi) {
    return Box(std::vector<Interval>(dim, Interval{lo, hi}));
  }

  std::size_t dim() const { return axes.size(); }
  bool finite() const {
    for (const auto& a : axes) {
      if (!a.finite()) return false;
    }
    return true;
  }
  bool empty() const {
    for (const auto& a : axes) {
      if (a.empty()) return true;
    }
    return false;
  }
  double volume() const {
    double v = 1.0;
    for (const auto& a : axes) v *= a.length();
    return v;
  }
  bool contains(PointView x) const {
    if (x.size() != axes.size()) return false;
    for (std::size_t i = 0; i < axes.size(); ++i) {
      if (!axes[i].contains(x[i])) return false;
    }
    return true;
  }

  friend bool operator==(const Box&, const Box&) = default;
};

inline Box intersect(const Box& a, const Box& b) {
  Box out;
  for (std::size_t i = 0; i < a.dim(); ++i) out.axes.push_back(intersect(a.axes[i], b.axes[i]));
  return out;
}

}  // namespace bpl
