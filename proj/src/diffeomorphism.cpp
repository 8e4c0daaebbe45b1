#include "bpl/diffeomorphism.hpp"

#include <cmath>
#include <utility>

#include "bpl/error.hpp"

namespace bpl {

UnitMap UnitMap::inverse() const {
  if (power.is_zero()) fail(ErrorCode::InvalidArgument, "unit map with zero power is not invertible");
  const Rational inv(power.den(), power.num());
  return UnitMap{inv, factor.pow(-inv)};
}

Diffeomorphism::Diffeomorphism(Parts parts) {
  if (parts.dim == 0) fail(ErrorCode::InvalidArgument, "diffeomorphism needs dimension >= 1");
  if (!parts.forward || !parts.inverse || !parts.jac_abs_det) {
    fail(ErrorCode::InvalidArgument, "diffeomorphism needs forward, inverse and Jacobian maps");
  }
  if (!parts.in_domain) parts.in_domain = [](PointView) { return true; };
  if (!parts.in_range) parts.in_range = [](PointView) { return true; };
  if (!parts.image) parts.image = [](const Box&) -> Box { fail(ErrorCode::InvalidArgument, "box image not available"); };
  if (!parts.preimage) {
    parts.preimage = [](const Box&) -> Box { fail(ErrorCode::InvalidArgument, "box preimage not available"); };
  }
  if (parts.unit_maps.empty()) parts.unit_maps.assign(parts.dim, UnitMap{});
  if (parts.unit_maps.size() != parts.dim) fail(ErrorCode::DimensionMismatch, "unit maps do not match dimension");
  parts_ = std::make_shared<const Parts>(std::move(parts));
}

namespace {

void check_dim(const Diffeomorphism& h, PointView x) {
  if (x.size() != h.dim()) {
    fail(ErrorCode::DimensionMismatch, "point of dimension " + std::to_string(x.size()) + " for map '" + h.name() +
                                           "' of dimension " + std::to_string(h.dim()));
  }
}

}  // namespace

Point Diffeomorphism::operator()(PointView x) const {
  check_dim(*this, x);
  if (!in_domain(x)) fail(ErrorCode::Singular, "point outside the domain of '" + name() + "'");
  return parts_->forward(x);
}

Point Diffeomorphism::inverse(PointView y) const {
  check_dim(*this, y);
  if (!in_range(y)) fail(ErrorCode::Singular, "point outside the range of '" + name() + "'");
  return parts_->inverse(y);
}

double Diffeomorphism::jacobian_abs_det(PointView x) const {
  check_dim(*this, x);
  if (!in_domain(x)) fail(ErrorCode::Singular, "Jacobian requested at a singular point of '" + name() + "'");
  return parts_->jac_abs_det(x);
}

double jacobian_abs_det(const Diffeomorphism& h, PointView x) { return h.jacobian_abs_det(x); }

std::vector<UnitSignature> Diffeomorphism::map_units(const std::vector<UnitSignature>& units) const {
  if (units.size() != dim()) fail(ErrorCode::DimensionMismatch, "unit list does not match dimension");
  std::vector<UnitSignature> out;
  out.reserve(units.size());
  for (std::size_t i = 0; i < units.size(); ++i) out.push_back(parts_->unit_maps[i].apply(units[i]));
  return out;
}

Diffeomorphism Diffeomorphism::inverted() const {
  const auto self = parts_;
  Parts p;
  p.name = "inverse(" + self->name + ")";
  p.dim = self->dim;
  p.forward = self->inverse;
  p.inverse = self->forward;
  p.jac_abs_det = [self](PointView y) {
    const Point x = self->inverse(y);
    return 1.0 / self->jac_abs_det(x);
  };
  p.image = self->preimage;
  p.preimage = self->image;
  p.in_domain = self->in_range;
  p.in_range = self->in_domain;
  for (const auto& m : self->unit_maps) p.unit_maps.push_back(m.inverse());
  return Diffeomorphism(std::move(p));
}

Diffeomorphism Diffeomorphism::identity(std::size_t dim) {
  Parts p;
  p.name = "identity";
  p.dim = dim;
  p.forward = [](PointView x) { return Point(x.begin(), x.end()); };
  p.inverse = p.forward;
  p.jac_abs_det = [](PointView) { return 1.0; };
  p.image = [](const Box& b) { return b; };
  p.preimage = p.image;
  return Diffeomorphism(std::move(p));
}

Diffeomorphism Diffeomorphism::reciprocal(std::size_t dim, double excluded_radius) {
  if (!(excluded_radius >= 0.0)) fail(ErrorCode::InvalidArgument, "excluded radius must be >= 0");
  Parts p;
  p.name = "reciprocal";
  p.dim = dim;
  p.forward = [](PointView x) {
    Point y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = 1.0 / x[i];
    return y;
  };
  p.inverse = p.forward;
  p.jac_abs_det = [](PointView x) {
    double j = 1.0;
    for (double xi : x) j /= xi * xi;
    return j;
  };
  p.image = [](const Box& b) {
    Box out;
    for (const auto& a : b.axes) {
      if (a.lo < 0.0 && a.hi > 0.0) fail(ErrorCode::Singular, "box straddles the reciprocal singularity at 0");
      out.axes.push_back({1.0 / a.hi, 1.0 / a.lo});
    }
    return out;
  };
  p.preimage = p.image;
  p.in_domain = [excluded_radius](PointView x) {
    for (double xi : x) {
      if (!(std::fabs(xi) > excluded_radius) || !std::isfinite(xi)) return false;
    }
    return true;
  };
  p.in_range = p.in_domain;
  p.unit_maps.assign(dim, UnitMap{Rational(-1), {}});
  return Diffeomorphism(std::move(p));
}

Diffeomorphism Diffeomorphism::affine(Point scale, Point shift, std::vector<UnitMap> unit_maps) {
  if (scale.size() != shift.size() || scale.empty()) fail(ErrorCode::DimensionMismatch, "affine scale/shift mismatch");
  double det = 1.0;
  for (double s : scale) {
    if (s == 0.0 || !std::isfinite(s)) fail(ErrorCode::Singular, "affine map with zero scale");
    det *= std::fabs(s);
  }
  Parts p;
  p.name = "affine";
  p.dim = scale.size();
  p.forward = [scale, shift](PointView x) {
    Point y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = scale[i] * x[i] + shift[i];
    return y;
  };
  p.inverse = [scale, shift](PointView y) {
    Point x(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) x[i] = (y[i] - shift[i]) / scale[i];
    return x;
  };
  p.jac_abs_det = [det](PointView) { return det; };
  p.image = [scale, shift](const Box& b) {
    Box out;
    for (std::size_t i = 0; i < b.dim(); ++i) {
      const double u = scale[i] * b.axes[i].lo + shift[i];
      const double v = scale[i] * b.axes[i].hi + shift[i];
      out.axes.push_back({std::fmin(u, v), std::fmax(u, v)});
    }
    return out;
  };
  p.preimage = [scale, shift](const Box& b) {
    Box out;
    for (std::size_t i = 0; i < b.dim(); ++i) {
      const double u = (b.axes[i].lo - shift[i]) / scale[i];
      const double v = (b.axes[i].hi - shift[i]) / scale[i];
      out.axes.push_back({std::fmin(u, v), std::fmax(u, v)});
    }
    return out;
  };
  p.unit_maps = std::move(unit_maps);
  return Diffeomorphism(std::move(p));
}

Diffeomorphism compose(const Diffeomorphism& outer, const Diffeomorphism& inner) {
  if (outer.dim() != inner.dim()) fail(ErrorCode::DimensionMismatch, "cannot compose maps of different dimension");
  Diffeomorphism::Parts p;
  p.name = outer.name() + " o " + inner.name();
  p.dim = inner.dim();
  p.forward = [outer, inner](PointView x) {
    const Point y = inner.forward_map()(x);
    return outer.forward_map()(y);
  };
  p.inverse = [outer, inner](PointView z) {
    const Point y = outer.inverse_map()(z);
    return inner.inverse_map()(y);
  };
  p.jac_abs_det = [outer, inner](PointView x) {
    const Point y = inner(x);
    return outer.jacobian_abs_det(y) * inner.jacobian_abs_det(x);
  };
  p.image = [outer, inner](const Box& b) { return outer.image(inner.image(b)); };
  p.preimage = [outer, inner](const Box& b) { return inner.preimage(outer.preimage(b)); };
  p.in_domain = [outer, inner](PointView x) {
    return inner.in_domain(x) && outer.in_domain(inner.forward_map()(x));
  };
  p.in_range = [outer, inner](PointView z) {
    return outer.in_range(z) && inner.in_range(outer.inverse_map()(z));
  };
  for (std::size_t i = 0; i < inner.dim(); ++i) {
    const UnitMap& a = inner.unit_maps()[i];
    const UnitMap& b = outer.unit_maps()[i];
    p.unit_maps.push_back(UnitMap{a.power * b.power, a.factor.pow(b.power) * b.factor});
  }
  return Diffeomorphism(std::move(p));
}

double determinant(std::vector<double> a, std::size_t n) {
  if (a.size() != n * n) fail(ErrorCode::DimensionMismatch, "determinant of a non-square matrix");
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::fabs(a[r * n + c]) > std::fabs(a[piv * n + c])) piv = r;
    }
    if (a[piv * n + c] == 0.0) return 0.0;
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[c * n + k], a[piv * n + k]);
      det = -det;
    }
    det *= a[c * n + c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r * n + c] / a[c * n + c];
      for (std::size_t k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
    }
  }
  return det;
}

double finite_difference_jacobian_abs_det(const Diffeomorphism::Map& map, PointView x, double rel_step) {
  const std::size_t n = x.size();
  std::vector<double> jac(n * n);
  Point xp(x.begin(), x.end());
  for (std::size_t j = 0; j < n; ++j) {
    const double h = rel_step * std::fmax(std::fabs(x[j]), 1e-3);
    xp[j] = x[j] + h;
    const Point fp = map(xp);
    xp[j] = x[j] - h;
    const Point fm = map(xp);
    xp[j] = x[j];
    if (fp.size() != n || fm.size() != n) fail(ErrorCode::DimensionMismatch, "map is not square");
    for (std::size_t i = 0; i < n; ++i) jac[i * n + j] = (fp[i] - fm[i]) / (2.0 * h);
  }
  return std::fabs(determinant(std::move(jac), n));
}

namespace {

std::vector<Point> probe_points(const Density& p, std::size_t per_axis) {
  const Box box = p.effective_box();
  std::vector<std::vector<double>> axis_values;
  for (const auto& a : box.axes) {
    std::vector<double> vals;
    if (a.finite()) {
      for (std::size_t i = 0; i < per_axis; ++i) {
        vals.push_back(a.lo + (static_cast<double>(i) + 0.5) / static_cast<double>(per_axis) * a.length());
      }
    } else {
      for (double v : {-100.0, -10.0, -1.0, -0.1, 0.1, 1.0, 10.0, 100.0}) {
        if (a.contains(v)) vals.push_back(v);
      }
      if (std::isfinite(a.lo)) vals.push_back(a.lo + 1.0);
      if (std::isfinite(a.hi)) vals.push_back(a.hi - 1.0);
    }
    axis_values.push_back(std::move(vals));
  }
  std::vector<Point> pts{Point{}};
  for (const auto& vals : axis_values) {
    std::vector<Point> next;
    for (const auto& base : pts) {
      for (double v : vals) {
        Point q = base;
        q.push_back(v);
        next.push_back(std::move(q));
      }
    }
    pts = std::move(next);
  }
  return pts;
}

}  // namespace

Density pushforward(const Density& p, const Diffeomorphism& h, std::size_t probes_per_axis) {
  if (p.dim() != h.dim()) fail(ErrorCode::DimensionMismatch, "density and map dimensions differ");
  for (const Point& x : probe_points(p, probes_per_axis)) {
    if (!h.in_domain(x)) continue;
    const double j = h.jacobian_abs_det(x);
    if (!(j > 0.0) || !std::isfinite(j)) {
      fail(ErrorCode::Singular, "Jacobian determinant of '" + h.name() + "' is not positive on the support");
    }
  }

  const std::vector<UnitSignature> new_units = h.map_units(p.coordinate_units());
  UnitSignature unit = p.unit() * density_unit(new_units) / density_unit(p.coordinate_units());

  Density::Parts parts;
  parts.support = h.image(p.support());
  parts.coordinate_units = new_units;
  parts.unit = unit;
  parts.improper = p.improper();
  parts.eval = [p, h](PointView y) {
    if (!h.in_range(y)) return 0.0;
    const Point x = h.inverse_map()(y);
    if (!h.in_domain(x)) return 0.0;
    const double v = p(x);
    if (v == 0.0) return 0.0;
    return v / h.jacobian_abs_det(x);
  };
  return Density(std::move(parts));
}

}  // namespace bpl
