#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "bpl/density.hpp"
#include "bpl/space.hpp"
#include "bpl/units.hpp"

namespace bpl {

/// Per-coordinate unit transformation: u -> u^power * factor.
struct UnitMap {
  Rational power{1};
  UnitSignature factor;

  UnitSignature apply(const UnitSignature& u) const { return u.pow(power) * factor; }
  UnitMap inverse() const;
};

/// Invertible coordinate change with its Jacobian determinant.
class Diffeomorphism {
 public:
  using Map = std::function<Point(PointView)>;
  using Scalar = std::function<double(PointView)>;
  using BoxMap = std::function<Box(const Box&)>;
  using Predicate = std::function<bool(PointView)>;

  struct Parts {
    std::string name;
    std::size_t dim = 0;
    Map forward;
    Map inverse;
    Scalar jac_abs_det;
    /// Image and preimage of axis-aligned boxes (exact for coordinatewise
    /// monotone maps).
    BoxMap image;
    BoxMap preimage;
    /// Open domain / range; points outside are singular.
    Predicate in_domain;
    Predicate in_range;
    std::vector<UnitMap> unit_maps;
  };

  explicit Diffeomorphism(Parts parts);

  static Diffeomorphism identity(std::size_t dim);
  /// x_i -> 1/x_i, singular within `excluded_radius` of 0 in any coordinate.
  static Diffeomorphism reciprocal(std::size_t dim, double excluded_radius = 1e-9);
  /// x_i -> scale_i * x_i + shift_i.
  static Diffeomorphism affine(Point scale, Point shift, std::vector<UnitMap> unit_maps = {});

  const std::string& name() const { return parts_->name; }
  std::size_t dim() const { return parts_->dim; }

  Point operator()(PointView x) const;
  Point operator()(std::initializer_list<double> x) const { return (*this)(PointView(x.begin(), x.size())); }
  Point inverse(PointView y) const;
  double jacobian_abs_det(PointView x) const;

  bool in_domain(PointView x) const { return parts_->in_domain(x); }
  bool in_range(PointView y) const { return parts_->in_range(y); }
  Box image(const Box& b) const { return parts_->image(b); }
  Box preimage(const Box& b) const { return parts_->preimage(b); }
  std::vector<UnitSignature> map_units(const std::vector<UnitSignature>& units) const;

  const std::vector<UnitMap>& unit_maps() const { return parts_->unit_maps; }
  const Map& forward_map() const { return parts_->forward; }
  const Map& inverse_map() const { return parts_->inverse; }

  Diffeomorphism inverted() const;

 private:
  std::shared_ptr<const Parts> parts_;
};

/// outer(inner(x)); the Jacobian is the product of the factors' determinants.
Diffeomorphism compose(const Diffeomorphism& outer, const Diffeomorphism& inner);

/// |det dh/dx| at an interior point; singular points are rejected.
double jacobian_abs_det(const Diffeomorphism& h, PointView x);

/// Central-difference Jacobian determinant of an arbitrary map. Independent
/// of the analytic Jacobian stored in a Diffeomorphism.
double finite_difference_jacobian_abs_det(const Diffeomorphism::Map& map, PointView x, double rel_step = 1e-5);

/// Determinant of a row-major n x n matrix by partial-pivot elimination.
double determinant(std::vector<double> a, std::size_t n);

/// Density q with q(h(x)) * |det J_h(x)| = p(x), supported on h(support).
/// Rejects maps whose Jacobian is non-positive on probe points of the support.
Density pushforward(const Density& p, const Diffeomorphism& h, std::size_t probes_per_axis = 9);

}  // namespace bpl
