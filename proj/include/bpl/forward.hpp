#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bpl/density.hpp"
#include "bpl/space.hpp"
#include "bpl/units.hpp"

namespace bpl {

/// Ray lengths of the two-ray, two-block tomography geometry; row i is ray
/// i, column j is block j.
struct RayMatrix {
  std::array<std::array<double, 2>, 2> length{{{1.0, 1.0}, {2.0, 0.0}}};

  static RayMatrix scaled_default(double L) { return RayMatrix{{{{L, L}, {2.0 * L, 0.0}}}}; }
  double det() const { return length[0][0] * length[1][1] - length[0][1] * length[1][0]; }
};

/// Map from model space to data space with coordinate units on both sides.
class ForwardModel {
 public:
  using Map = std::function<Point(PointView)>;

  /// Row-major matrix of a linear map together with the unit carried by its
  /// entries; used to check the declared data units.
  struct Linear {
    std::vector<double> matrix;
    UnitSignature entry_unit;
  };

  ForwardModel(std::string name, std::size_t m_dim, std::size_t d_dim, Map map, std::vector<UnitSignature> m_units,
               std::vector<UnitSignature> d_units, std::optional<Linear> linear = std::nullopt);

  const std::string& name() const { return state_->name; }
  std::size_t m_dim() const { return state_->m_dim; }
  std::size_t d_dim() const { return state_->d_dim; }
  const std::vector<UnitSignature>& m_units() const { return state_->m_units; }
  const std::vector<UnitSignature>& d_units() const { return state_->d_units; }
  const std::optional<Linear>& linear() const { return state_->linear; }

  Point apply(PointView m) const;
  Point operator()(PointView m) const { return apply(m); }
  Point operator()(std::initializer_list<double> m) const { return apply(PointView(m.begin(), m.size())); }

  /// For linear maps: every nonzero entry times its model unit must equal
  /// the declared data unit of that row. Nonlinear maps return true.
  bool units_consistent() const;

 private:
  struct State {
    std::string name;
    std::size_t m_dim;
    std::size_t d_dim;
    Map map;
    std::vector<UnitSignature> m_units;
    std::vector<UnitSignature> d_units;
    std::optional<Linear> linear;
  };
  std::shared_ptr<const State> state_;
};

Point apply(const ForwardModel& f, PointView m);

namespace models {

/// Travel times t = R s for slownesses s (second/meter), ray lengths in meter.
ForwardModel tomography_slowness(const RayMatrix& rays = {});
/// Travel times t_i = sum_j R_ij / v_j for velocities v (meter/second).
ForwardModel tomography_velocity(const RayMatrix& rays = {});
/// One homogeneous block: (2Ls, 2Ls).
ForwardModel one_block(double L);
/// Two blocks: (L(s1 + s2), 2L s1).
ForwardModel two_block(double L);
/// Scalar d = k m, dimensionless.
ForwardModel linear(double k);
/// Scalar identity d = m.
ForwardModel identity();

}  // namespace models

/// Unnormalized posterior over m: data_prior(f(m)) * model_prior(m).
/// Improper data priors are accepted; the result is improper only when the
/// model prior is.
Density graph_restrict(const Density& data_prior, const Density& model_prior, const ForwardModel& f);

}  // namespace bpl
