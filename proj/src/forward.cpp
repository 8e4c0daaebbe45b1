#include "bpl/forward.hpp"

#include <cmath>
#include <utility>

#include "bpl/error.hpp"

namespace bpl {

ForwardModel::ForwardModel(std::string name, std::size_t m_dim, std::size_t d_dim, Map map,
                           std::vector<UnitSignature> m_units, std::vector<UnitSignature> d_units,
                           std::optional<Linear> linear) {
  if (m_dim == 0 || d_dim == 0) fail(ErrorCode::InvalidArgument, "forward model dimensions must be positive");
  if (!map) fail(ErrorCode::InvalidArgument, "forward model needs a map");
  if (m_units.empty()) m_units.assign(m_dim, UnitSignature{});
  if (d_units.empty()) d_units.assign(d_dim, UnitSignature{});
  if (m_units.size() != m_dim || d_units.size() != d_dim) {
    fail(ErrorCode::DimensionMismatch, "forward model unit lists do not match dimensions");
  }
  if (linear && linear->matrix.size() != m_dim * d_dim) {
    fail(ErrorCode::DimensionMismatch, "linear matrix does not match dimensions");
  }
  state_ = std::make_shared<const State>(
      State{std::move(name), m_dim, d_dim, std::move(map), std::move(m_units), std::move(d_units), std::move(linear)});
}

Point ForwardModel::apply(PointView m) const {
  if (m.size() != m_dim()) {
    fail(ErrorCode::DimensionMismatch, "model point of dimension " + std::to_string(m.size()) + " for '" + name() +
                                           "' expecting " + std::to_string(m_dim()));
  }
  Point d = state_->map(m);
  if (d.size() != d_dim()) fail(ErrorCode::DimensionMismatch, "forward map '" + name() + "' returned wrong dimension");
  return d;
}

Point apply(const ForwardModel& f, PointView m) { return f.apply(m); }

bool ForwardModel::units_consistent() const {
  if (!linear()) return true;
  for (std::size_t i = 0; i < d_dim(); ++i) {
    for (std::size_t j = 0; j < m_dim(); ++j) {
      if (linear()->matrix[i * m_dim() + j] == 0.0) continue;
      if (!(linear()->entry_unit * m_units()[j] == d_units()[i])) return false;
    }
  }
  return true;
}

namespace models {
namespace {

ForwardModel linear_model(std::string name, std::size_t m_dim, std::size_t d_dim, std::vector<double> matrix,
                          UnitSignature entry_unit, std::vector<UnitSignature> m_units,
                          std::vector<UnitSignature> d_units) {
  auto map = [matrix, m_dim, d_dim](PointView m) {
    Point d(d_dim, 0.0);
    for (std::size_t i = 0; i < d_dim; ++i) {
      for (std::size_t j = 0; j < m_dim; ++j) d[i] += matrix[i * m_dim + j] * m[j];
    }
    return d;
  };
  return ForwardModel(std::move(name), m_dim, d_dim, std::move(map), std::move(m_units), std::move(d_units),
                      ForwardModel::Linear{std::move(matrix), std::move(entry_unit)});
}

void check_rays(const RayMatrix& rays) {
  for (const auto& row : rays.length) {
    for (double l : row) {
      if (!(l >= 0.0) || !std::isfinite(l)) fail(ErrorCode::InvalidArgument, "ray lengths must be finite and >= 0");
    }
  }
  if (rays.det() == 0.0) fail(ErrorCode::InvalidArgument, "ray matrix must be invertible");
}

}  // namespace

ForwardModel tomography_slowness(const RayMatrix& rays) {
  check_rays(rays);
  const auto& r = rays.length;
  return linear_model("tomography-slowness", 2, 2, {r[0][0], r[0][1], r[1][0], r[1][1]}, units::meter(),
                      {units::slowness(), units::slowness()}, {units::second(), units::second()});
}

ForwardModel tomography_velocity(const RayMatrix& rays) {
  check_rays(rays);
  const auto r = rays.length;
  auto map = [r](PointView v) {
    return Point{r[0][0] / v[0] + r[0][1] / v[1], r[1][0] / v[0] + r[1][1] / v[1]};
  };
  return ForwardModel("tomography-velocity", 2, 2, std::move(map), {units::velocity(), units::velocity()},
                      {units::second(), units::second()});
}

ForwardModel one_block(double L) {
  if (!(L > 0.0)) fail(ErrorCode::InvalidArgument, "ray length L must be positive");
  return linear_model("one-block", 1, 2, {2.0 * L, 2.0 * L}, units::meter(), {units::slowness()},
                      {units::second(), units::second()});
}

ForwardModel two_block(double L) {
  if (!(L > 0.0)) fail(ErrorCode::InvalidArgument, "ray length L must be positive");
  return linear_model("two-block", 2, 2, {L, L, 2.0 * L, 0.0}, units::meter(), {units::slowness(), units::slowness()},
                      {units::second(), units::second()});
}

ForwardModel linear(double k) {
  if (!std::isfinite(k)) fail(ErrorCode::InvalidArgument, "k must be finite");
  return linear_model("linear", 1, 1, {k}, {}, {}, {});
}

ForwardModel identity() { return linear_model("identity", 1, 1, {1.0}, {}, {}, {}); }

}  // namespace models

Density graph_restrict(const Density& data_prior, const Density& model_prior, const ForwardModel& f) {
  if (data_prior.dim() != f.d_dim()) fail(ErrorCode::DimensionMismatch, "data prior dimension differs from d_dim");
  if (model_prior.dim() != f.m_dim()) fail(ErrorCode::DimensionMismatch, "model prior dimension differs from m_dim");
  Density::Parts parts;
  parts.support = model_prior.support();
  parts.coordinate_units = model_prior.coordinate_units();
  parts.unit = data_prior.unit() * model_prior.unit();
  parts.improper = model_prior.improper();
  parts.eval = [data_prior, model_prior, f](PointView m) {
    const double pm = model_prior(m);
    if (pm == 0.0) return 0.0;
    return data_prior(f.apply(m)) * pm;
  };
  return Density(std::move(parts));
}

}  // namespace bpl
