#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bpl/quadrature.hpp"
#include "bpl/rng.hpp"
#include "bpl/space.hpp"
#include "bpl/units.hpp"

namespace bpl {

enum class DensityKind { UniformBox, GaussianIid, Discrete, Product, Custom };

std::string to_string(DensityKind kind);

/// Finite distribution over real atoms.
class DiscreteDistribution {
 public:
  struct Atom {
    double value;
    double probability;
  };

  /// Probabilities must be nonnegative and sum to 1 within 1e-12.
  explicit DiscreteDistribution(std::vector<Atom> atoms);

  /// Two-atom distribution {first: p, second: 1 - p}.
  static DiscreteDistribution binary(double first, double second, double p);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  /// Probability mass at `value`; 0 for non-atoms.
  double probability(double value) const;
  double sample(CounterRng& rng) const;

 private:
  std::vector<Atom> atoms_;
};

struct GaussianParams {
  Point mean;
  double sigma = 1.0;
};

/// A density over a low-dimensional space: an evaluator plus an axis-aligned
/// support box, per-coordinate units and a kind tag. Values are immutable
/// and cheap to copy (shared state).
class Density {
 public:
  using Evaluator = std::function<double(PointView)>;

  struct Parts {
    Box support;
    Evaluator eval;
    std::vector<UnitSignature> coordinate_units;  // empty = dimensionless
    DensityKind kind = DensityKind::Custom;
    /// Density unit; defaults to the reciprocal of the coordinate units.
    std::optional<UnitSignature> unit;
    bool improper = false;
    std::optional<GaussianParams> gaussian;
    std::optional<DiscreteDistribution> discrete;
    std::vector<Density> factors;
  };

  explicit Density(Parts parts);

  static Density uniform_box(Box box, std::vector<UnitSignature> units = {});
  static Density gaussian_iid(Point mean, double sigma, std::vector<UnitSignature> units = {});
  /// Constant value on `support`. Flagged improper when the support is
  /// unbounded unless `improper` says otherwise.
  static Density constant(Box support, double value, std::optional<bool> improper = std::nullopt,
                          std::vector<UnitSignature> units = {});
  /// Counting-measure density over the atoms of a 1-D discrete distribution.
  static Density discrete(DiscreteDistribution dist);
  static Density product(std::vector<Density> factors);
  static Density custom(Box support, Evaluator eval, std::vector<UnitSignature> units = {});

  std::size_t dim() const { return state_->parts.support.dim(); }
  const Box& support() const { return state_->parts.support; }
  DensityKind kind() const { return state_->parts.kind; }
  const std::vector<UnitSignature>& coordinate_units() const { return state_->parts.coordinate_units; }
  /// Signature of the density values.
  const UnitSignature& unit() const { return state_->unit; }
  bool improper() const { return state_->parts.improper; }
  const std::optional<GaussianParams>& gaussian() const { return state_->parts.gaussian; }
  const std::vector<Density>& factors() const { return state_->parts.factors; }
  const Parts& parts() const { return state_->parts; }

  /// Checked evaluation: rejects dimension mismatches, returns 0 outside
  /// the support.
  double operator()(PointView x) const;
  double operator()(std::initializer_list<double> x) const { return (*this)(PointView(x.begin(), x.size())); }

  bool can_sample() const;
  /// Inverse-CDF for uniform boxes, Box-Muller for Gaussians, categorical for
  /// discrete kinds; products sample factor by factor.
  Point sample(CounterRng& rng) const;

  /// Finite box that holds essentially all mass: the support itself when
  /// finite, mean +- 12 sigma for Gaussians.
  Box effective_box() const;

  Density with_unit(UnitSignature unit) const;
  Density with_improper(bool improper) const;

 private:
  struct State {
    Parts parts;
    UnitSignature unit;
  };
  std::shared_ptr<const State> state_;
};

/// Reciprocal of the product of the coordinate units.
UnitSignature density_unit(const std::vector<UnitSignature>& coordinate_units);

double eval_density(const Density& d, PointView x);

struct NormalizedDensity {
  Density density;
  /// Reciprocal of the integral of the input.
  double constant = 0.0;
  IntegralResult integral;
};

/// Integrates `p` over its support and rescales it to unit mass. Zero mass
/// is reported as contradictory information; improper or divergent inputs
/// are rejected.
NormalizedDensity normalize(const Density& p, double tol = 1e-8);

}  // namespace bpl
