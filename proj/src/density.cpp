#include "bpl/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bpl/error.hpp"

namespace bpl {

std::string to_string(DensityKind kind) {
  switch (kind) {
    case DensityKind::UniformBox: return "uniform-box";
    case DensityKind::GaussianIid: return "gaussian-iid";
    case DensityKind::Discrete: return "discrete";
    case DensityKind::Product: return "product";
    case DensityKind::Custom: return "custom";
  }
  return "custom";
}

DiscreteDistribution::DiscreteDistribution(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) fail(ErrorCode::InvalidArgument, "discrete distribution needs at least one atom");
  double total = 0.0;
  for (const auto& a : atoms_) {
    if (!(a.probability >= 0.0)) fail(ErrorCode::InvalidArgument, "negative atom probability");
    if (!std::isfinite(a.value)) fail(ErrorCode::InvalidArgument, "non-finite atom value");
    total += a.probability;
  }
  if (std::fabs(total - 1.0) > 1e-12) {
    fail(ErrorCode::InvalidArgument, "atom probabilities sum to " + std::to_string(total) + ", not 1");
  }
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms_.size(); ++j) {
      if (atoms_[i].value == atoms_[j].value) fail(ErrorCode::InvalidArgument, "duplicate atom value");
    }
  }
}

DiscreteDistribution DiscreteDistribution::binary(double first, double second, double p) {
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCode::InvalidArgument, "probability outside [0, 1]");
  return DiscreteDistribution({{first, p}, {second, 1.0 - p}});
}

double DiscreteDistribution::probability(double value) const {
  for (const auto& a : atoms_) {
    if (a.value == value) return a.probability;
  }
  return 0.0;
}

double DiscreteDistribution::sample(CounterRng& rng) const {
  const double u = rng.uniform();
  double acc = 0.0;
  for (const auto& a : atoms_) {
    acc += a.probability;
    if (u < acc) return a.value;
  }
  // Rounding can leave u just above the cumulative total.
  for (auto it = atoms_.rbegin(); it != atoms_.rend(); ++it) {
    if (it->probability > 0.0) return it->value;
  }
  return atoms_.back().value;
}

UnitSignature density_unit(const std::vector<UnitSignature>& coordinate_units) {
  UnitSignature u;
  for (const auto& c : coordinate_units) u = u * c;
  return u.reciprocal();
}

Density::Density(Parts parts) {
  if (parts.support.dim() == 0) fail(ErrorCode::InvalidArgument, "density needs dimension >= 1");
  if (!parts.eval) fail(ErrorCode::InvalidArgument, "density needs an evaluator");
  if (parts.coordinate_units.empty()) parts.coordinate_units.assign(parts.support.dim(), UnitSignature{});
  if (parts.coordinate_units.size() != parts.support.dim()) {
    fail(ErrorCode::DimensionMismatch, "coordinate units do not match density dimension");
  }
  UnitSignature unit = parts.unit ? *parts.unit : density_unit(parts.coordinate_units);
  state_ = std::make_shared<const State>(State{std::move(parts), std::move(unit)});
}

double Density::operator()(PointView x) const {
  if (x.size() != dim()) {
    fail(ErrorCode::DimensionMismatch,
         "point of dimension " + std::to_string(x.size()) + " for density of dimension " + std::to_string(dim()));
  }
  if (!support().contains(x)) return 0.0;
  const double v = state_->parts.eval(x);
  if (std::isnan(v) || v < 0.0) fail(ErrorCode::InvalidArgument, "density evaluator returned a negative or NaN value");
  return v;
}

double eval_density(const Density& d, PointView x) { return d(x); }

Density Density::uniform_box(Box box, std::vector<UnitSignature> units) {
  if (box.dim() == 0 || !box.finite() || !(box.volume() > 0.0)) {
    fail(ErrorCode::InvalidArgument, "uniform density needs a finite box of positive volume");
  }
  const double value = 1.0 / box.volume();
  Parts p;
  p.support = std::move(box);
  p.eval = [value](PointView) { return value; };
  p.coordinate_units = std::move(units);
  p.kind = DensityKind::UniformBox;
  return Density(std::move(p));
}

Density Density::gaussian_iid(Point mean, double sigma, std::vector<UnitSignature> units) {
  if (mean.empty()) fail(ErrorCode::InvalidArgument, "gaussian needs dimension >= 1");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) fail(ErrorCode::InvalidArgument, "gaussian sigma must be positive");
  const double norm = std::pow(sigma * std::sqrt(2.0 * std::numbers::pi), -static_cast<double>(mean.size()));
  Parts p;
  p.support = Box::unbounded(mean.size());
  p.eval = [mean, sigma, norm](PointView x) {
    double q = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double z = (x[i] - mean[i]) / sigma;
      q += z * z;
    }
    return norm * std::exp(-0.5 * q);
  };
  p.coordinate_units = std::move(units);
  p.kind = DensityKind::GaussianIid;
  p.gaussian = GaussianParams{std::move(mean), sigma};
  return Density(std::move(p));
}

Density Density::constant(Box support, double value, std::optional<bool> improper, std::vector<UnitSignature> units) {
  if (!(value >= 0.0) || !std::isfinite(value)) fail(ErrorCode::InvalidArgument, "constant density must be finite and >= 0");
  Parts p;
  p.improper = improper.value_or(!support.finite());
  p.support = std::move(support);
  p.eval = [value](PointView) { return value; };
  p.coordinate_units = std::move(units);
  return Density(std::move(p));
}

Density Density::discrete(DiscreteDistribution dist) {
  Parts p;
  p.support = Box::unbounded(1);
  p.eval = [dist](PointView x) { return dist.probability(x[0]); };
  p.kind = DensityKind::Discrete;
  p.discrete = std::move(dist);
  return Density(std::move(p));
}

Density Density::product(std::vector<Density> factors) {
  if (factors.empty()) fail(ErrorCode::InvalidArgument, "product of zero densities");
  Parts p;
  p.kind = DensityKind::Product;
  UnitSignature unit;
  for (const auto& f : factors) {
    for (const auto& a : f.support().axes) p.support.axes.push_back(a);
    for (const auto& u : f.coordinate_units()) p.coordinate_units.push_back(u);
    unit = unit * f.unit();
    p.improper = p.improper || f.improper();
  }
  p.unit = unit;
  p.eval = [factors](PointView x) {
    double v = 1.0;
    std::size_t offset = 0;
    for (const auto& f : factors) {
      v *= f(x.subspan(offset, f.dim()));
      if (v == 0.0) return 0.0;
      offset += f.dim();
    }
    return v;
  };
  p.factors = std::move(factors);
  return Density(std::move(p));
}

Density Density::custom(Box support, Evaluator eval, std::vector<UnitSignature> units) {
  Parts p;
  p.support = std::move(support);
  p.eval = std::move(eval);
  p.coordinate_units = std::move(units);
  return Density(std::move(p));
}

bool Density::can_sample() const {
  switch (kind()) {
    case DensityKind::UniformBox:
    case DensityKind::GaussianIid:
    case DensityKind::Discrete:
      return true;
    case DensityKind::Product:
      return std::all_of(factors().begin(), factors().end(), [](const Density& f) { return f.can_sample(); });
    case DensityKind::Custom:
      return false;
  }
  return false;
}

Point Density::sample(CounterRng& rng) const {
  switch (kind()) {
    case DensityKind::UniformBox: {
      Point x(dim());
      for (std::size_t i = 0; i < dim(); ++i) x[i] = rng.uniform(support().axes[i].lo, support().axes[i].hi);
      return x;
    }
    case DensityKind::GaussianIid: {
      const auto& g = *gaussian();
      Point x(dim());
      for (std::size_t i = 0; i < dim(); ++i) x[i] = g.mean[i] + g.sigma * rng.normal();
      return x;
    }
    case DensityKind::Discrete:
      return {state_->parts.discrete->sample(rng)};
    case DensityKind::Product: {
      Point x;
      for (const auto& f : factors()) {
        const Point part = f.sample(rng);
        x.insert(x.end(), part.begin(), part.end());
      }
      return x;
    }
    case DensityKind::Custom:
      break;
  }
  fail(ErrorCode::InvalidArgument, "sampling is only available for uniform, gaussian, discrete and product densities");
}

Box Density::effective_box() const {
  if (support().finite()) return support();
  if (kind() == DensityKind::GaussianIid) {
    const auto& g = *gaussian();
    Box b;
    for (double m : g.mean) b.axes.push_back({m - 12.0 * g.sigma, m + 12.0 * g.sigma});
    return intersect(b, support());
  }
  if (kind() == DensityKind::Product) {
    Box b;
    for (const auto& f : factors()) {
      for (const auto& a : f.effective_box().axes) b.axes.push_back(a);
    }
    return b;
  }
  return support();
}

Density Density::with_unit(UnitSignature unit) const {
  Parts p = state_->parts;
  p.unit = std::move(unit);
  return Density(std::move(p));
}

Density Density::with_improper(bool improper) const {
  Parts p = state_->parts;
  p.improper = improper;
  p.unit = unit();
  return Density(std::move(p));
}

NormalizedDensity normalize(const Density& p, double tol) {
  if (p.improper()) fail(ErrorCode::Divergent, "improper density cannot be normalized");
  QuadOptions opt;
  opt.rel_tol = tol;
  opt.initial_panels = 8;
  if (p.gaussian()) opt.scale = p.gaussian()->sigma;
  const IntegralResult r = quad_integrate(p, p.support(), opt);
  if (!std::isfinite(r.value) || (!r.converged && !p.support().finite())) {
    fail(ErrorCode::Divergent, "integral of density diverges");
  }
  if (!(r.value > 0.0)) fail(ErrorCode::ContradictoryInformation, "contradictory information: density has zero mass");
  const double c = 1.0 / r.value;
  Density::Parts parts = p.parts();
  parts.eval = [p, c](PointView x) { return c * p(x); };
  parts.unit = density_unit(parts.coordinate_units);
  if (parts.kind == DensityKind::Product) parts.kind = DensityKind::Custom;
  return {Density(std::move(parts)), c, r};
}

}  // namespace bpl
