#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bpl/density.hpp"
#include "bpl/forward.hpp"
#include "bpl/oracle.hpp"
#include "bpl/space.hpp"
#include "bpl/units.hpp"

namespace bpl {

/// One hypothesis of a variable-dimension problem.
struct TransDimModel {
  int k = 1;
  ForwardModel forward;
  Density prior;
  /// Replaces data_prior(forward(m)) when set.
  Density::Evaluator likelihood_override;
  /// Box known to contain the likelihood support; integration is restricted
  /// to it.
  std::optional<Box> likelihood_box;
};

class TransDimProblem {
 public:
  /// `p_k` has one atom per model, valued at the model's k.
  TransDimProblem(std::vector<TransDimModel> models, Density data_prior, DiscreteDistribution p_k);

  const std::vector<TransDimModel>& models() const { return models_; }
  const Density& data_prior() const { return data_prior_; }
  const DiscreteDistribution& p_k() const { return p_k_; }
  const TransDimModel& model(int k) const;
  std::vector<int> ks() const;
  double prior_probability(int k) const { return p_k_.probability(k); }

  double likelihood(int k, PointView m) const;
  /// Likelihood x prior for model k (no p_k weight).
  double posterior_kernel(int k, PointView m) const;
  /// Prior support restricted to the likelihood box.
  Box integration_box(int k) const;

 private:
  std::vector<TransDimModel> models_;
  Density data_prior_;
  DiscreteDistribution p_k_;
};

struct EvidenceValue {
  int k = 0;
  double value = 0.0;
  double error = 0.0;
  std::string method;
  bool converged = true;
  UnitSignature unit;
};

/// Integral of likelihood x prior over model k's space.
EvidenceValue conditional_evidence(const TransDimProblem& p, int k, double rel_tol = 1e-10);

struct TotalEvidence {
  double value = 0.0;
  double error = 0.0;
};
TotalEvidence total_evidence(const TransDimProblem& p, const std::vector<EvidenceValue>& per_k);
TotalEvidence total_evidence(const TransDimProblem& p);

/// evidence(k1) / evidence(k2); ExcludedByData when evidence(k2) is 0.
double bayes_factor(const TransDimProblem& p, int k1, int k2);
double bayes_factor(const EvidenceValue& e1, const EvidenceValue& e2);
/// bayes_factor * p_k(k1) / p_k(k2).
double posterior_odds(const TransDimProblem& p, int k1, int k2);

struct PairEntry {
  int k1 = 0;
  int k2 = 0;
  std::optional<double> bayes_factor;
  double prior_odds = 0.0;
  std::optional<double> posterior_odds;
  UnitSignature unit;
};

struct EvidenceReport {
  std::vector<EvidenceValue> per_k;
  TotalEvidence total;
  std::vector<PairEntry> pairs;
  std::vector<double> posterior_k;
  std::vector<std::string> warnings;
  std::string method;

  const EvidenceValue& evidence(int k) const;
  const PairEntry& pair(int k1, int k2) const;
};

/// Evidences per k (computed concurrently), their total and every ordered
/// pair of Bayes factors and posterior odds.
EvidenceReport evidence_report(const TransDimProblem& p, double rel_tol = 1e-10);
/// Assembles a report from given evidences, e.g. closed forms.
EvidenceReport assemble_report(const TransDimProblem& p, std::vector<EvidenceValue> per_k, std::string method);

/// Reversible-jump target for a two-model problem whose k=2 model extends
/// k=1 by one coordinate with an independent prior (uniform-box or
/// Gaussian-iid k=2 priors). The chain starts at k=1 from the centre of the
/// k=1 integration box (or the prior mean on unbounded supports).
RjTarget rj_target(const TransDimProblem& p);
ChainSample rj_mcmc(const TransDimProblem& p, std::size_t steps, std::uint64_t seed);

/// Empirical p(k=1|d) with its batch-means standard error.
MeanEstimate rj_k1_frequency(const ChainSample& chain);

// Uniform example ------------------------------------------------------------

struct UniformExampleConfig {
  double L = 1.0;
  double s_min = 0.0;
  double s_max = 10.0;
  Box data{{{1.0, 1.2}, {1.05, 1.15}}};
  std::array<double, 2> p_k{0.5, 0.5};

  void validate() const;
  double width1() const { return data.axes[0].length(); }
  double width2() const { return data.axes[1].length(); }
  /// Intersection of the two data intervals.
  Interval d_hat() const { return intersect(data.axes[0], data.axes[1]); }
  double data_volume() const { return data.volume(); }
};

/// Literal: the k=2 likelihood checks 2 L s1 against data interval 1.
/// Component: it checks 2 L s1 against interval 2, the data it predicts.
enum class UniformVariant { Literal, Component };
std::string to_string(UniformVariant v);

/// Half-plane a . x <= b.
struct HalfPlane {
  double a1 = 0.0;
  double a2 = 0.0;
  double b = 0.0;
};
/// Exact area of a box clipped by half-planes (Sutherland-Hodgman plus the
/// shoelace formula).
double clipped_area(const Box& box, const std::vector<HalfPlane>& planes);

/// Likelihood support of each k as constraints, and its bounding box.
struct UniformGeometry {
  Interval k1_support;
  std::vector<HalfPlane> k2_constraints;
  Box k2_box;
  /// Exact area of the k=2 likelihood support.
  double k2_area = 0.0;
  /// Area by formula: w1^2 / (2 L^2) (literal) or w1 w2 / (2 L^2).
  double k2_area_formula = 0.0;
};
UniformGeometry uniform_geometry(const UniformExampleConfig& cfg, UniformVariant v);

TransDimProblem uniform_problem(const UniformExampleConfig& cfg, UniformVariant v);

/// Both supports lie inside the prior box.
bool uniform_regime_valid(const UniformExampleConfig& cfg, UniformVariant v);

/// Bayes factor (2:1) formula: w1^2 / (L ds w_hat) for the literal variant,
/// w1 w2 / (L ds w_hat) for the component variant.
double uniform_bayes_factor_formula(const UniformExampleConfig& cfg, UniformVariant v);

struct UniformVariantReport {
  UniformVariant variant = UniformVariant::Literal;
  bool regime_valid = true;
  std::string regime;
  UniformGeometry geometry;
  EvidenceReport evidence;
  /// Formula value, only inside the regime.
  std::optional<double> bf_formula;
  /// Exact-geometry value, valid in every regime.
  std::optional<double> bf_exact;
  /// Monte Carlo checks of the support sizes.
  IntegralResult k2_area_mc;
  IntegralResult k1_length_mc;
};

struct UniformExampleReport {
  UniformExampleConfig cfg;
  UniformVariantReport literal;
  UniformVariantReport component;
  std::vector<std::string> warnings;
};

UniformExampleReport uniform_example_report(const UniformExampleConfig& cfg, std::size_t mc_samples = 1000000,
                                            std::uint64_t seed = 1);

/// Normalized posterior over s for fixed k, by exact geometry.
double uniform_posterior_density(const UniformExampleConfig& cfg, UniformVariant v, int k, PointView s);

struct FlipCertificate {
  double sup_k1 = 0.0;
  double sup_k2 = 0.0;
  std::size_t points = 0;
  bool verified = false;
};
inline constexpr double kCertificateTol = 1e-10;

/// Sup over a grid on the likelihood supports of the difference between the
/// per-k normalized posteriors of two configs.
FlipCertificate flip_certificate(const UniformExampleConfig& a, const UniformExampleConfig& b, UniformVariant v,
                                 std::size_t grid = 101);

struct ParsimonyFlip {
  UniformExampleConfig cfg_a;
  UniformExampleConfig cfg_b;
  double bf_a = 0.0;
  double bf_b = 0.0;
  FlipCertificate certificate;
};

/// Two s-ranges with the same posterior over s but BF(2:1) on either side of
/// 1. cfg_b is the narrowest range that still covers the likelihood support.
ParsimonyFlip parsimony_flip(const UniformExampleConfig& base, UniformVariant v = UniformVariant::Literal);

// Gaussian example -----------------------------------------------------------

struct GaussianExampleConfig {
  double sigma_d = 1.0;
  double sigma_s = 1.0;
  double L = 1.0;
  std::array<double, 2> p_k{0.5, 0.5};

  void validate() const;
};

TransDimProblem gaussian_problem(const GaussianExampleConfig& cfg);

/// Conditional evidences p(d|k) in closed form.
double gaussian_evidence_formula(const GaussianExampleConfig& cfg, int k);
/// B = p(d|2) / p(d|1).
double gaussian_bayes_factor_formula(double sigma_d, double sigma_s);

struct GaussianExampleReport {
  GaussianExampleConfig cfg;
  std::array<double, 2> evidence_formula{};
  double bf_formula = 0.0;
  EvidenceReport quadrature;
  double bf_quadrature = 0.0;
  double rel_error = 0.0;
};
GaussianExampleReport gaussian_example_report(const GaussianExampleConfig& cfg, double rel_tol = 1e-11);

struct Fig7Map {
  std::vector<double> sigma_d;
  std::vector<double> sigma_s;
  /// bf[i][j] at (sigma_d[i], sigma_s[j]).
  std::vector<std::vector<double>> bf;
  /// Interpolated B = 1 crossing along sigma_d for each sigma_s: (sigma_s, sigma_d).
  std::vector<std::array<double, 2>> boundary;
  double max_boundary_deviation = 0.0;
  double resolution = 0.0;
  bool boundary_pass = false;
};
/// +1 where B > 1 (favors k = 2), -1 where B < 1, 0 on the boundary.
int fig7_region(double bf);
Fig7Map fig7_region_map(const std::vector<double>& sigma_d, const std::vector<double>& sigma_s);

// Unit audit -----------------------------------------------------------------

struct DimensionedValue {
  double value = 0.0;
  double error = 0.0;
  UnitSignature unit;
};

/// A ratio that may carry physical units. There is deliberately no
/// conversion to double; rank() refuses dimensioned ratios.
class DimensionedRatio {
 public:
  DimensionedRatio(double magnitude, UnitSignature unit) : magnitude_(magnitude), unit_(std::move(unit)) {}
  double magnitude_in_current_units() const { return magnitude_; }
  const UnitSignature& unit() const { return unit_; }
  bool dimensionless() const { return unit_.is_dimensionless(); }
  std::string str() const;

 private:
  double magnitude_;
  UnitSignature unit_;
};

/// Integral of the likelihood alone over model k's space. Fails with
/// ImproperLikelihoodEvidence when it diverges.
DimensionedValue likelihood_evidence(const TransDimProblem& p, int k, double rel_tol = 1e-10);
DimensionedRatio likelihood_evidence_ratio(const TransDimProblem& p, int k1, int k2);

/// k1 when the ratio exceeds 1, k2 otherwise. Fails with DimensionedRatio
/// when the ratio carries units.
int rank(const DimensionedRatio& ratio, int k1, int k2);

/// Same problem with every model coordinate expressed in a unit c times
/// smaller (m' = c m): priors pushed forward, forward maps and likelihood
/// overrides composed with m = m' / c.
TransDimProblem rescale_model_coordinates(const TransDimProblem& p, double c);

}  // namespace bpl
