#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bpl/density.hpp"
#include "bpl/forward.hpp"
#include "bpl/space.hpp"

namespace bpl {

/// Scalar toy with Gaussian data prior (std lambda) and Gaussian model prior
/// (std delta), forward d = k m, and discrete hyperpriors on lambda, delta.
struct HierConfig {
  double pi_lambda = 0.5;
  double pi_delta = 0.5;
  double k = 1.0;
  /// pi_lambda is the mass of lambda_atoms[0], 1 - pi_lambda that of [1].
  std::array<double, 2> lambda_atoms{1.0, 2.0};
  std::array<double, 2> delta_atoms{1.0, 2.0};
  /// Replace the two-atom hyperpriors with arbitrary finite ones.
  std::optional<DiscreteDistribution> lambda_hyper;
  std::optional<DiscreteDistribution> delta_hyper;

  DiscreteDistribution lambda_prior() const;
  DiscreteDistribution delta_prior() const;
  /// Throws InvalidArgument on probabilities outside [0, 1], non-positive
  /// atoms or non-finite k.
  void validate() const;
};

/// pi(lambda) pi(delta) N(d; 0, lambda^2) N(m; 0, delta^2); 0 off the atoms.
double joint_prior(const HierConfig& cfg, double d, double m, double lambda, double delta);

/// joint_prior at d = k m.
double posterior_unnormalized(const HierConfig& cfg, double m, double lambda, double delta);

/// Integral over m of posterior_unnormalized for atoms in {1, 2},
/// in closed form cell by cell; nullopt for other atoms.
std::optional<double> closed_form_cell(const HierConfig& cfg, double lambda, double delta);

struct ThetaPosterior {
  std::vector<double> lambdas;
  std::vector<double> deltas;
  /// table[i][j] for (lambdas[i], deltas[j]), normalized to sum 1.
  std::vector<std::vector<double>> table;
  std::vector<std::vector<double>> unnormalized;
  double normalizer = 0.0;
  std::string method;

  double at(double lambda, double delta) const;
};

ThetaPosterior theta_posterior(const HierConfig& cfg);

/// Cell integral by adaptive quadrature over m, independent of the closed
/// forms.
double quadrature_cell(const HierConfig& cfg, double lambda, double delta, double rel_tol = 1e-12);

/// Row sums (over delta) of the normalized table, ordered like lambdas.
std::vector<double> lambda_marginal(const ThetaPosterior& post);
std::vector<double> lambda_marginal(const HierConfig& cfg);
/// Column sums (over lambda), ordered like deltas.
std::vector<double> delta_marginal(const ThetaPosterior& post);
std::vector<double> delta_marginal(const HierConfig& cfg);

/// Printed marginal expressions (without the 1/p_d factor) for atoms {1, 2}.
std::array<double, 2> expanded_lambda_marginal(const HierConfig& cfg);
std::array<double, 2> expanded_delta_marginal(const HierConfig& cfg);

inline constexpr double kAcausalThreshold = 1e-6;

struct AcausalityCurve {
  std::vector<double> k;
  std::vector<double> p_lambda_first;
  std::vector<double> p_delta_first;
  double lambda_variation = 0.0;
  double delta_variation = 0.0;
  bool acausal_lambda = false;
  bool acausal_delta = false;
};

/// Marginal posterior mass of the first lambda and delta atoms as k moves.
AcausalityCurve acausality_probe(const HierConfig& cfg, const std::vector<double>& k_grid);

struct MisfitEstimate {
  double lambda_star = 0.0;
  double integral = 0.0;
  double log_integral = 0.0;
  /// Coarse log-spaced scan used to bracket the maximum.
  std::vector<std::array<double, 2>> profile;
  /// Golden-section iterates (lambda, log integral).
  std::vector<std::array<double, 2>> trace;
};

/// Integral over m of N(f(m); d_obs, lambda^2 I) p_m(m).
double integrated_posterior(const Point& d_obs, const ForwardModel& f, const Density& m_prior, double lambda,
                            double rel_tol = 1e-11);

/// Maximizer of integrated_posterior over lambda in lambda_range.
MisfitEstimate misfit_lambda_estimator(const Point& d_obs, const ForwardModel& f, const Density& m_prior,
                                       Interval lambda_range, double tol = 1e-6);

}  // namespace bpl
