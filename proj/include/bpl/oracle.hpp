#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "bpl/quadrature.hpp"
#include "bpl/rng.hpp"
#include "bpl/space.hpp"

namespace bpl {

using Sampler = std::function<Point(CounterRng&)>;

/// Plain Monte Carlo estimate of E_q[f] with q the sampler's distribution.
/// Needs n >= 1000; fails with SupportNotHit when every sample gives 0.
IntegralResult mc_integrate(const IntegrandND& f, const Sampler& sampler, std::size_t n, std::uint64_t seed);
/// Integral of f over a finite box with uniform samples.
IntegralResult mc_integrate(const IntegrandND& f, const Box& box, std::size_t n, std::uint64_t seed);

struct MoveStats {
  std::size_t proposed = 0;
  std::size_t accepted = 0;
  double rate() const { return proposed == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(proposed); }
};

/// Chain states in flat storage: state i has model index k[i] and
/// coordinates values[offset[i] .. offset[i] + dim(k[i])).
struct ChainSample {
  std::uint64_t seed = 0;
  std::vector<int> k;
  std::vector<std::size_t> offset;
  std::vector<double> values;
  std::map<std::string, MoveStats> moves;

  std::size_t size() const { return k.size(); }
  PointView point(std::size_t i) const;
  /// Fraction of states with model index `which`.
  double frequency(int which) const;
};

struct MeanEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

/// Batch-means mean and standard error of a correlated series.
MeanEstimate batch_means(const std::vector<double>& series, std::size_t batches = 100);

/// Fails with StuckChain when a window of this many steps accepts nothing.
inline constexpr std::size_t kStuckWindow = 10000;

/// Random-walk Metropolis with isotropic Gaussian proposals.
ChainSample metropolis(const IntegrandND& target, Point init, std::size_t steps, double scale, std::uint64_t seed);

/// Two nested parameterizations: model 2 extends model 1 by one coordinate
/// whose prior is independent of the shared ones.
struct RjTarget {
  std::size_t dim1 = 1;
  /// Likelihood times prior, each without the p_k weight.
  IntegrandND posterior1;
  IntegrandND posterior2;
  /// Prior density of the extra coordinate and a sampler for it.
  std::function<double(double)> extra_prior;
  std::function<double(CounterRng&)> draw_extra;
  double p_k1 = 0.5;
  double p_k2 = 0.5;
  Point init;
  int init_k = 1;
  std::vector<double> scale{0.1, 0.1};
  /// Probability of attempting a dimension jump each step.
  double jump_probability = 0.5;
};

/// Acceptance probability of a birth (k -> k+1) move whose extra coordinate
/// is drawn from its prior: the proposal cancels the extra prior, leaving a
/// likelihood ratio times the p_k ratio times the move-choice ratio.
/// `post_*` are posterior kernels without p_k (likelihood x prior).
double rj_birth_acceptance(double post_from, double post_to, double extra_prior, double p_k_from, double p_k_to,
                           double move_ratio = 1.0);
/// Reverse of rj_birth_acceptance.
double rj_death_acceptance(double post_from, double post_to, double extra_prior, double p_k_from, double p_k_to,
                           double move_ratio = 1.0);

ChainSample rj_mcmc(const RjTarget& target, std::size_t steps, std::uint64_t seed);

/// Transition matrix of the RJ kernel on a three-state toy: one k=1 state and
/// two k=2 states that differ in the extra coordinate. Row-stochastic,
/// states ordered (k1, k2/y1, k2/y2).
struct RjToy {
  double like1 = 1.0;
  double like2_y1 = 1.0;
  double like2_y2 = 1.0;
  double extra_y1 = 0.5;
  double p_k1 = 0.5;
  double jump_probability = 0.5;
};
std::vector<std::vector<double>> rj_toy_transition(const RjToy& toy);
std::vector<double> rj_toy_stationary(const RjToy& toy);

}  // namespace bpl
