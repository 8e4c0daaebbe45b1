#include "bpl/hierarchical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bpl/error.hpp"

namespace bpl {

namespace {

constexpr double kPi = std::numbers::pi;

double normal_pdf(double x, double sigma) {
  const double z = x / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * kPi));
}

bool tabulated_atom(double v) { return v == 1.0 || v == 2.0; }

}  // namespace

DiscreteDistribution HierConfig::lambda_prior() const {
  if (lambda_hyper) return *lambda_hyper;
  return DiscreteDistribution::binary(lambda_atoms[0], lambda_atoms[1], pi_lambda);
}

DiscreteDistribution HierConfig::delta_prior() const {
  if (delta_hyper) return *delta_hyper;
  return DiscreteDistribution::binary(delta_atoms[0], delta_atoms[1], pi_delta);
}

void HierConfig::validate() const {
  if (!(pi_lambda >= 0.0 && pi_lambda <= 1.0)) fail(ErrorCode::InvalidArgument, "pi_lambda must lie in [0, 1]");
  if (!(pi_delta >= 0.0 && pi_delta <= 1.0)) fail(ErrorCode::InvalidArgument, "pi_delta must lie in [0, 1]");
  if (!std::isfinite(k)) fail(ErrorCode::InvalidArgument, "k must be finite");
  for (const auto& dist : {lambda_prior(), delta_prior()}) {
    for (const auto& a : dist.atoms()) {
      if (!(a.value > 0.0)) fail(ErrorCode::InvalidArgument, "hyperparameter atoms must be positive");
    }
  }
}

double joint_prior(const HierConfig& cfg, double d, double m, double lambda, double delta) {
  const double w = cfg.lambda_prior().probability(lambda) * cfg.delta_prior().probability(delta);
  if (w == 0.0) return 0.0;
  return w * normal_pdf(d, lambda) * normal_pdf(m, delta);
}

double posterior_unnormalized(const HierConfig& cfg, double m, double lambda, double delta) {
  return joint_prior(cfg, cfg.k * m, m, lambda, delta);
}

std::optional<double> closed_form_cell(const HierConfig& cfg, double lambda, double delta) {
  if (!tabulated_atom(lambda) || !tabulated_atom(delta)) return std::nullopt;
  const double w = cfg.lambda_prior().probability(lambda) * cfg.delta_prior().probability(delta);
  const double k2 = cfg.k * cfg.k;
  if (lambda == 1.0 && delta == 1.0) return w / (2.0 * kPi) * std::sqrt(2.0 * kPi / (k2 + 1.0));
  if (lambda == 2.0 && delta == 1.0) return w / (4.0 * kPi) * std::sqrt(8.0 * kPi / (k2 + 4.0));
  if (lambda == 1.0 && delta == 2.0) return w / (4.0 * kPi) * std::sqrt(8.0 * kPi / (4.0 * k2 + 1.0));
  return w / (8.0 * kPi) * std::sqrt(8.0 * kPi / (k2 + 1.0));
}

double quadrature_cell(const HierConfig& cfg, double lambda, double delta, double rel_tol) {
  QuadOptions opt;
  opt.rel_tol = rel_tol;
  opt.initial_panels = 8;
  opt.scale = delta;
  return quad_integrate([&](double m) { return posterior_unnormalized(cfg, m, lambda, delta); }, Interval{}, opt)
      .value;
}

double ThetaPosterior::at(double lambda, double delta) const {
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    for (std::size_t j = 0; j < deltas.size(); ++j) {
      if (lambdas[i] == lambda && deltas[j] == delta) return table[i][j];
    }
  }
  return 0.0;
}

ThetaPosterior theta_posterior(const HierConfig& cfg) {
  cfg.validate();
  ThetaPosterior out;
  const DiscreteDistribution lp = cfg.lambda_prior();
  const DiscreteDistribution dp = cfg.delta_prior();
  for (const auto& a : lp.atoms()) out.lambdas.push_back(a.value);
  for (const auto& a : dp.atoms()) out.deltas.push_back(a.value);
  bool closed = true;
  for (double l : out.lambdas) {
    for (double d : out.deltas) closed = closed && closed_form_cell(cfg, l, d).has_value();
  }
  out.method = closed ? "closed-form" : "quadrature";
  out.unnormalized.assign(out.lambdas.size(), std::vector<double>(out.deltas.size(), 0.0));
  for (std::size_t i = 0; i < out.lambdas.size(); ++i) {
    for (std::size_t j = 0; j < out.deltas.size(); ++j) {
      out.unnormalized[i][j] =
          closed ? *closed_form_cell(cfg, out.lambdas[i], out.deltas[j]) : quadrature_cell(cfg, out.lambdas[i], out.deltas[j]);
      out.normalizer += out.unnormalized[i][j];
    }
  }
  if (!(out.normalizer > 0.0)) {
    fail(ErrorCode::ContradictoryInformation, "contradictory information: every hyperparameter cell is zero");
  }
  out.table = out.unnormalized;
  for (auto& row : out.table) {
    for (double& v : row) v /= out.normalizer;
  }
  return out;
}

std::vector<double> lambda_marginal(const ThetaPosterior& post) {
  std::vector<double> out;
  for (const auto& row : post.table) {
    double s = 0.0;
    for (double v : row) s += v;
    out.push_back(s);
  }
  return out;
}

std::vector<double> delta_marginal(const ThetaPosterior& post) {
  std::vector<double> out(post.deltas.size(), 0.0);
  for (const auto& row : post.table) {
    for (std::size_t j = 0; j < row.size(); ++j) out[j] += row[j];
  }
  return out;
}

std::vector<double> lambda_marginal(const HierConfig& cfg) { return lambda_marginal(theta_posterior(cfg)); }
std::vector<double> delta_marginal(const HierConfig& cfg) { return delta_marginal(theta_posterior(cfg)); }

std::array<double, 2> expanded_lambda_marginal(const HierConfig& cfg) {
  const double pl = cfg.pi_lambda;
  const double pd = cfg.pi_delta;
  const double k2 = cfg.k * cfg.k;
  const double r = std::sqrt(2.0 * kPi);
  return {-(pl * ((pd - 1.0) * std::sqrt(1.0 / (4.0 * k2 + 1.0)) - pd * std::sqrt(1.0 / (k2 + 1.0)))) / r,
          (pl - 1.0) * ((pd - 1.0) * std::sqrt(1.0 / (k2 + 1.0)) - 2.0 * pd * std::sqrt(1.0 / (k2 + 4.0))) /
              (2.0 * r)};
}

std::array<double, 2> expanded_delta_marginal(const HierConfig& cfg) {
  const double pl = cfg.pi_lambda;
  const double pd = cfg.pi_delta;
  const double k2 = cfg.k * cfg.k;
  const double r = std::sqrt(2.0 * kPi);
  return {pd * (std::sqrt(1.0 / (k2 + 4.0)) * (1.0 - pl) + std::sqrt(1.0 / (k2 + 1.0)) * pl) / r,
          -(pd - 1.0) * (std::sqrt(1.0 / (k2 + 1.0)) * (1.0 - pl) + 2.0 * std::sqrt(1.0 / (4.0 * k2 + 1.0)) * pl) /
              (2.0 * r)};
}

AcausalityCurve acausality_probe(const HierConfig& cfg, const std::vector<double>& k_grid) {
  if (k_grid.empty()) fail(ErrorCode::InvalidArgument, "k grid must not be empty");
  AcausalityCurve out;
  for (double k : k_grid) {
    HierConfig c = cfg;
    c.k = k;
    const ThetaPosterior post = theta_posterior(c);
    out.k.push_back(k);
    out.p_lambda_first.push_back(lambda_marginal(post).front());
    out.p_delta_first.push_back(delta_marginal(post).front());
  }
  auto range = [](const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
  };
  out.lambda_variation = range(out.p_lambda_first);
  out.delta_variation = range(out.p_delta_first);
  out.acausal_lambda = out.lambda_variation > kAcausalThreshold;
  out.acausal_delta = out.delta_variation > kAcausalThreshold;
  return out;
}

double integrated_posterior(const Point& d_obs, const ForwardModel& f, const Density& m_prior, double lambda,
                            double rel_tol) {
  if (d_obs.size() != f.d_dim()) fail(ErrorCode::DimensionMismatch, "d_obs dimension differs from the forward model");
  if (m_prior.dim() != f.m_dim()) fail(ErrorCode::DimensionMismatch, "model prior dimension differs from the forward model");
  if (!(lambda > 0.0)) fail(ErrorCode::InvalidArgument, "lambda must be positive");
  const Box box = m_prior.effective_box();
  double widest = 0.0;
  for (const auto& a : box.axes) widest = std::max(widest, a.length());
  QuadOptions opt;
  opt.rel_tol = rel_tol;
  opt.initial_panels = static_cast<std::size_t>(std::clamp(std::ceil(widest / lambda), 16.0, 2048.0));
  return quad_integrate(
             [&](PointView m) {
               const double pm = m_prior(m);
               if (pm == 0.0) return 0.0;
               const Point d = f.apply(m);
               double like = 1.0;
               for (std::size_t i = 0; i < d.size(); ++i) like *= normal_pdf(d[i] - d_obs[i], lambda);
               return like * pm;
             },
             box, opt)
      .value;
}

MisfitEstimate misfit_lambda_estimator(const Point& d_obs, const ForwardModel& f, const Density& m_prior,
                                       Interval lambda_range, double tol) {
  if (!(lambda_range.lo > 0.0) || !(lambda_range.hi > lambda_range.lo) || !lambda_range.finite()) {
    fail(ErrorCode::InvalidArgument, "lambda range must be a finite positive interval");
  }
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "tolerance must be positive");
  auto log_i = [&](double lambda) {
    const double v = integrated_posterior(d_obs, f, m_prior, lambda);
    return v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity();
  };

  MisfitEstimate out;
  constexpr std::size_t kScan = 41;
  const double ratio = std::log(lambda_range.hi / lambda_range.lo);
  std::size_t best = 0;
  for (std::size_t i = 0; i < kScan; ++i) {
    const double l = i + 1 == kScan ? lambda_range.hi
                                    : lambda_range.lo * std::exp(ratio * static_cast<double>(i) / (kScan - 1));
    out.profile.push_back({l, log_i(l)});
    if (out.profile[i][1] > out.profile[best][1]) best = i;
  }
  if (!std::isfinite(out.profile[best][1])) {
    fail(ErrorCode::IntegrandVanishes, "integrated posterior vanishes across the lambda range");
  }

  double a = out.profile[best == 0 ? 0 : best - 1][0];
  double b = out.profile[std::min(best + 1, kScan - 1)][0];
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - g * (b - a);
  double x2 = a + g * (b - a);
  double f1 = log_i(x1);
  double f2 = log_i(x2);
  while (b - a > tol) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = log_i(x1);
      out.trace.push_back({x1, f1});
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = log_i(x2);
      out.trace.push_back({x2, f2});
    }
  }
  out.lambda_star = 0.5 * (a + b);
  out.log_integral = log_i(out.lambda_star);
  // The scan can beat the interior optimum when the maximum sits on an end.
  for (double end : {lambda_range.lo, lambda_range.hi}) {
    const double v = log_i(end);
    if (v > out.log_integral) {
      out.lambda_star = end;
      out.log_integral = v;
    }
  }
  out.integral = std::exp(out.log_integral);
  return out;
}

}  // namespace bpl
