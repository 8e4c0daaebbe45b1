#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "bpl/error.hpp"
#include "bpl/transdim.hpp"

using namespace bpl;

namespace {
constexpr double kPi = std::numbers::pi;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}
}  // namespace

TEST_CASE("uniform example evidences") {
  const UniformExampleConfig cfg;
  const TransDimProblem p = uniform_problem(cfg, UniformVariant::Literal);
  const EvidenceValue e1 = conditional_evidence(p, 1);
  // (s range)^-1 |D|^-1 (d_hat width) / (2L)
  CHECK(std::fabs(e1.value - 0.1 / (10.0 * 0.02 * 2.0)) <= 1e-12);
  CHECK(e1.unit == units::second().pow(-2));
  CHECK(std::fabs(bayes_factor(p, 2, 1) - 0.04) <= 1e-9);
  CHECK(std::fabs(uniform_bayes_factor_formula(cfg, UniformVariant::Literal) - 0.04) <= 1e-15);
  CHECK(std::fabs(uniform_bayes_factor_formula(cfg, UniformVariant::Component) - 0.02) <= 1e-15);
}

TEST_CASE("identical data intervals reduce the Bayes factor to w / (L ds)") {
  UniformExampleConfig cfg;
  cfg.data = Box({{1.0, 1.2}, {1.0, 1.2}});
  CHECK(std::fabs(uniform_bayes_factor_formula(cfg, UniformVariant::Literal) - 0.2 / 10.0) <= 1e-15);
  CHECK(code_of([&] { parsimony_flip(cfg); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("widening the s range tenfold divides the Bayes factor by ten") {
  UniformExampleConfig a;
  UniformExampleConfig b;
  b.s_min = -45.0;
  b.s_max = 55.0;
  for (UniformVariant v : {UniformVariant::Literal, UniformVariant::Component}) {
    const double ra = bayes_factor(uniform_problem(a, v), 2, 1);
    const double rb = bayes_factor(uniform_problem(b, v), 2, 1);
    CHECK(std::fabs(rb / ra - 0.1) <= 1e-8);
  }
}

TEST_CASE("truncated regime falls back to exact geometry") {
  UniformExampleConfig cfg;
  cfg.s_min = 0.4;
  cfg.s_max = 0.6;
  CHECK_FALSE(uniform_regime_valid(cfg, UniformVariant::Literal));
  const UniformExampleReport r = uniform_example_report(cfg, 100000, 3);
  CHECK(r.literal.regime.find("truncated regime; analytic formulas invalid") != std::string::npos);
  CHECK_FALSE(r.literal.bf_formula.has_value());
  REQUIRE(r.literal.bf_exact.has_value());
  CHECK(std::fabs(*r.literal.bf_exact - 1.5) <= 1e-12);
  CHECK(code_of([&] { parsimony_flip(cfg); }) == ErrorCode::TruncatedRegime);
}

TEST_CASE("parsimony flip on the default data") {
  const ParsimonyFlip f = parsimony_flip({});
  CHECK(f.bf_a < 1.0);
  CHECK(f.bf_b > 1.0);
  CHECK(f.certificate.verified);
  CHECK(std::max(f.certificate.sup_k1, f.certificate.sup_k2) <= kCertificateTol);
  CHECK(uniform_regime_valid(f.cfg_a, UniformVariant::Literal));
  CHECK(uniform_regime_valid(f.cfg_b, UniformVariant::Literal));
}

TEST_CASE("clipped areas") {
  const Box unit = Box::cube(2, 0.0, 1.0);
  CHECK(std::fabs(clipped_area(unit, {}) - 1.0) <= 1e-15);
  CHECK(std::fabs(clipped_area(unit, {{1.0, 1.0, 1.0}}) - 0.5) <= 1e-15);
  CHECK(clipped_area(unit, {{1.0, 0.0, -1.0}}) == 0.0);
  const UniformGeometry g = uniform_geometry({}, UniformVariant::Literal);
  CHECK(std::fabs(g.k2_area - g.k2_area_formula) <= 1e-15);
}

TEST_CASE("property: formula matches MC areas on random in-regime configs") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    UniformExampleConfig c;
    c.L = 0.5 + u(rng);
    const double lo = 0.5 + u(rng);
    const double w = 0.05 + 0.3 * u(rng);
    c.data = Box({{lo, lo + w}, {lo + 0.5 * w * u(rng), lo + w + 0.2 * u(rng)}});
    c.s_min = -1.0;
    c.s_max = 4.0;
    REQUIRE(uniform_regime_valid(c, UniformVariant::Literal));
    const UniformExampleReport r = uniform_example_report(c, 200000, 100 + trial);
    CHECK(std::fabs(r.literal.k2_area_mc.value - r.literal.geometry.k2_area) <= 4.0 * r.literal.k2_area_mc.error);
    CHECK(std::fabs(*r.literal.bf_formula / *r.literal.bf_exact - 1.0) <= 1e-12);
  }
}

TEST_CASE("Gaussian Bayes factor values") {
  CHECK(std::fabs(gaussian_bayes_factor_formula(1.0, 1.0) - std::sqrt(9.0 / 11.0)) <= 1e-15);
  CHECK(std::fabs(gaussian_bayes_factor_formula(2.0, 1.0) - std::sqrt(48.0 / 44.0)) <= 1e-15);
  CHECK(std::fabs(gaussian_bayes_factor_formula(1.0, 1e-4) - 1.0) <= 1e-6);
  CHECK(std::fabs(gaussian_bayes_factor_formula(std::sqrt(2.0), 1.0) - 1.0) <= 1e-10);
  CHECK(fig7_region(gaussian_bayes_factor_formula(1.0, 1.0)) == -1);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.05, 5.0);
  for (int i = 0; i < 100; ++i) {
    const double sd = u(rng);
    const double ss = u(rng);
    CHECK(std::fabs(gaussian_bayes_factor_formula(10 * sd, 10 * ss) / gaussian_bayes_factor_formula(sd, ss) - 1.0) <= 1e-12);
  }
}

TEST_CASE("Gaussian evidences against quadrature") {
  GaussianExampleConfig c;
  CHECK(std::fabs(gaussian_evidence_formula(c, 1) - 1.0 / (6.0 * kPi)) <= 1e-15);
  const EvidenceReport r = evidence_report(gaussian_problem(c));
  CHECK(std::fabs(r.evidence(1).value * 6.0 * kPi - 1.0) <= 1e-9);
  CHECK(std::fabs(*r.pair(2, 1).bayes_factor / std::sqrt(9.0 / 11.0) - 1.0) <= 1e-9);
  c.L = 2.0;
  c.sigma_s = 0.5;
  const GaussianExampleReport g = gaussian_example_report(c);
  CHECK(g.rel_error <= 1e-8);
  CHECK(std::fabs(g.bf_formula - std::sqrt(9.0 / 11.0)) <= 1e-15);
}

TEST_CASE("Bayes factor sweeps decrease for wide model priors") {
  double prev = gaussian_bayes_factor_formula(1.0, 2.0);
  for (double a = 3.0; a < 50.0; a += 1.0) {
    const double b = gaussian_bayes_factor_formula(1.0, a);
    CHECK(b < prev);
    prev = b;
  }
}

TEST_CASE("total evidence, odds and degenerate p_k") {
  GaussianExampleConfig c;
  c.p_k = {1.0, 0.0};
  const TransDimProblem p = gaussian_problem(c);
  const EvidenceReport r = evidence_report(p);
  CHECK(std::fabs(r.total.value - r.evidence(1).value) <= 1e-15);
  CHECK(r.posterior_k[1] == 0.0);
  const TransDimProblem q = gaussian_problem({});
  const EvidenceReport s = evidence_report(q);
  for (const PairEntry& e : s.pairs) {
    CHECK(std::fabs(*e.posterior_odds - *e.bayes_factor * e.prior_odds) <= 1e-15 * *e.posterior_odds);
  }
  CHECK(std::fabs(posterior_odds(q, 2, 1) - bayes_factor(q, 2, 1)) <= 1e-12);
}

TEST_CASE("identical models have a unit Bayes factor") {
  const Density data = Density::gaussian_iid({0.0, 0.0}, 1.0);
  const Density prior = Density::gaussian_iid({0.0}, 0.7);
  const TransDimProblem p({{1, models::one_block(1.0), prior, {}, std::nullopt},
                           {2, models::one_block(1.0), prior, {}, std::nullopt}},
                          data, DiscreteDistribution({{1.0, 0.5}, {2.0, 0.5}}));
  CHECK(std::fabs(bayes_factor(p, 2, 1) - 1.0) <= 1e-12);
}

TEST_CASE("a hypothesis with zero evidence is excluded by the data") {
  UniformExampleConfig cfg;
  cfg.data = Box({{1.0, 1.2}, {1.3, 1.4}});
  const TransDimProblem p = uniform_problem(cfg, UniformVariant::Component);
  CHECK(conditional_evidence(p, 1).value == 0.0);
  try {
    bayes_factor(p, 2, 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ExcludedByData);
    CHECK(std::string(e.what()).find("hypothesis k=1 excluded by data") != std::string::npos);
  }
}

TEST_CASE("likelihood evidence carries units and refuses to rank") {
  const TransDimProblem p = uniform_problem({}, UniformVariant::Literal);
  const DimensionedValue l1 = likelihood_evidence(p, 1);
  CHECK(std::fabs(l1.value - 0.1 / (0.02 * 2.0)) <= 1e-12);
  CHECK(l1.unit == units::second().pow(-2) * units::slowness());
  const DimensionedRatio r = likelihood_evidence_ratio(p, 2, 1);
  CHECK_FALSE(r.dimensionless());
  CHECK(code_of([&] { rank(r, 2, 1); }) == ErrorCode::DimensionedRatio);
  CHECK(rank(DimensionedRatio(2.0, {}), 2, 1) == 2);
  CHECK(rank(DimensionedRatio(0.5, {}), 2, 1) == 1);
}

TEST_CASE("rescaling model coordinates") {
  for (const TransDimProblem& p : {uniform_problem({}, UniformVariant::Literal), gaussian_problem({})}) {
    const TransDimProblem q = rescale_model_coordinates(p, 1000.0);
    CHECK(std::fabs(bayes_factor(q, 2, 1) / bayes_factor(p, 2, 1) - 1.0) <= 1e-12);
    const double ratio = likelihood_evidence_ratio(q, 2, 1).magnitude_in_current_units() /
                         likelihood_evidence_ratio(p, 2, 1).magnitude_in_current_units();
    CHECK(std::fabs(ratio / 1000.0 - 1.0) <= 1e-9);
  }
}

TEST_CASE("a flat data prior gives an improper likelihood evidence") {
  const Density flat = Density::constant(Box::unbounded(2), 1.0);
  const Density prior = Density::gaussian_iid({0.0}, 1.0);
  const TransDimProblem p({{1, models::one_block(1.0), prior, {}, std::nullopt}}, flat,
                          DiscreteDistribution({{1.0, 1.0}}));
  CHECK(code_of([&] { likelihood_evidence(p, 1); }) == ErrorCode::ImproperLikelihoodEvidence);
}
