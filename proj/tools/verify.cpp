#include "verify.hpp"

#include <algorithm>
#include <cmath>

#include "bpl/conditioning.hpp"
#include "bpl/error.hpp"
#include "bpl/hierarchical.hpp"
#include "bpl/oracle.hpp"
#include "bpl/parallel.hpp"
#include "bpl/regression.hpp"
#include "bpl/rng.hpp"
#include "bpl/transdim.hpp"

namespace bpl::cli {

bool VerifyOutput::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

VerifyOptions verify_options(const std::string& level, std::uint64_t seed, const Json& config) {
  const Json defaults{{"fault_injection", nullptr}, {"mc_samples", 1000000}, {"chain_steps", 1000000}};
  const Json cfg = resolve_config(defaults, config);
  VerifyOptions opt;
  if (level != "fast" && level != "full") fail(ErrorCode::InvalidArgument, "level must be fast or full");
  opt.level = level;
  opt.seed = seed;
  if (!cfg.at("fault_injection").is_null()) {
    const std::string f = cfg.at("fault_injection").get<std::string>();
    if (f != "gaussian-bf-constant") fail(ErrorCode::InvalidArgument, "unknown fault_injection \"" + f + "\"");
    opt.fault_injection = f;
  }
  opt.mc_samples = cfg.at("mc_samples").get<std::size_t>();
  opt.chain_steps = cfg.at("chain_steps").get<std::size_t>();
  if (opt.mc_samples < 1000 || opt.chain_steps < 1000) fail(ErrorCode::InvalidArgument, "sample counts must be >= 1000");
  return opt;
}

namespace {

std::string fmt(double x) { return format_number(x); }

// Runs a block of checks, turning library failures into failed checks.
template <class F>
void guarded(std::vector<Check>& out, const std::string& name, F&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    out.push_back(check_error(name, e.what()));
  }
}

UniformExampleConfig random_uniform(CounterRng& rng) {
  UniformExampleConfig c;
  c.L = rng.uniform(0.5, 2.0);
  const double lo1 = rng.uniform(0.5, 2.0);
  const double w1 = rng.uniform(0.05, 0.5);
  const double lo2 = lo1 + rng.uniform(0.0, 0.8) * w1;
  const double w2 = rng.uniform(0.02, 0.5);
  c.data = Box({{lo1, lo1 + w1}, {lo2, lo2 + w2}});
  double lo = kInf;
  double hi = -kInf;
  for (UniformVariant v : {UniformVariant::Literal, UniformVariant::Component}) {
    const UniformGeometry g = uniform_geometry(c, v);
    lo = std::min({lo, g.k1_support.lo, g.k2_box.axes[0].lo, g.k2_box.axes[1].lo});
    hi = std::max({hi, g.k1_support.hi, g.k2_box.axes[0].hi, g.k2_box.axes[1].hi});
  }
  const double span = hi - lo;
  c.s_min = lo - rng.uniform(0.0, 3.0) * span;
  c.s_max = hi + rng.uniform(0.0, 3.0) * span;
  return c;
}

void verify_regression(std::vector<Check>& out, const VerifyOptions& opt) {
  const std::vector<NamedIntegral> items = regression_integrals();
  const bool mc = opt.level == "full";
  const auto rows = parallel_map<RegressionRow>(items.size(), [&](std::size_t i) {
    return run_regression(items[i], mc, opt.mc_samples, opt.seed + 1000 + i);
  });
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const RegressionRow& r = rows[i];
    Check c = check_rel("integral " + r.name + ": quadrature vs known value", r.quad.value, r.truth, items[i].quad_rel_tol);
    c.pass = r.quad_pass;
    out.push_back(c);
    if (mc) out.push_back(check_max("integral " + r.name + ": Monte Carlo vs quadrature (z)", r.mc_z, 3.0));
  }
}

void verify_borel(std::vector<Check>& out) {
  const ContradictionReport r = borel_contradiction_report({});
  out.push_back(check_max("borel velocity conditional constancy", r.constancy, kConstancyTol));
  out.push_back(check_abs("borel back-transformed exponent", r.exponent, 2.0, kExponentTol));
  out.push_back(check_flag("borel contradiction detected", r.contradiction));
  const SlabComparison sc = borel_slab_comparison({});
  out.push_back(check_max("borel slowness slab vs naive (sup)", sc.slowness_sup, 5e-3));
  out.push_back(check_abs("borel slab ratio exponent", sc.ratio_exponent, 2.0, 0.05));
}

void verify_hierarchical(std::vector<Check>& out, const VerifyOptions& opt) {
  CounterRng rng(opt.seed, 11);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    HierConfig c;
    c.pi_lambda = rng.uniform(0.05, 0.95);
    c.pi_delta = rng.uniform(0.05, 0.95);
    c.k = rng.uniform(0.2, 5.0);
    for (double l : {1.0, 2.0}) {
      for (double d : {1.0, 2.0}) {
        const double q = quadrature_cell(c, l, d);
        worst = std::max(worst, std::fabs(*closed_form_cell(c, l, d) / q - 1.0));
      }
    }
  }
  out.push_back(check_max("hierarchical cells vs quadrature, 20 random configs (max rel)", worst, 1e-8));
  const ThetaPosterior p = theta_posterior({});
  const double expect[4] = {0.361675, 0.228744, 0.228744, 0.180838};
  for (int i = 0; i < 4; ++i) {
    out.push_back(check_abs("hierarchical normalized cell " + std::to_string(i), p.table[i / 2][i % 2], expect[i], 5e-7));
  }
  const AcausalityCurve a = acausality_probe({}, {0.5, 1.0, 2.0});
  out.push_back(check_min("hierarchical p(lambda=1|d) variation over k", a.lambda_variation, 0.01));
  for (double d : {2.0, 5.0, 8.0}) {
    const MisfitEstimate e =
        misfit_lambda_estimator({d}, models::identity(), Density::gaussian_iid({0.0}, 1.0), {0.05, 20.0});
    out.push_back(check_abs("misfit lambda* at d=" + fmt(d), e.lambda_star, std::sqrt(d * d - 1.0), 1e-4));
  }
}

void verify_uniform(std::vector<Check>& out, const VerifyOptions& opt) {
  out.push_back(check_rel("uniform default Bayes factor", uniform_bayes_factor_formula({}, UniformVariant::Literal), 0.04, 1e-12));
  CounterRng rng(opt.seed, 12);
  std::vector<UniformExampleConfig> cfgs;
  for (int i = 0; i < 50; ++i) cfgs.push_back(random_uniform(rng));
  const auto errs = parallel_map<double>(cfgs.size(), [&](std::size_t i) {
    double worst = 0.0;
    for (UniformVariant v : {UniformVariant::Literal, UniformVariant::Component}) {
      const double q = bayes_factor(uniform_problem(cfgs[i], v), 2, 1);
      worst = std::max(worst, std::fabs(uniform_bayes_factor_formula(cfgs[i], v) / q - 1.0));
    }
    return worst;
  });
  out.push_back(check_max("uniform Bayes factor formula vs quadrature, 50 random configs (max rel)",
                          *std::max_element(errs.begin(), errs.end()), 1e-6));
  const ParsimonyFlip f = parsimony_flip({});
  out.push_back(check_flag("uniform flip pair straddles 1", f.bf_a < 1.0 && f.bf_b > 1.0));
  out.push_back(check_flag("uniform flip certificate", f.certificate.verified));
}

void verify_gaussian(std::vector<Check>& out, const VerifyOptions& opt) {
  const bool corrupt = opt.fault_injection && *opt.fault_injection == "gaussian-bf-constant";
  auto formula = [corrupt](double sd, double ss) {
    if (!corrupt) return gaussian_bayes_factor_formula(sd, ss);
    const double d2 = sd * sd;
    const double s2 = ss * ss;
    return sd * std::sqrt((d2 + 9.0 * s2) / (d2 * d2 + 6.0 * d2 * s2 + 4.0 * s2 * s2));
  };
  constexpr std::size_t n = 20;
  auto node = [](std::size_t i) { return 0.2 + 2.8 * static_cast<double>(i) / static_cast<double>(n - 1); };
  const auto errs = parallel_map<double>(n * n, [&](std::size_t idx) {
    GaussianExampleConfig g;
    g.sigma_d = node(idx / n);
    g.sigma_s = node(idx % n);
    const EvidenceReport r = evidence_report(gaussian_problem(g), 1e-11);
    return std::fabs(formula(g.sigma_d, g.sigma_s) / *r.pair(2, 1).bayes_factor - 1.0);
  });
  out.push_back(check_max("gaussian Bayes factor formula vs quadrature, 20x20 grid (max rel)",
                          *std::max_element(errs.begin(), errs.end()), 1e-8));
  out.push_back(check_abs("gaussian B(1, 1)", formula(1.0, 1.0), std::sqrt(9.0 / 11.0), 1e-10));
  out.push_back(check_abs("gaussian B(sqrt 2, 1)", formula(std::sqrt(2.0), 1.0), 1.0, 1e-10));
  std::vector<double> grid;
  for (std::size_t i = 0; i < 60; ++i) grid.push_back(0.1 + 2.9 * static_cast<double>(i) / 59.0);
  const Fig7Map m = fig7_region_map(grid, grid);
  out.push_back(check_max("gaussian B = 1 boundary vs sqrt(2) sigma_s", m.max_boundary_deviation, m.resolution));
}

void verify_units(std::vector<Check>& out) {
  const double c = 1000.0;
  for (const auto& [name, p] : std::vector<std::pair<std::string, TransDimProblem>>{
           {"uniform", uniform_problem({}, UniformVariant::Literal)}, {"gaussian", gaussian_problem({})}}) {
    const TransDimProblem s = rescale_model_coordinates(p, c);
    out.push_back(check_rel("units " + name + " Bayes factor invariance", bayes_factor(s, 2, 1), bayes_factor(p, 2, 1), 1e-12));
    const DimensionedRatio a = likelihood_evidence_ratio(p, 2, 1);
    const DimensionedRatio b = likelihood_evidence_ratio(s, 2, 1);
    out.push_back(check_rel("units " + name + " likelihood ratio scaling", b.magnitude_in_current_units() / a.magnitude_in_current_units(), c, 1e-9));
    out.push_back(check_flag("units " + name + " likelihood ratio is dimensioned", !a.dimensionless()));
  }
}

void verify_chains(std::vector<Check>& out, const VerifyOptions& opt) {
  const ChainSample g = metropolis([](PointView x) { return std::exp(-0.5 * x[0] * x[0]); }, {0.0}, opt.chain_steps, 2.4, opt.seed);
  std::vector<double> xs(g.size());
  std::vector<double> sq(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    xs[i] = g.point(i)[0];
    sq[i] = xs[i] * xs[i];
  }
  const MeanEstimate mean = batch_means(xs);
  const MeanEstimate var = batch_means(sq);
  out.push_back(check_abs("metropolis standard normal mean", mean.mean, 0.0, 3.0 * mean.standard_error));
  out.push_back(check_abs("metropolis standard normal second moment", var.mean, 1.0, 3.0 * var.standard_error));

  const double b = gaussian_bayes_factor_formula(1.0, 1.0);
  const MeanEstimate pg = rj_k1_frequency(rj_mcmc(gaussian_problem({}), opt.chain_steps, opt.seed + 1));
  out.push_back(check_abs("rj gaussian p(k=1|d)", pg.mean, 1.0 / (1.0 + b), 3.0 * pg.standard_error));
  const double bu = uniform_bayes_factor_formula({}, UniformVariant::Literal);
  const MeanEstimate pu = rj_k1_frequency(rj_mcmc(uniform_problem({}, UniformVariant::Literal), opt.chain_steps, opt.seed + 2));
  out.push_back(check_abs("rj uniform p(k=1|d)", pu.mean, 1.0 / (1.0 + bu), 3.0 * pu.standard_error));

  RjToy toy{0.7, 0.4, 1.3, 0.35, 0.45, 0.5};
  const auto P = rj_toy_transition(toy);
  const auto pi = rj_toy_stationary(toy);
  double worst = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) worst = std::max(worst, std::fabs(pi[i] * P[i][j] - pi[j] * P[j][i]));
  }
  out.push_back(check_max("rj toy detailed balance", worst, 1e-10));
}

}  // namespace

VerifyOutput run_verify(const VerifyOptions& opt) {
  VerifyOutput out;
  guarded(out.checks, "regression integrals", [&] { verify_regression(out.checks, opt); });
  guarded(out.checks, "borel", [&] { verify_borel(out.checks); });
  guarded(out.checks, "hierarchical", [&] { verify_hierarchical(out.checks, opt); });
  guarded(out.checks, "uniform trans-dimensional", [&] { verify_uniform(out.checks, opt); });
  guarded(out.checks, "gaussian trans-dimensional", [&] { verify_gaussian(out.checks, opt); });
  guarded(out.checks, "unit audit", [&] { verify_units(out.checks); });
  if (opt.level == "full") guarded(out.checks, "chains", [&] { verify_chains(out.checks, opt); });
  Json checks = Json::array();
  for (const auto& c : out.checks) checks.push_back(to_json(c));
  out.report = Json{{"level", opt.level},
                    {"seed", opt.seed},
                    {"fault_injection", opt.fault_injection ? Json(*opt.fault_injection) : Json(nullptr)},
                    {"checks", checks},
                    {"pass", out.pass()}};
  return out;
}

}  // namespace bpl::cli
