#include "demos.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "bpl/conditioning.hpp"
#include "bpl/error.hpp"
#include "bpl/hierarchical.hpp"
#include "bpl/transdim.hpp"

namespace bpl::cli {

bool DemoOutput::verified() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

namespace {

Json formula(const std::string& tag, const std::string& expression) {
  return Json{{"tag", tag}, {"expression", expression}};
}

std::string yes(bool b) { return b ? "true" : "false"; }

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

Json unit_json(const UnitSignature& u) { return u.str(); }

// Borel ----------------------------------------------------------------------

Json borel_defaults() {
  return Json{{"velocity_box", Json::array({Json::array({1.0, 5.0}), Json::array({1.0, 5.0})})},
              {"data_box", Json::array({Json::array({0.5, 1.0}), Json::array({0.5, 1.0})})},
              {"rays", Json::array({Json::array({1.0, 1.0}), Json::array({2.0, 0.0})})},
              {"grid_points", 200},
              {"slab", true},
              {"slab_eps", Json::array({1e-2, 3e-3, 1e-3, 3e-4, 1e-4})}};
}

DemoOutput borel(const Json& cfg) {
  BorelConfig bc;
  bc.velocity_box = box_from_json(cfg.at("velocity_box"));
  bc.data_box = box_from_json(cfg.at("data_box"));
  const Json& rays = cfg.at("rays");
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) bc.rays.length[i][j] = rays.at(i).at(j).get<double>();
  }
  bc.grid_points = cfg.at("grid_points").get<std::size_t>();
  if (bc.velocity_box.dim() != 2 || bc.data_box.dim() != 2) fail(ErrorCode::InvalidArgument, "boxes must be 2-D");

  DemoOutput out;
  const ContradictionReport r = borel_contradiction_report(bc);
  const ContradictionReport id = borel_contradiction_report(bc, BorelVariant::Identity);
  Json& rep = out.report;
  rep["contradiction"] = r.contradiction;
  rep["identity_contradiction"] = id.contradiction;
  rep["support"] = to_json(r.support);
  rep["constancy"] = r.constancy;
  rep["exponent"] = r.exponent;
  rep["ratio_exponent"] = r.ratio_exponent;
  rep["ratio_spread"] = r.ratio_spread;
  rep["velocity_mass"] = r.velocity_mass;
  rep["back_transformed_mass"] = r.back_transformed_mass;
  rep["parameterization"] = r.parameterization;
  rep["formulas"] = Json::array({formula("diagonal-restriction", "p(x, x) / int p(u, u) du over the diagonal"),
                                 formula("reciprocal-jacobian", "|det dh/dv| = 1 / (v1^2 v2^2)"),
                                 formula("pushforward", "q(h(x)) |det dh/dx| = p(x)")});

  out.checks.push_back(check_max("velocity conditional constancy (max/min - 1)", r.constancy, kConstancyTol));
  out.checks.push_back(check_abs("back-transformed exponent", r.exponent, 2.0, kExponentTol));
  out.checks.push_back(check_abs("velocity conditional mass", r.velocity_mass, 1.0, 1e-8));
  out.checks.push_back(check_abs("back-transformed mass", r.back_transformed_mass, 1.0, 1e-8));
  out.checks.push_back(check_flag("identity chart shows no contradiction", !id.contradiction));

  const UnitSignature v = units::velocity();
  const UnitSignature s = units::slowness();
  CsvTable cond{"borel_conditionals.csv",
                {column("v", v), column("naive_velocity", s), column("back_transformed", s), column("ratio", {})},
                {}};
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    cond.rows.push_back({r.grid[i], r.naive_velocity[i], r.back_transformed[i], r.ratio[i]});
  }
  out.tables.push_back(std::move(cond));

  if (cfg.at("slab").get<bool>()) {
    SlabLimitOptions so;
    so.eps = cfg.at("slab_eps").get<std::vector<double>>();
    so.grid_points = bc.grid_points;
    const SlabComparison sc = borel_slab_comparison(bc, so);
    rep["slab"] = Json{{"eps", so.eps},
                       {"slowness_deviation", sc.slowness_slab.deviation},
                       {"velocity_deviation", sc.velocity_slab.deviation},
                       {"slowness_order", sc.slowness_slab.order},
                       {"velocity_order", sc.velocity_slab.order},
                       {"slowness_sup_vs_naive", sc.slowness_sup},
                       {"velocity_over_slowness_exponent", sc.ratio_exponent}};
    out.checks.push_back(check_max("slowness slab vs naive slowness conditional (sup)", sc.slowness_sup, 5e-3));
    out.checks.push_back(check_abs("velocity slab / slowness slab exponent", sc.ratio_exponent, 2.0, 0.05));
    CsvTable slab{"borel_slab.csv",
                  {column("s", s), column("naive_slowness", v), column("slowness_slab", v),
                   column("slowness_slab_extrapolated", v), column("velocity_slab", v),
                   column("velocity_slab_extrapolated", v)},
                  {}};
    const auto& g = sc.slowness_slab.grid;
    for (std::size_t i = 0; i < g.size(); ++i) {
      slab.rows.push_back({g[i], sc.naive_slowness[i], sc.slowness_slab.values.back()[i], sc.slowness_slab.extrapolated[i],
                           sc.velocity_slab.values.back()[i], sc.velocity_slab.extrapolated[i]});
    }
    out.tables.push_back(std::move(slab));
    CsvTable dev{"borel_slab_deviation.csv", {column("eps", {}), column("slowness_deviation", v), column("velocity_deviation", v)}, {}};
    for (std::size_t i = 0; i < so.eps.size(); ++i) {
      dev.rows.push_back({so.eps[i], sc.slowness_slab.deviation[i], sc.velocity_slab.deviation[i]});
    }
    out.tables.push_back(std::move(dev));
  }
  out.summary.push_back("contradiction: " + yes(r.contradiction));
  out.summary.push_back("velocity conditional max/min - 1: " + fmt(r.constancy));
  out.summary.push_back("back-transformed exponent: " + fmt(r.exponent));
  return out;
}

// Hierarchical ---------------------------------------------------------------

Json hier_defaults() {
  return Json{{"pi_lambda", 0.5},      {"pi_delta", 0.5},  {"k", 1.0},
              {"lambda_atoms", {1.0, 2.0}}, {"delta_atoms", {1.0, 2.0}}, {"lambda_hyper", nullptr},
              {"delta_hyper", nullptr}, {"probe_k", {0.5, 1.0, 2.0}}, {"curve_k", "0.25:4:41"}};
}

HierConfig hier_config(const Json& cfg) {
  HierConfig hc;
  hc.pi_lambda = cfg.at("pi_lambda").get<double>();
  hc.pi_delta = cfg.at("pi_delta").get<double>();
  hc.k = cfg.at("k").get<double>();
  hc.lambda_atoms = cfg.at("lambda_atoms").get<std::array<double, 2>>();
  hc.delta_atoms = cfg.at("delta_atoms").get<std::array<double, 2>>();
  if (!cfg.at("lambda_hyper").is_null()) hc.lambda_hyper = discrete_from_json(cfg.at("lambda_hyper"));
  if (!cfg.at("delta_hyper").is_null()) hc.delta_hyper = discrete_from_json(cfg.at("delta_hyper"));
  hc.validate();
  return hc;
}

DemoOutput hierarchical(const Json& cfg) {
  const HierConfig hc = hier_config(cfg);
  DemoOutput out;
  const ThetaPosterior post = theta_posterior(hc);
  Json& rep = out.report;
  rep["method"] = post.method;
  rep["lambdas"] = post.lambdas;
  rep["deltas"] = post.deltas;
  rep["table"] = post.table;
  rep["unnormalized"] = post.unnormalized;
  rep["normalizer"] = post.normalizer;
  rep["lambda_marginal"] = lambda_marginal(post);
  rep["delta_marginal"] = delta_marginal(post);
  rep["formulas"] = Json::array({formula("hierarchical-cell",
                                         "w / (2 pi lambda delta) * sqrt(2 pi / (k^2 / lambda^2 + 1 / delta^2))"),
                                 formula("theta-normalization", "cells divided by their sum")});

  for (std::size_t i = 0; i < post.lambdas.size(); ++i) {
    for (std::size_t j = 0; j < post.deltas.size(); ++j) {
      const double q = quadrature_cell(hc, post.lambdas[i], post.deltas[j]);
      const std::string name = "cell (" + fmt(post.lambdas[i]) + ", " + fmt(post.deltas[j]) + ") vs quadrature";
      if (q == 0.0) out.checks.push_back(check_abs(name, post.unnormalized[i][j], 0.0, 1e-300));
      else out.checks.push_back(check_rel(name, post.unnormalized[i][j], q, 1e-8));
    }
  }
  const bool expanded = post.method == "closed-form" && !hc.lambda_hyper && !hc.delta_hyper;
  if (expanded) {
    rep["formulas"].push_back(formula("expanded-marginals", "row and column sums of the cell formulas"));
    const auto pl = expanded_lambda_marginal(hc);
    const auto pd = expanded_delta_marginal(hc);
    rep["expanded_lambda_marginal"] = pl;
    rep["expanded_delta_marginal"] = pd;
    for (std::size_t i = 0; i < 2; ++i) {
      const double rows = post.unnormalized[i][0] + post.unnormalized[i][1];
      const double cols = post.unnormalized[0][i] + post.unnormalized[1][i];
      out.checks.push_back(check_abs("expanded lambda marginal " + std::to_string(i), pl[i], rows, 1e-12));
      out.checks.push_back(check_abs("expanded delta marginal " + std::to_string(i), pd[i], cols, 1e-12));
    }
  }

  const std::vector<double> probe = cfg.at("probe_k").get<std::vector<double>>();
  const AcausalityCurve ac = acausality_probe(hc, probe);
  rep["acausality"] = Json{{"k", ac.k},
                           {"p_lambda_first", ac.p_lambda_first},
                           {"p_delta_first", ac.p_delta_first},
                           {"lambda_variation", ac.lambda_variation},
                           {"delta_variation", ac.delta_variation},
                           {"acausal_lambda", ac.acausal_lambda},
                           {"acausal_delta", ac.acausal_delta}};
  const std::vector<double> curve_k = parse_grid(cfg.at("curve_k"), "curve_k");
  const AcausalityCurve curve = acausality_probe(hc, curve_k);
  CsvTable t{"hierarchical_theta.csv", {column("lambda", {}), column("delta", {}), column("posterior", {}), column("unnormalized", {})}, {}};
  for (std::size_t i = 0; i < post.lambdas.size(); ++i) {
    for (std::size_t j = 0; j < post.deltas.size(); ++j) {
      t.rows.push_back({post.lambdas[i], post.deltas[j], post.table[i][j], post.unnormalized[i][j]});
    }
  }
  out.tables.push_back(std::move(t));
  CsvTable c{"hierarchical_acausality.csv", {column("k", {}), column("p_lambda_first", {}), column("p_delta_first", {})}, {}};
  for (std::size_t i = 0; i < curve.k.size(); ++i) c.rows.push_back({curve.k[i], curve.p_lambda_first[i], curve.p_delta_first[i]});
  out.tables.push_back(std::move(c));

  out.summary.push_back("theta posterior (" + post.method + "):");
  for (std::size_t i = 0; i < post.lambdas.size(); ++i) {
    for (std::size_t j = 0; j < post.deltas.size(); ++j) {
      out.summary.push_back("  lambda=" + fmt(post.lambdas[i]) + " delta=" + fmt(post.deltas[j]) + ": " + fmt(post.table[i][j]));
    }
  }
  out.summary.push_back("p(lambda first atom | d) variation over probe k: " + fmt(ac.lambda_variation));
  return out;
}

// Misfit ---------------------------------------------------------------------

Json misfit_defaults() {
  return Json{{"d_obs", {0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0}},
              {"lambda_range", {0.05, 20.0}},
              {"prior", {{"kind", "gaussian-iid"}, {"mean", {0.0}}, {"sigma", 1.0}}},
              {"forward", {{"kind", "identity"}}},
              {"tol", 1e-6}};
}

DemoOutput misfit(const Json& cfg) {
  const std::vector<double> d_obs = cfg.at("d_obs").get<std::vector<double>>();
  const auto range = cfg.at("lambda_range").get<std::array<double, 2>>();
  const Density prior = density_from_json(cfg.at("prior"));
  const ForwardModel f = forward_from_json(cfg.at("forward"));
  const double tol = cfg.at("tol").get<double>();
  if (f.d_dim() != 1) fail(ErrorCode::InvalidArgument, "misfit demo needs a scalar forward model");
  if (d_obs.empty()) fail(ErrorCode::InvalidArgument, "d_obs must not be empty");

  // The closed-form optimum applies to the identity map with a standard normal prior.
  const bool analytic = f.name() == models::identity().name() && prior.gaussian() && prior.gaussian()->sigma == 1.0 &&
                        prior.gaussian()->mean[0] == 0.0;
  DemoOutput out;
  Json rows = Json::array();
  CsvTable trace{"misfit_trace.csv", {column("d_obs", {}), column("lambda_star", {}), column("analytic", {})}, {}};
  CsvTable profile{"misfit_profile.csv", {column("d_obs", {}), column("lambda", {}), column("log_integral", {})}, {}};
  std::vector<std::pair<double, double>> by_misfit;
  for (double d : d_obs) {
    const MisfitEstimate e = misfit_lambda_estimator({d}, f, prior, {range[0], range[1]}, tol);
    double reference = std::nan("");
    if (analytic) {
      reference = d * d > 1.0 ? std::sqrt(d * d - 1.0) : range[0];
      reference = std::clamp(reference, range[0], range[1]);
      out.checks.push_back(check_abs("lambda* at d_obs=" + fmt(d), e.lambda_star, reference, 1e-4));
    }
    rows.push_back(Json{{"d_obs", d}, {"lambda_star", e.lambda_star}, {"log_integral", e.log_integral}, {"analytic", reference}});
    trace.rows.push_back({d, e.lambda_star, reference});
    for (const auto& p : e.profile) profile.rows.push_back({d, p[0], p[1]});
    by_misfit.push_back({std::fabs(d), e.lambda_star});
    out.summary.push_back("d_obs=" + fmt(d) + " lambda*=" + fmt(e.lambda_star));
  }
  std::sort(by_misfit.begin(), by_misfit.end());
  bool monotone = true;
  for (std::size_t i = 1; i < by_misfit.size(); ++i) monotone = monotone && by_misfit[i].second >= by_misfit[i - 1].second - tol;
  out.checks.push_back(check_flag("lambda* nondecreasing in |d_obs|", monotone));
  out.report["estimates"] = rows;
  out.report["analytic_reference"] = analytic;
  out.report["formulas"] = Json::array({formula("integrated-posterior", "I(lambda) = int N(f(m) - d_obs; 0, lambda^2) p_m(m) dm"),
                                        formula("identity-optimum", "lambda* = sqrt(d_obs^2 - 1) for |d_obs| > 1")});
  out.tables.push_back(std::move(trace));
  out.tables.push_back(std::move(profile));
  return out;
}

// Trans-dimensional ----------------------------------------------------------

Json uniform_defaults() {
  return Json{{"L", 1.0},
              {"s_min", 0.0},
              {"s_max", 10.0},
              {"data", {{1.0, 1.2}, {1.05, 1.15}}},
              {"p_k", {0.5, 0.5}},
              {"mc_samples", 1000000},
              {"flip_variant", "literal"},
              {"compare_ranges", {{0.4, 0.6}}}};
}

UniformExampleConfig uniform_config(const Json& cfg) {
  UniformExampleConfig uc;
  uc.L = cfg.at("L").get<double>();
  uc.s_min = cfg.at("s_min").get<double>();
  uc.s_max = cfg.at("s_max").get<double>();
  uc.data = box_from_json(cfg.at("data"));
  uc.p_k = cfg.at("p_k").get<std::array<double, 2>>();
  if (uc.s_min >= uc.s_max) fail(ErrorCode::EmptySupport, "empty box: s_min must be below s_max");
  uc.validate();
  return uc;
}

Json gaussian_defaults() {
  return Json{{"sigma_d", 1.0}, {"sigma_s", 1.0}, {"L", 1.0}, {"p_k", {0.5, 0.5}}, {"rel_tol", 1e-11}};
}

GaussianExampleConfig gaussian_config(const Json& cfg) {
  GaussianExampleConfig g;
  g.sigma_d = cfg.at("sigma_d").get<double>();
  g.sigma_s = cfg.at("sigma_s").get<double>();
  g.L = cfg.at("L").get<double>();
  g.p_k = cfg.at("p_k").get<std::array<double, 2>>();
  g.validate();
  return g;
}

Json evidence_json(const EvidenceReport& r) {
  Json per = Json::array();
  for (const auto& e : r.per_k) {
    per.push_back(Json{{"k", e.k}, {"value", e.value}, {"error", e.error}, {"method", e.method},
                       {"converged", e.converged}, {"unit", unit_json(e.unit)}});
  }
  Json pairs = Json::array();
  for (const auto& p : r.pairs) {
    pairs.push_back(Json{{"k1", p.k1},
                         {"k2", p.k2},
                         {"bayes_factor", p.bayes_factor ? Json(*p.bayes_factor) : Json(nullptr)},
                         {"prior_odds", p.prior_odds},
                         {"posterior_odds", p.posterior_odds ? Json(*p.posterior_odds) : Json(nullptr)},
                         {"unit", unit_json(p.unit)}});
  }
  return Json{{"method", r.method},
              {"per_k", per},
              {"total", {{"value", r.total.value}, {"error", r.total.error}}},
              {"pairs", pairs},
              {"posterior_k", r.posterior_k},
              {"warnings", r.warnings}};
}

void odds_identity(DemoOutput& out, const EvidenceReport& r, const std::string& tag) {
  for (const auto& p : r.pairs) {
    if (p.bayes_factor && p.posterior_odds) {
      out.checks.push_back(check_abs(tag + " posterior odds = BF x prior odds (" + std::to_string(p.k1) + ":" +
                                         std::to_string(p.k2) + ")",
                                     *p.posterior_odds, *p.bayes_factor * p.prior_odds, 0.0));
    }
    out.checks.push_back(check_flag(tag + " Bayes factor dimensionless", p.unit.is_dimensionless()));
  }
}

Json flip_json(const ParsimonyFlip& f) {
  auto c = [](const UniformExampleConfig& x) { return Json::array({x.s_min, x.s_max}); };
  return Json{{"range_a", c(f.cfg_a)},
              {"bf_a", f.bf_a},
              {"range_b", c(f.cfg_b)},
              {"bf_b", f.bf_b},
              {"certificate", {{"sup_k1", f.certificate.sup_k1}, {"sup_k2", f.certificate.sup_k2},
                               {"points", f.certificate.points}, {"verified", f.certificate.verified},
                               {"tolerance", kCertificateTol}}}};
}

DemoOutput transdim_uniform(const Json& cfg, std::uint64_t seed) {
  const UniformExampleConfig uc = uniform_config(cfg);
  const std::size_t mc = cfg.at("mc_samples").get<std::size_t>();
  const std::string fv = cfg.at("flip_variant").get<std::string>();
  if (fv != "literal" && fv != "component") fail(ErrorCode::InvalidArgument, "flip_variant must be literal or component");
  const UniformVariant flip_variant = fv == "literal" ? UniformVariant::Literal : UniformVariant::Component;

  DemoOutput out;
  const UniformExampleReport r = uniform_example_report(uc, mc, seed);
  Json& rep = out.report;
  rep["warnings"] = r.warnings;
  rep["formulas"] = Json::array({formula("uniform-evidence-k1", "w_hat / (2 L ds |D|)"),
                                 formula("uniform-evidence-k2", "|L2| / (ds^2 |D|)"),
                                 formula("uniform-support-area", "|L2| = w1^2 / (2 L^2) (literal), w1 w2 / (2 L^2) (component)"),
                                 formula("uniform-bayes-factor", "BF(2:1) = w1^2 / (L ds w_hat) (literal), w1 w2 / (L ds w_hat) (component)")});
  for (const auto* v : {&r.literal, &r.component}) {
    const std::string tag = to_string(v->variant);
    Json j{{"regime_valid", v->regime_valid},
           {"regime", v->regime},
           {"k1_support", to_json(v->geometry.k1_support)},
           {"k2_box", to_json(v->geometry.k2_box)},
           {"k2_area", v->geometry.k2_area},
           {"k2_area_formula", v->geometry.k2_area_formula},
           {"k2_area_mc", {{"value", v->k2_area_mc.value}, {"standard_error", v->k2_area_mc.error}}},
           {"k1_length_mc", {{"value", v->k1_length_mc.value}, {"standard_error", v->k1_length_mc.error}}},
           {"bf_formula", v->bf_formula ? Json(*v->bf_formula) : Json(nullptr)},
           {"bf_exact", v->bf_exact ? Json(*v->bf_exact) : Json(nullptr)},
           {"evidence", evidence_json(v->evidence)}};
    rep[tag] = j;
    odds_identity(out, v->evidence, tag);
    if (v->k2_area_mc.evaluations > 0) {
      out.checks.push_back(check_abs(tag + " k=2 support area: MC vs exact", v->k2_area_mc.value, v->geometry.k2_area,
                                     3.0 * v->k2_area_mc.error));
    }
    if (v->k1_length_mc.evaluations > 0) {
      out.checks.push_back(check_abs(tag + " k=1 support length: MC vs exact", v->k1_length_mc.value,
                                     v->geometry.k1_support.length(), 3.0 * v->k1_length_mc.error));
    }
    const EvidenceReport q = evidence_report(uniform_problem(uc, v->variant));
    if (q.pair(2, 1).bayes_factor && v->bf_exact) {
      if (v->bf_formula) {
        out.checks.push_back(check_rel(tag + " Bayes factor formula vs quadrature", *v->bf_formula, *q.pair(2, 1).bayes_factor, 1e-6));
        out.checks.push_back(check_rel(tag + " support area formula vs exact", v->geometry.k2_area_formula, v->geometry.k2_area, 1e-12));
      }
      out.checks.push_back(check_rel(tag + " exact-geometry Bayes factor vs quadrature", *v->bf_exact, *q.pair(2, 1).bayes_factor, 1e-6));
    }
  }

  // Flip pair from the configured prior, then the requested comparison ranges.
  const UniformVariantReport& fr = flip_variant == UniformVariant::Literal ? r.literal : r.component;
  if (fr.regime_valid && uc.data.axes[0] != uc.data.axes[1] && uc.d_hat().length() > 0.0) {
    try {
      const ParsimonyFlip f = parsimony_flip(uc, flip_variant);
      rep["flip"] = flip_json(f);
      out.checks.push_back(check_flag("flip pair straddles BF = 1", f.bf_a < 1.0 && f.bf_b > 1.0));
      out.checks.push_back(check_flag("flip pair posterior-identity certificate", f.certificate.verified));
      out.summary.push_back("flip pair: BF " + fmt(f.bf_a) + " on [" + fmt(f.cfg_a.s_min) + ", " + fmt(f.cfg_a.s_max) + "] vs " +
                            fmt(f.bf_b) + " on [" + fmt(f.cfg_b.s_min) + ", " + fmt(f.cfg_b.s_max) + "], certificate " +
                            (f.certificate.verified ? "verified" : "FAILED"));
    } catch (const Error& e) {
      rep["flip"] = Json{{"error", e.what()}};
    }
  } else {
    rep["flip"] = Json{{"error", "flip construction needs a regime-valid prior and non-identical, overlapping observations"}};
  }
  Json comps = Json::array();
  for (const auto& range : cfg.at("compare_ranges")) {
    UniformExampleConfig other = uc;
    other.s_min = range.at(0).get<double>();
    other.s_max = range.at(1).get<double>();
    other.validate();
    const FlipCertificate c = flip_certificate(uc, other, flip_variant);
    Json j{{"range", {other.s_min, other.s_max}},
           {"regime_valid", uniform_regime_valid(other, flip_variant)},
           {"certificate_vs_configured", {{"sup_k1", c.sup_k1}, {"sup_k2", c.sup_k2}, {"verified", c.verified}}}};
    try {
      j["bf_formula"] = uniform_bayes_factor_formula(other, flip_variant);
    } catch (const Error& e) {
      j["bf_formula"] = nullptr;
    }
    const UniformExampleReport o = uniform_example_report(other, 1000, seed);
    const UniformVariantReport& ov = flip_variant == UniformVariant::Literal ? o.literal : o.component;
    j["bf_exact"] = ov.bf_exact ? Json(*ov.bf_exact) : Json(nullptr);
    comps.push_back(j);
    out.summary.push_back("range [" + fmt(other.s_min) + ", " + fmt(other.s_max) + "]: formula BF " +
                          (j["bf_formula"].is_null() ? std::string("n/a") : fmt(j["bf_formula"].get<double>())) +
                          ", regime " + (j["regime_valid"].get<bool>() ? "valid" : "truncated") + ", exact BF " +
                          (ov.bf_exact ? fmt(*ov.bf_exact) : std::string("n/a")) + ", certificate sup " +
                          fmt(std::max(c.sup_k1, c.sup_k2)));
  }
  rep["range_comparisons"] = comps;

  const UnitSignature s = units::slowness();
  const UnitSignature per_s = UnitSignature{} / s;
  CsvTable post{"uniform_posterior_k1.csv", {column("s", s), column("posterior", per_s)}, {}};
  const Interval sup = r.literal.geometry.k1_support;
  if (!sup.empty() && sup.length() > 0.0) {
    const Interval span{sup.lo - 0.5 * sup.length(), sup.hi + 0.5 * sup.length()};
    for (std::size_t i = 0; i <= 200; ++i) {
      const double x[1] = {span.lo + span.length() * static_cast<double>(i) / 200.0};
      double p = 0.0;
      try {
        p = uniform_posterior_density(uc, UniformVariant::Literal, 1, x);
      } catch (const Error&) {
      }
      post.rows.push_back({x[0], p});
    }
  }
  out.tables.push_back(std::move(post));
  CsvTable ev{"uniform_evidence.csv", {column("variant", {}), column("k", {}), column("evidence", units::second().pow(Rational(-2))),
                                        column("posterior_k", {})}, {}};
  for (const auto* v : {&r.literal, &r.component}) {
    for (std::size_t i = 0; i < v->evidence.per_k.size(); ++i) {
      ev.rows.push_back({v->variant == UniformVariant::Literal ? 0.0 : 1.0, static_cast<double>(v->evidence.per_k[i].k),
                         v->evidence.per_k[i].value, v->evidence.posterior_k[i]});
    }
  }
  out.tables.push_back(std::move(ev));
  for (const auto* v : {&r.literal, &r.component}) {
    out.summary.push_back(to_string(v->variant) + ": BF(2:1) " +
                          (v->bf_formula ? fmt(*v->bf_formula) : std::string("n/a (") + v->regime + ")") +
                          (v->bf_exact ? ", exact geometry " + fmt(*v->bf_exact) : std::string()));
  }
  for (const auto& w : r.warnings) out.summary.push_back("warning: " + w);
  return out;
}

DemoOutput transdim_gaussian(const Json& cfg) {
  const GaussianExampleConfig g = gaussian_config(cfg);
  const GaussianExampleReport r = gaussian_example_report(g, cfg.at("rel_tol").get<double>());
  DemoOutput out;
  Json& rep = out.report;
  rep["evidence_formula"] = r.evidence_formula;
  rep["bf_formula"] = r.bf_formula;
  rep["bf_quadrature"] = r.bf_quadrature;
  rep["rel_error"] = r.rel_error;
  rep["favors"] = r.bf_formula > 1.0 ? 2 : (r.bf_formula < 1.0 ? 1 : 0);
  rep["quadrature"] = evidence_json(r.quadrature);
  rep["formulas"] = Json::array({formula("gaussian-evidence-k1", "1 / (2 pi sd sqrt(sd^2 + 8 (L ss)^2))"),
                                 formula("gaussian-evidence-k2", "1 / (2 pi sqrt(sd^4 + 6 sd^2 (L ss)^2 + 4 (L ss)^4))"),
                                 formula("gaussian-bayes-factor",
                                         "B = sd sqrt((sd^2 + 8 ss^2) / (sd^4 + 6 sd^2 ss^2 + 4 ss^4)) at L = 1")});
  for (int k : {1, 2}) {
    out.checks.push_back(check_rel("evidence k=" + std::to_string(k) + " formula vs quadrature", r.evidence_formula[k - 1],
                                   r.quadrature.evidence(k).value, 1e-8));
  }
  out.checks.push_back(check_rel("Bayes factor formula vs quadrature", r.bf_formula, r.bf_quadrature, 1e-8));
  odds_identity(out, r.quadrature, "gaussian");
  CsvTable t{"gaussian_evidence.csv", {column("k", {}), column("formula", units::second().pow(Rational(-2))),
                                       column("quadrature", units::second().pow(Rational(-2))),
                                       column("quadrature_error", units::second().pow(Rational(-2)))}, {}};
  for (int k : {1, 2}) {
    t.rows.push_back({static_cast<double>(k), r.evidence_formula[k - 1], r.quadrature.evidence(k).value, r.quadrature.evidence(k).error});
  }
  out.tables.push_back(std::move(t));
  out.summary.push_back("B = p(d|2)/p(d|1): formula " + fmt(r.bf_formula) + ", quadrature " + fmt(r.bf_quadrature));
  return out;
}

Json fig7_defaults() { return Json{{"sigma_d_grid", "0.1:3:60"}, {"sigma_s_grid", "0.1:3:60"}}; }

DemoOutput fig7(const Json& cfg) {
  const std::vector<double> sd = parse_grid(cfg.at("sigma_d_grid"), "sigma_d_grid");
  const std::vector<double> ss = parse_grid(cfg.at("sigma_s_grid"), "sigma_s_grid");
  const Fig7Map m = fig7_region_map(sd, ss);
  DemoOutput out;
  Json& rep = out.report;
  Json boundary = Json::array();
  for (const auto& b : m.boundary) boundary.push_back({b[0], b[1]});
  rep["boundary"] = boundary;
  rep["max_boundary_deviation"] = m.max_boundary_deviation;
  rep["resolution"] = m.resolution;
  rep["boundary_pass"] = m.boundary_pass;
  rep["formulas"] = Json::array({formula("gaussian-bayes-factor", "B = sd sqrt((sd^2 + 8 ss^2) / (sd^4 + 6 sd^2 ss^2 + 4 ss^4))"),
                                 formula("gaussian-boundary", "B = 1 on sd = sqrt(2) ss")});
  out.checks.push_back(check_max("boundary vs sd = sqrt(2) ss (max deviation)", m.max_boundary_deviation, m.resolution));
  out.checks.push_back(check_flag("boundary found", !m.boundary.empty()));
  CsvTable t{"fig7_region.csv", {column("sigma_d", units::second()), column("sigma_s", units::slowness()), column("B", {}),
                                 column("region", {})}, {}};
  for (std::size_t i = 0; i < sd.size(); ++i) {
    for (std::size_t j = 0; j < ss.size(); ++j) t.rows.push_back({sd[i], ss[j], m.bf[i][j], static_cast<double>(fig7_region(m.bf[i][j]))});
  }
  out.tables.push_back(std::move(t));
  CsvTable b{"fig7_boundary.csv", {column("sigma_s", units::slowness()), column("sigma_d_boundary", units::second()),
                                   column("sqrt2_sigma_s", units::second())}, {}};
  for (const auto& p : m.boundary) b.rows.push_back({p[0], p[1], std::sqrt(2.0) * p[0]});
  out.tables.push_back(std::move(b));
  out.summary.push_back("boundary points: " + std::to_string(m.boundary.size()) + ", max deviation from sqrt(2) sigma_s: " +
                        fmt(m.max_boundary_deviation) + " (grid step " + fmt(m.resolution) + ")");
  return out;
}

Json units_defaults() { return Json{{"c", 1000.0}, {"uniform", uniform_defaults()}, {"gaussian", gaussian_defaults()}}; }

DemoOutput units_audit(const Json& cfg) {
  const double c = cfg.at("c").get<double>();
  DemoOutput out;
  Json& rep = out.report;
  rep["c"] = c;
  rep["formulas"] = Json::array({formula("likelihood-evidence", "int p_d(g_k(m)) dm, unit [d]^-N prod [m_k]"),
                                 formula("evidence", "int p_d(g_k(m)) p_m(m) dm, unit [d]^-N")});
  CsvTable t{"units_audit.csv", {column("example", {}), column("bayes_factor", {}), column("bayes_factor_rescaled", {}),
                                 column("likelihood_ratio", units::slowness()), column("likelihood_ratio_rescaled", units::slowness())}, {}};
  const std::vector<std::pair<std::string, TransDimProblem>> problems{
      {"uniform", uniform_problem(uniform_config(cfg.at("uniform")), UniformVariant::Literal)},
      {"gaussian", gaussian_problem(gaussian_config(cfg.at("gaussian")))}};
  double idx = 0.0;
  for (const auto& [name, p] : problems) {
    const TransDimProblem scaled = rescale_model_coordinates(p, c);
    const EvidenceReport a = evidence_report(p);
    const EvidenceReport b = evidence_report(scaled);
    const PairEntry& pa = a.pair(2, 1);
    const PairEntry& pb = b.pair(2, 1);
    const DimensionedRatio la = likelihood_evidence_ratio(p, 2, 1);
    const DimensionedRatio lb = likelihood_evidence_ratio(scaled, 2, 1);
    std::string refusal;
    try {
      rank(la, 2, 1);
    } catch (const Error& e) {
      refusal = e.what();
    }
    auto ratio_json = [](const DimensionedRatio& r) {
      return Json{{"magnitude_in_current_units", r.magnitude_in_current_units()}, {"unit", unit_json(r.unit())},
                  {"dimensionless", r.dimensionless()}};
    };
    Json evid = Json::array();
    for (int k : {1, 2}) {
      const DimensionedValue v = likelihood_evidence(p, k);
      evid.push_back(Json{{"k", k}, {"value", v.value}, {"unit", unit_json(v.unit)}});
    }
    rep[name] = Json{{"bayes_factor", *pa.bayes_factor},
                     {"bayes_factor_unit", unit_json(pa.unit)},
                     {"bayes_factor_rescaled", *pb.bayes_factor},
                     {"likelihood_evidence", evid},
                     {"likelihood_ratio", ratio_json(la)},
                     {"likelihood_ratio_rescaled", ratio_json(lb)},
                     {"ranking_refused", refusal}};
    out.checks.push_back(check_flag(name + " Bayes factor dimensionless", pa.unit.is_dimensionless()));
    out.checks.push_back(check_rel(name + " Bayes factor invariant under rescaling", *pb.bayes_factor, *pa.bayes_factor, 1e-12));
    out.checks.push_back(check_rel(name + " likelihood ratio scales by c", lb.magnitude_in_current_units() / la.magnitude_in_current_units(), c, 1e-9));
    out.checks.push_back(check_flag(name + " likelihood ratio carries units", !la.dimensionless() && la.unit() == lb.unit()));
    out.checks.push_back(check_flag(name + " ranking by likelihood ratio refused", !refusal.empty()));
    t.rows.push_back({idx++, *pa.bayes_factor, *pb.bayes_factor, la.magnitude_in_current_units(), lb.magnitude_in_current_units()});
    out.summary.push_back(name + ": BF " + fmt(*pa.bayes_factor) + " -> " + fmt(*pb.bayes_factor) + "; likelihood ratio " +
                          la.str() + " -> " + lb.str());
  }
  out.tables.push_back(std::move(t));
  return out;
}

}  // namespace

const std::vector<std::string>& demo_names() {
  static const std::vector<std::string> names{"borel", "hierarchical", "misfit", "transdim-uniform",
                                              "transdim-gaussian", "fig7", "units"};
  return names;
}

Json demo_defaults(const std::string& name) {
  if (name == "borel") return borel_defaults();
  if (name == "hierarchical") return hier_defaults();
  if (name == "misfit") return misfit_defaults();
  if (name == "transdim-uniform") return uniform_defaults();
  if (name == "transdim-gaussian") return gaussian_defaults();
  if (name == "fig7") return fig7_defaults();
  if (name == "units") return units_defaults();
  fail(ErrorCode::InvalidArgument, "unknown demo \"" + name + "\"");
}

DemoOutput run_demo(const std::string& name, const Json& user_config, const RunOptions& opt) {
  Json cfg = resolve_config(demo_defaults(name), user_config);
  if (name == "borel") {
    for (auto& axis : cfg["velocity_box"]) {
      if (opt.v_min) axis[0] = *opt.v_min;
      if (opt.v_max) axis[1] = *opt.v_max;
    }
  }
  if (name == "fig7") {
    if (opt.sigma_d_grid) cfg["sigma_d_grid"] = *opt.sigma_d_grid;
    if (opt.sigma_s_grid) cfg["sigma_s_grid"] = *opt.sigma_s_grid;
  }
  DemoOutput out;
  if (name == "borel") out = borel(cfg);
  else if (name == "hierarchical") out = hierarchical(cfg);
  else if (name == "misfit") out = misfit(cfg);
  else if (name == "transdim-uniform") out = transdim_uniform(cfg, opt.seed);
  else if (name == "transdim-gaussian") out = transdim_gaussian(cfg);
  else if (name == "fig7") out = fig7(cfg);
  else out = units_audit(cfg);

  Json report{{"demo", name}, {"seed", opt.seed}, {"config", cfg}};
  for (auto& [k, v] : out.report.items()) report[k] = v;
  Json checks = Json::array();
  for (const auto& c : out.checks) checks.push_back(to_json(c));
  report["verification"] = Json{{"checks", checks}, {"pass", out.verified()}};
  out.report = std::move(report);
  return out;
}

}  // namespace bpl::cli
