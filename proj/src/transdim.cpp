#include "bpl/transdim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "bpl/diffeomorphism.hpp"
#include "bpl/error.hpp"
#include "bpl/parallel.hpp"

namespace bpl {

namespace {

constexpr double kPi = std::numbers::pi;

UnitSignature coordinate_product(const std::vector<UnitSignature>& units) {
  UnitSignature u;
  for (const auto& c : units) u = u * c;
  return u;
}

DiscreteDistribution pk_from(const std::array<double, 2>& p) {
  return DiscreteDistribution({{1.0, p[0]}, {2.0, p[1]}});
}

}  // namespace

// Engine ---------------------------------------------------------------------

TransDimProblem::TransDimProblem(std::vector<TransDimModel> models, Density data_prior, DiscreteDistribution p_k)
    : models_(std::move(models)), data_prior_(std::move(data_prior)), p_k_(std::move(p_k)) {
  if (models_.empty()) fail(ErrorCode::InvalidArgument, "trans-dimensional problem needs at least one model");
  std::set<int> seen;
  for (const auto& m : models_) {
    if (!seen.insert(m.k).second) fail(ErrorCode::InvalidArgument, "duplicate model index k");
    if (m.forward.m_dim() != m.prior.dim()) {
      fail(ErrorCode::DimensionMismatch, "model prior dimension differs from the forward model for k=" + std::to_string(m.k));
    }
    if (m.forward.d_dim() != data_prior_.dim()) {
      fail(ErrorCode::DimensionMismatch, "data prior dimension differs from the forward model for k=" + std::to_string(m.k));
    }
    if (m.likelihood_box && m.likelihood_box->dim() != m.prior.dim()) {
      fail(ErrorCode::DimensionMismatch, "likelihood box dimension differs from the model for k=" + std::to_string(m.k));
    }
  }
  for (const auto& a : p_k_.atoms()) {
    if (a.value != std::round(a.value) || !seen.contains(static_cast<int>(a.value))) {
      fail(ErrorCode::InvalidArgument, "p_k has an atom with no registered model");
    }
  }
}

const TransDimModel& TransDimProblem::model(int k) const {
  for (const auto& m : models_) {
    if (m.k == k) return m;
  }
  fail(ErrorCode::InvalidArgument, "hypothesis k=" + std::to_string(k) + " is not registered");
}

std::vector<int> TransDimProblem::ks() const {
  std::vector<int> out;
  for (const auto& m : models_) out.push_back(m.k);
  return out;
}

double TransDimProblem::likelihood(int k, PointView m) const {
  const TransDimModel& mod = model(k);
  if (mod.likelihood_override) return mod.likelihood_override(m);
  return data_prior_(mod.forward.apply(m));
}

double TransDimProblem::posterior_kernel(int k, PointView m) const {
  const TransDimModel& mod = model(k);
  const double pm = mod.prior(m);
  if (pm == 0.0) return 0.0;
  return pm * (mod.likelihood_override ? mod.likelihood_override(m) : data_prior_(mod.forward.apply(m)));
}

Box TransDimProblem::integration_box(int k) const {
  const TransDimModel& mod = model(k);
  return mod.likelihood_box ? intersect(mod.prior.support(), *mod.likelihood_box) : mod.prior.support();
}

namespace {

QuadOptions evidence_options(const TransDimModel& mod, const Box& box, double rel_tol) {
  QuadOptions opt;
  opt.rel_tol = rel_tol;
  opt.initial_panels = 4;
  // Uniform-type likelihoods are indicators; integrate only where nonzero.
  if (box.finite()) opt.locate_support = 257;
  if (mod.prior.gaussian()) opt.scale = mod.prior.gaussian()->sigma;
  return opt;
}

}  // namespace

EvidenceValue conditional_evidence(const TransDimProblem& p, int k, double rel_tol) {
  const TransDimModel& mod = p.model(k);
  EvidenceValue out;
  out.k = k;
  out.unit = p.data_prior().unit() * mod.prior.unit() * coordinate_product(mod.prior.coordinate_units());
  const Box box = p.integration_box(k);
  if (box.empty()) {
    out.method = "empty-support";
    return out;
  }
  const IntegralResult r =
      quad_integrate([&](PointView m) { return p.posterior_kernel(k, m); }, box, evidence_options(mod, box, rel_tol));
  if (!std::isfinite(r.value) || (!r.converged && !box.finite())) {
    fail(ErrorCode::Divergent, "evidence integral for k=" + std::to_string(k) + " diverges");
  }
  out.value = r.value;
  out.error = r.error;
  out.method = r.method;
  out.converged = r.converged;
  return out;
}

TotalEvidence total_evidence(const TransDimProblem& p, const std::vector<EvidenceValue>& per_k) {
  TotalEvidence t;
  for (const auto& e : per_k) {
    const double w = p.prior_probability(e.k);
    t.value += e.value * w;
    t.error += e.error * w;
  }
  return t;
}

TotalEvidence total_evidence(const TransDimProblem& p) {
  std::vector<EvidenceValue> per_k;
  for (int k : p.ks()) per_k.push_back(conditional_evidence(p, k));
  return total_evidence(p, per_k);
}

double bayes_factor(const EvidenceValue& e1, const EvidenceValue& e2) {
  if (e2.value == 0.0) fail(ErrorCode::ExcludedByData, "hypothesis k=" + std::to_string(e2.k) + " excluded by data");
  const UnitSignature u = e1.unit / e2.unit;
  if (!u.is_dimensionless()) fail(ErrorCode::DimensionedRatio, "evidence ratio carries unit " + u.str());
  return e1.value / e2.value;
}

double bayes_factor(const TransDimProblem& p, int k1, int k2) {
  return bayes_factor(conditional_evidence(p, k1), conditional_evidence(p, k2));
}

double posterior_odds(const TransDimProblem& p, int k1, int k2) {
  const double prior2 = p.prior_probability(k2);
  if (prior2 == 0.0) fail(ErrorCode::InvalidArgument, "p_k gives hypothesis k=" + std::to_string(k2) + " zero mass");
  return bayes_factor(p, k1, k2) * (p.prior_probability(k1) / prior2);
}

const EvidenceValue& EvidenceReport::evidence(int k) const {
  for (const auto& e : per_k) {
    if (e.k == k) return e;
  }
  fail(ErrorCode::InvalidArgument, "no evidence for k=" + std::to_string(k));
}

const PairEntry& EvidenceReport::pair(int k1, int k2) const {
  for (const auto& e : pairs) {
    if (e.k1 == k1 && e.k2 == k2) return e;
  }
  fail(ErrorCode::InvalidArgument, "no pair entry for (" + std::to_string(k1) + ", " + std::to_string(k2) + ")");
}

EvidenceReport assemble_report(const TransDimProblem& p, std::vector<EvidenceValue> per_k, std::string method) {
  EvidenceReport rep;
  rep.per_k = std::move(per_k);
  rep.method = std::move(method);
  rep.total = total_evidence(p, rep.per_k);
  for (const auto& e : rep.per_k) {
    rep.posterior_k.push_back(rep.total.value > 0.0 ? e.value * p.prior_probability(e.k) / rep.total.value : 0.0);
    if (e.value == 0.0) rep.warnings.push_back("hypothesis k=" + std::to_string(e.k) + " excluded by data");
  }
  for (const auto& a : rep.per_k) {
    for (const auto& b : rep.per_k) {
      if (a.k == b.k) continue;
      PairEntry pe;
      pe.k1 = a.k;
      pe.k2 = b.k;
      pe.unit = a.unit / b.unit;
      const double prior2 = p.prior_probability(b.k);
      pe.prior_odds = prior2 > 0.0 ? p.prior_probability(a.k) / prior2 : 0.0;
      if (b.value != 0.0) {
        pe.bayes_factor = bayes_factor(a, b);
        if (prior2 > 0.0) pe.posterior_odds = *pe.bayes_factor * pe.prior_odds;
      }
      rep.pairs.push_back(pe);
    }
  }
  return rep;
}

EvidenceReport evidence_report(const TransDimProblem& p, double rel_tol) {
  const std::vector<int> ks = p.ks();
  auto per_k =
      parallel_map<EvidenceValue>(ks.size(), [&](std::size_t i) { return conditional_evidence(p, ks[i], rel_tol); });
  return assemble_report(p, std::move(per_k), "adaptive-quadrature");
}

RjTarget rj_target(const TransDimProblem& p) {
  const std::vector<int> ks = p.ks();
  if (ks.size() != 2 || p.model(1).prior.dim() + 1 != p.model(2).prior.dim()) {
    fail(ErrorCode::InvalidArgument, "rj chain needs models k=1 and k=2 with nested dimensions");
  }
  const TransDimModel& m1 = p.model(1);
  const TransDimModel& m2 = p.model(2);
  const std::size_t last = m2.prior.dim() - 1;
  RjTarget t;
  t.dim1 = m1.prior.dim();
  t.posterior1 = [&p](PointView x) { return p.posterior_kernel(1, x); };
  t.posterior2 = [&p](PointView x) { return p.posterior_kernel(2, x); };
  t.p_k1 = p.prior_probability(1);
  t.p_k2 = p.prior_probability(2);

  double width = 0.0;
  if (m2.prior.kind() == DensityKind::UniformBox) {
    const Interval a = m2.prior.support().axes[last];
    t.extra_prior = [a](double y) { return a.contains(y) ? 1.0 / a.length() : 0.0; };
    t.draw_extra = [a](CounterRng& rng) { return rng.uniform(a.lo, a.hi); };
  } else if (m2.prior.kind() == DensityKind::GaussianIid) {
    const double mu = m2.prior.gaussian()->mean[last];
    const double sigma = m2.prior.gaussian()->sigma;
    t.extra_prior = [mu, sigma](double y) {
      const double z = (y - mu) / sigma;
      return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * kPi));
    };
    t.draw_extra = [mu, sigma](CounterRng& rng) { return mu + sigma * rng.normal(); };
    width = sigma;
  } else {
    fail(ErrorCode::InvalidArgument, "rj chain needs a uniform-box or Gaussian-iid k=2 prior");
  }

  t.scale.clear();
  for (int k : {1, 2}) {
    const Box box = p.integration_box(k);
    double w = width;
    if (box.finite() && !box.empty()) {
      w = kInf;
      for (const auto& a : box.axes) w = std::min(w, a.length());
      w *= 0.25;
    }
    if (!(w > 0.0) || !std::isfinite(w)) w = 1.0;
    t.scale.push_back(w);
  }
  const Box b1 = p.integration_box(1);
  if (b1.finite() && !b1.empty()) {
    for (const auto& a : b1.axes) t.init.push_back(a.mid());
  } else if (m1.prior.gaussian()) {
    t.init = m1.prior.gaussian()->mean;
  } else {
    fail(ErrorCode::InvalidArgument, "rj chain cannot place an initial state");
  }
  t.init_k = 1;
  if (t.p_k1 == 0.0 || !(p.posterior_kernel(1, t.init) > 0.0)) {
    // Start at k=2 on the centre of its support instead.
    const Box b2 = p.integration_box(2);
    t.init.clear();
    if (b2.finite() && !b2.empty()) {
      for (const auto& a : b2.axes) t.init.push_back(a.mid());
    } else if (m2.prior.gaussian()) {
      t.init = m2.prior.gaussian()->mean;
    }
    t.init_k = 2;
  }
  return t;
}

ChainSample rj_mcmc(const TransDimProblem& p, std::size_t steps, std::uint64_t seed) {
  return rj_mcmc(rj_target(p), steps, seed);
}

MeanEstimate rj_k1_frequency(const ChainSample& chain) {
  std::vector<double> ind(chain.k.size());
  for (std::size_t i = 0; i < ind.size(); ++i) ind[i] = chain.k[i] == 1 ? 1.0 : 0.0;
  return batch_means(ind);
}

// Uniform example ------------------------------------------------------------

void UniformExampleConfig::validate() const {
  if (!(L > 0.0) || !std::isfinite(L)) fail(ErrorCode::InvalidArgument, "L must be positive");
  if (!(s_min < s_max) || !std::isfinite(s_min) || !std::isfinite(s_max)) {
    fail(ErrorCode::InvalidArgument, "s_min must be below s_max");
  }
  if (data.dim() != 2 || !data.finite()) fail(ErrorCode::InvalidArgument, "data box must be a finite 2-D box");
  if (!(width1() > 0.0) || !(width2() > 0.0)) fail(ErrorCode::EmptySupport, "empty box: data intervals need positive width");
  if (!(p_k[0] >= 0.0 && p_k[1] >= 0.0) || std::fabs(p_k[0] + p_k[1] - 1.0) > 1e-12) {
    fail(ErrorCode::InvalidArgument, "p_k must be a probability vector");
  }
}

std::string to_string(UniformVariant v) { return v == UniformVariant::Literal ? "literal" : "component"; }

double clipped_area(const Box& box, const std::vector<HalfPlane>& planes) {
  if (box.dim() != 2 || box.empty()) return 0.0;
  using P = std::array<double, 2>;
  const auto& x = box.axes[0];
  const auto& y = box.axes[1];
  std::vector<P> poly{{x.lo, y.lo}, {x.hi, y.lo}, {x.hi, y.hi}, {x.lo, y.hi}};
  for (const auto& h : planes) {
    std::vector<P> next;
    auto side = [&](const P& q) { return h.a1 * q[0] + h.a2 * q[1] - h.b; };
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const P& cur = poly[i];
      const P& nxt = poly[(i + 1) % poly.size()];
      const double sc = side(cur);
      const double sn = side(nxt);
      if (sc <= 0.0) next.push_back(cur);
      if ((sc < 0.0 && sn > 0.0) || (sc > 0.0 && sn < 0.0)) {
        const double t = sc / (sc - sn);
        next.push_back({cur[0] + t * (nxt[0] - cur[0]), cur[1] + t * (nxt[1] - cur[1])});
      }
    }
    poly = std::move(next);
    if (poly.size() < 3) return 0.0;
  }
  double twice = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const P& a = poly[i];
    const P& b = poly[(i + 1) % poly.size()];
    twice += a[0] * b[1] - b[0] * a[1];
  }
  return 0.5 * std::fabs(twice);
}

UniformGeometry uniform_geometry(const UniformExampleConfig& cfg, UniformVariant v) {
  cfg.validate();
  const double L = cfg.L;
  const Interval a = cfg.data.axes[0];
  const Interval b = v == UniformVariant::Literal ? cfg.data.axes[0] : cfg.data.axes[1];
  const Interval dh = cfg.d_hat();
  UniformGeometry g;
  g.k1_support = {dh.lo / (2.0 * L), dh.hi / (2.0 * L)};
  g.k2_constraints = {{L, L, a.hi}, {-L, -L, -a.lo}, {2.0 * L, 0.0, b.hi}, {-2.0 * L, 0.0, -b.lo}};
  const Interval s1{b.lo / (2.0 * L), b.hi / (2.0 * L)};
  g.k2_box = Box({s1, {a.lo / L - s1.hi, a.hi / L - s1.lo}});
  g.k2_area = clipped_area(g.k2_box, g.k2_constraints);
  g.k2_area_formula = v == UniformVariant::Literal ? cfg.width1() * cfg.width1() / (2.0 * L * L)
                                                   : cfg.width1() * cfg.width2() / (2.0 * L * L);
  return g;
}

TransDimProblem uniform_problem(const UniformExampleConfig& cfg, UniformVariant v) {
  const UniformGeometry g = uniform_geometry(cfg, v);
  const UnitSignature s = units::slowness();
  const Density data = Density::uniform_box(cfg.data, {units::second(), units::second()});
  const Interval range{cfg.s_min, cfg.s_max};

  TransDimModel m1{1, models::one_block(cfg.L), Density::uniform_box(Box({range}), {s}), {}, std::nullopt};
  if (!g.k1_support.empty()) m1.likelihood_box = Box({g.k1_support});
  else m1.likelihood_box = Box({Interval{1.0, 0.0}});

  TransDimModel m2{2, models::two_block(cfg.L), Density::uniform_box(Box({range, range}), {s, s}), {}, g.k2_box};
  if (v == UniformVariant::Literal) {
    const double inv = 1.0 / cfg.data_volume();
    const Interval a = cfg.data.axes[0];
    const double L = cfg.L;
    m2.likelihood_override = [inv, a, L](PointView x) {
      const double d1 = L * x[0] + L * x[1];
      const double d2 = 2.0 * L * x[0];
      return a.contains(d1) && a.contains(d2) ? inv : 0.0;
    };
  }
  return TransDimProblem({std::move(m1), std::move(m2)}, data, pk_from(cfg.p_k));
}

namespace {

bool inside(const Interval& inner, const Interval& outer) { return inner.lo >= outer.lo && inner.hi <= outer.hi; }

double k1_measure(const UniformExampleConfig& cfg, const UniformGeometry& g) {
  const Interval iv = intersect(g.k1_support, {cfg.s_min, cfg.s_max});
  return iv.empty() ? 0.0 : iv.length();
}

double k2_measure(const UniformExampleConfig& cfg, const UniformGeometry& g) {
  const Interval r{cfg.s_min, cfg.s_max};
  return clipped_area(intersect(g.k2_box, Box({r, r})), g.k2_constraints);
}

bool in_k2(const UniformGeometry& g, PointView s) {
  for (const auto& h : g.k2_constraints) {
    if (h.a1 * s[0] + h.a2 * s[1] > h.b) return false;
  }
  return true;
}

}  // namespace

bool uniform_regime_valid(const UniformExampleConfig& cfg, UniformVariant v) {
  const UniformGeometry g = uniform_geometry(cfg, v);
  const Interval r{cfg.s_min, cfg.s_max};
  const bool k1 = g.k1_support.empty() || inside(g.k1_support, r);
  return k1 && inside(g.k2_box.axes[0], r) && inside(g.k2_box.axes[1], r);
}

double uniform_bayes_factor_formula(const UniformExampleConfig& cfg, UniformVariant v) {
  cfg.validate();
  const Interval dh = cfg.d_hat();
  if (!(dh.length() > 0.0)) fail(ErrorCode::ExcludedByData, "hypothesis k=1 excluded by data: data intervals do not overlap");
  const double num = v == UniformVariant::Literal ? cfg.width1() * cfg.width1() : cfg.width1() * cfg.width2();
  return num / (cfg.L * (cfg.s_max - cfg.s_min) * dh.length());
}

UniformExampleReport uniform_example_report(const UniformExampleConfig& cfg, std::size_t mc_samples,
                                            std::uint64_t seed) {
  cfg.validate();
  UniformExampleReport rep;
  rep.cfg = cfg;
  const Interval dh = cfg.d_hat();
  if (!(dh.length() > 0.0)) {
    rep.warnings.push_back("data intervals do not intersect: the k=1 model is excluded by the data");
  }
  const double ds = cfg.s_max - cfg.s_min;
  const double vol = cfg.data_volume();

  auto run = [&](UniformVariant v, std::uint64_t stream) {
    UniformVariantReport out;
    out.variant = v;
    out.geometry = uniform_geometry(cfg, v);
    out.regime_valid = uniform_regime_valid(cfg, v);
    const TransDimProblem problem = uniform_problem(cfg, v);
    if (out.regime_valid) {
      out.regime = "prior support covers likelihood support";
      std::vector<EvidenceValue> ev(2);
      for (int k : {1, 2}) {
        const TransDimModel& m = problem.model(k);
        ev[k - 1].k = k;
        ev[k - 1].method = "closed-form";
        ev[k - 1].unit = problem.data_prior().unit() * m.prior.unit() * coordinate_product(m.prior.coordinate_units());
      }
      ev[0].value = std::max(0.0, dh.length()) / (2.0 * cfg.L * ds * vol);
      ev[1].value = out.geometry.k2_area_formula / (ds * ds * vol);
      out.evidence = assemble_report(problem, std::move(ev), "closed-form");
      if (dh.length() > 0.0) out.bf_formula = uniform_bayes_factor_formula(cfg, v);
    } else {
      out.regime = "truncated regime; analytic formulas invalid";
      out.evidence = evidence_report(problem);
    }
    const double len1 = k1_measure(cfg, out.geometry);
    if (len1 > 0.0) out.bf_exact = k2_measure(cfg, out.geometry) / (ds * len1);

    const UniformGeometry& g = out.geometry;
    try {
      out.k2_area_mc = mc_integrate([&](PointView s) { return in_k2(g, s) ? 1.0 : 0.0; }, g.k2_box, mc_samples,
                                    seed + 2 * stream);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SupportNotHit) throw;
      rep.warnings.push_back(to_string(v) + ": Monte Carlo missed the k=2 support");
    }
    if (dh.length() > 0.0) {
      const Interval hull{std::min(cfg.data.axes[0].lo, cfg.data.axes[1].lo) / (2.0 * cfg.L),
                          std::max(cfg.data.axes[0].hi, cfg.data.axes[1].hi) / (2.0 * cfg.L)};
      try {
        out.k1_length_mc = mc_integrate([&](PointView s) { return g.k1_support.contains(s[0]) ? 1.0 : 0.0; },
                                        Box({hull}), mc_samples, seed + 2 * stream + 1);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::SupportNotHit) throw;
        rep.warnings.push_back(to_string(v) + ": Monte Carlo missed the k=1 support");
      }
    }
    return out;
  };
  rep.literal = run(UniformVariant::Literal, 0);
  rep.component = run(UniformVariant::Component, 1);
  for (const auto* r : {&rep.literal, &rep.component}) {
    if (!r->regime_valid) rep.warnings.push_back(to_string(r->variant) + ": " + r->regime);
  }
  return rep;
}

double uniform_posterior_density(const UniformExampleConfig& cfg, UniformVariant v, int k, PointView s) {
  const UniformGeometry g = uniform_geometry(cfg, v);
  const Interval r{cfg.s_min, cfg.s_max};
  if (k == 1) {
    if (s.size() != 1) fail(ErrorCode::DimensionMismatch, "k=1 posterior takes one coordinate");
    const double len = k1_measure(cfg, g);
    if (!(len > 0.0)) fail(ErrorCode::ContradictoryInformation, "contradictory information: k=1 posterior is empty");
    return r.contains(s[0]) && g.k1_support.contains(s[0]) ? 1.0 / len : 0.0;
  }
  if (k == 2) {
    if (s.size() != 2) fail(ErrorCode::DimensionMismatch, "k=2 posterior takes two coordinates");
    const double area = k2_measure(cfg, g);
    if (!(area > 0.0)) fail(ErrorCode::ContradictoryInformation, "contradictory information: k=2 posterior is empty");
    return r.contains(s[0]) && r.contains(s[1]) && in_k2(g, s) ? 1.0 / area : 0.0;
  }
  fail(ErrorCode::InvalidArgument, "uniform example has k in {1, 2}");
}

FlipCertificate flip_certificate(const UniformExampleConfig& a, const UniformExampleConfig& b, UniformVariant v,
                                 std::size_t grid) {
  if (!(a.data == b.data) || a.L != b.L) fail(ErrorCode::InvalidArgument, "certificate needs the same data and L");
  if (grid < 2) fail(ErrorCode::InvalidArgument, "certificate grid needs at least two points per axis");
  const UniformGeometry g = uniform_geometry(a, v);
  FlipCertificate c;
  auto node = [grid](const Interval& iv, std::size_t i) {
    return iv.lo + iv.length() * static_cast<double>(i) / static_cast<double>(grid - 1);
  };
  if (!g.k1_support.empty()) {
    for (std::size_t i = 0; i < grid; ++i) {
      const double s[1] = {node(g.k1_support, i)};
      c.sup_k1 = std::max(c.sup_k1, std::fabs(uniform_posterior_density(a, v, 1, s) - uniform_posterior_density(b, v, 1, s)));
      ++c.points;
    }
  }
  for (std::size_t i = 0; i < grid; ++i) {
    for (std::size_t j = 0; j < grid; ++j) {
      const double s[2] = {node(g.k2_box.axes[0], i), node(g.k2_box.axes[1], j)};
      c.sup_k2 = std::max(c.sup_k2, std::fabs(uniform_posterior_density(a, v, 2, s) - uniform_posterior_density(b, v, 2, s)));
      ++c.points;
    }
  }
  c.verified = c.sup_k1 <= kCertificateTol && c.sup_k2 <= kCertificateTol;
  return c;
}

ParsimonyFlip parsimony_flip(const UniformExampleConfig& base, UniformVariant v) {
  base.validate();
  if (base.data.axes[0] == base.data.axes[1]) {
    fail(ErrorCode::InvalidArgument, "the flip construction needs non-identical observations");
  }
  if (!(base.d_hat().length() > 0.0)) fail(ErrorCode::ExcludedByData, "hypothesis k=1 excluded by data");
  if (!uniform_regime_valid(base, v)) {
    fail(ErrorCode::TruncatedRegime, "base prior does not cover the likelihood support");
  }
  const UniformGeometry g = uniform_geometry(base, v);
  UniformExampleConfig tight = base;
  tight.s_min = std::min({g.k1_support.lo, g.k2_box.axes[0].lo, g.k2_box.axes[1].lo});
  tight.s_max = std::max({g.k1_support.hi, g.k2_box.axes[0].hi, g.k2_box.axes[1].hi});
  const double bf_tight = uniform_bayes_factor_formula(tight, v);
  if (!(bf_tight > 1.0)) {
    fail(ErrorCode::NoRoomToWiden, "no prior range covering the likelihood support gives BF(2:1) > 1");
  }
  const double bf_base = uniform_bayes_factor_formula(base, v);
  ParsimonyFlip out;
  out.cfg_b = bf_base > 1.0 ? base : tight;
  if (bf_base < 1.0) {
    out.cfg_a = base;
  } else {
    // BF is inversely proportional to the range width.
    const double factor = 4.0 * bf_base;
    const double mid = 0.5 * (base.s_min + base.s_max);
    const double half = 0.5 * (base.s_max - base.s_min) * factor;
    out.cfg_a = base;
    out.cfg_a.s_min = mid - half;
    out.cfg_a.s_max = mid + half;
  }
  out.bf_a = uniform_bayes_factor_formula(out.cfg_a, v);
  out.bf_b = uniform_bayes_factor_formula(out.cfg_b, v);
  out.certificate = flip_certificate(out.cfg_a, out.cfg_b, v);
  return out;
}

// Gaussian example -----------------------------------------------------------

void GaussianExampleConfig::validate() const {
  if (!(sigma_d > 0.0) || !std::isfinite(sigma_d)) fail(ErrorCode::InvalidArgument, "sigma_d must be positive");
  if (!(sigma_s > 0.0) || !std::isfinite(sigma_s)) fail(ErrorCode::InvalidArgument, "sigma_s must be positive");
  if (!(L > 0.0) || !std::isfinite(L)) fail(ErrorCode::InvalidArgument, "L must be positive");
  if (!(p_k[0] >= 0.0 && p_k[1] >= 0.0) || std::fabs(p_k[0] + p_k[1] - 1.0) > 1e-12) {
    fail(ErrorCode::InvalidArgument, "p_k must be a probability vector");
  }
}

TransDimProblem gaussian_problem(const GaussianExampleConfig& cfg) {
  cfg.validate();
  const UnitSignature s = units::slowness();
  const Density data = Density::gaussian_iid({0.0, 0.0}, cfg.sigma_d, {units::second(), units::second()});
  TransDimModel m1{1, models::one_block(cfg.L), Density::gaussian_iid({0.0}, cfg.sigma_s, {s}), {}, std::nullopt};
  TransDimModel m2{2, models::two_block(cfg.L), Density::gaussian_iid({0.0, 0.0}, cfg.sigma_s, {s, s}), {},
                   std::nullopt};
  return TransDimProblem({std::move(m1), std::move(m2)}, data, pk_from(cfg.p_k));
}

double gaussian_evidence_formula(const GaussianExampleConfig& cfg, int k) {
  cfg.validate();
  const double d2 = cfg.sigma_d * cfg.sigma_d;
  // Only the product L sigma_s enters; at L = 1 they reduce to the unscaled forms.
  const double ls = cfg.L * cfg.sigma_s;
  const double s2 = ls * ls;
  if (k == 1) return 1.0 / (2.0 * kPi * cfg.sigma_d * std::sqrt(d2 + 8.0 * s2));
  if (k == 2) return 1.0 / (2.0 * kPi * std::sqrt(d2 * d2 + 6.0 * d2 * s2 + 4.0 * s2 * s2));
  fail(ErrorCode::InvalidArgument, "Gaussian example has k in {1, 2}");
}

double gaussian_bayes_factor_formula(double sigma_d, double sigma_s) {
  const double d2 = sigma_d * sigma_d;
  const double s2 = sigma_s * sigma_s;
  return sigma_d * std::sqrt((d2 + 8.0 * s2) / (d2 * d2 + 6.0 * d2 * s2 + 4.0 * s2 * s2));
}

GaussianExampleReport gaussian_example_report(const GaussianExampleConfig& cfg, double rel_tol) {
  GaussianExampleReport rep;
  rep.cfg = cfg;
  rep.evidence_formula = {gaussian_evidence_formula(cfg, 1), gaussian_evidence_formula(cfg, 2)};
  rep.bf_formula = gaussian_bayes_factor_formula(cfg.sigma_d, cfg.L * cfg.sigma_s);
  rep.quadrature = evidence_report(gaussian_problem(cfg), rel_tol);
  rep.bf_quadrature = *rep.quadrature.pair(2, 1).bayes_factor;
  rep.rel_error = std::fabs(rep.bf_quadrature / rep.bf_formula - 1.0);
  return rep;
}

int fig7_region(double bf) { return bf > 1.0 ? 1 : (bf < 1.0 ? -1 : 0); }

Fig7Map fig7_region_map(const std::vector<double>& sigma_d, const std::vector<double>& sigma_s) {
  if (sigma_d.size() < 2 || sigma_s.empty()) fail(ErrorCode::InvalidArgument, "fig7 grids need points");
  for (const auto* g : {&sigma_d, &sigma_s}) {
    for (std::size_t i = 0; i < g->size(); ++i) {
      if (!((*g)[i] > 0.0)) fail(ErrorCode::InvalidArgument, "fig7 grids must be positive");
      if (i > 0 && !((*g)[i] > (*g)[i - 1])) fail(ErrorCode::InvalidArgument, "fig7 grids must be increasing");
    }
  }
  Fig7Map map;
  map.sigma_d = sigma_d;
  map.sigma_s = sigma_s;
  map.bf.assign(sigma_d.size(), std::vector<double>(sigma_s.size()));
  for (std::size_t i = 0; i < sigma_d.size(); ++i) {
    for (std::size_t j = 0; j < sigma_s.size(); ++j) map.bf[i][j] = gaussian_bayes_factor_formula(sigma_d[i], sigma_s[j]);
  }
  for (std::size_t i = 1; i < sigma_d.size(); ++i) map.resolution = std::max(map.resolution, sigma_d[i] - sigma_d[i - 1]);
  for (std::size_t j = 0; j < sigma_s.size(); ++j) {
    for (std::size_t i = 0; i + 1 < sigma_d.size(); ++i) {
      const double f0 = map.bf[i][j] - 1.0;
      const double f1 = map.bf[i + 1][j] - 1.0;
      if (f0 == 0.0 || (f0 < 0.0) != (f1 < 0.0)) {
        const double t = f0 == 0.0 ? 0.0 : f0 / (f0 - f1);
        const double sd = sigma_d[i] + t * (sigma_d[i + 1] - sigma_d[i]);
        map.boundary.push_back({sigma_s[j], sd});
        map.max_boundary_deviation = std::max(map.max_boundary_deviation, std::fabs(sd - std::sqrt(2.0) * sigma_s[j]));
        break;
      }
    }
  }
  map.boundary_pass = !map.boundary.empty() && map.max_boundary_deviation <= map.resolution;
  return map;
}

// Unit audit -----------------------------------------------------------------

std::string DimensionedRatio::str() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", magnitude_);
  return std::string(buf) + " [" + unit_.str() + "]";
}

DimensionedValue likelihood_evidence(const TransDimProblem& p, int k, double rel_tol) {
  if (p.data_prior().improper()) {
    fail(ErrorCode::ImproperLikelihoodEvidence, "improper likelihood evidence: data prior is improper");
  }
  const TransDimModel& mod = p.model(k);
  DimensionedValue out;
  out.unit = p.data_prior().unit() * coordinate_product(mod.prior.coordinate_units());
  const Box box = p.integration_box(k);
  if (box.empty()) return out;
  const IntegralResult r =
      quad_integrate([&](PointView m) { return p.likelihood(k, m); }, box, evidence_options(mod, box, rel_tol));
  if (!std::isfinite(r.value) || (!r.converged && !box.finite())) {
    fail(ErrorCode::ImproperLikelihoodEvidence, "improper likelihood evidence for k=" + std::to_string(k));
  }
  out.value = r.value;
  out.error = r.error;
  return out;
}

DimensionedRatio likelihood_evidence_ratio(const TransDimProblem& p, int k1, int k2) {
  const DimensionedValue a = likelihood_evidence(p, k1);
  const DimensionedValue b = likelihood_evidence(p, k2);
  if (b.value == 0.0) fail(ErrorCode::ExcludedByData, "hypothesis k=" + std::to_string(k2) + " excluded by data");
  return DimensionedRatio(a.value / b.value, a.unit / b.unit);
}

int rank(const DimensionedRatio& ratio, int k1, int k2) {
  if (!ratio.dimensionless()) {
    fail(ErrorCode::DimensionedRatio, "refusing to rank hypotheses by a ratio with unit " + ratio.unit().str());
  }
  return ratio.magnitude_in_current_units() > 1.0 ? k1 : k2;
}

TransDimProblem rescale_model_coordinates(const TransDimProblem& p, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) fail(ErrorCode::InvalidArgument, "rescale factor must be positive");
  std::vector<TransDimModel> out;
  for (const auto& m : p.models()) {
    const std::size_t n = m.prior.dim();
    Density prior = m.prior;
    if (m.prior.kind() == DensityKind::GaussianIid) {
      Point mean = m.prior.gaussian()->mean;
      for (double& x : mean) x *= c;
      prior = Density::gaussian_iid(std::move(mean), c * m.prior.gaussian()->sigma, m.prior.coordinate_units());
    } else if (m.prior.kind() == DensityKind::UniformBox) {
      Box b = m.prior.support();
      for (auto& a : b.axes) a = {c * a.lo, c * a.hi};
      prior = Density::uniform_box(std::move(b), m.prior.coordinate_units());
    } else {
      prior = pushforward(m.prior, Diffeomorphism::affine(Point(n, c), Point(n, 0.0)));
    }
    auto shrink = [c](PointView x) {
      Point y(x.begin(), x.end());
      for (double& v : y) v /= c;
      return y;
    };
    const ForwardModel f = m.forward;
    std::optional<ForwardModel::Linear> lin = f.linear();
    if (lin) {
      for (double& v : lin->matrix) v /= c;
    }
    ForwardModel scaled(f.name(), f.m_dim(), f.d_dim(), [f, shrink](PointView x) { return f.apply(shrink(x)); },
                        f.m_units(), f.d_units(), lin);
    TransDimModel mm{m.k, std::move(scaled), std::move(prior), {}, std::nullopt};
    if (m.likelihood_override) {
      mm.likelihood_override = [o = m.likelihood_override, shrink](PointView x) { return o(shrink(x)); };
    }
    if (m.likelihood_box) {
      Box b = *m.likelihood_box;
      for (auto& a : b.axes) a = {c * a.lo, c * a.hi};
      mm.likelihood_box = std::move(b);
    }
    out.push_back(std::move(mm));
  }
  return TransDimProblem(std::move(out), p.data_prior(), p.p_k());
}

}  // namespace bpl
