#include "bpl/regression.hpp"

#include <cmath>
#include <numbers>

#include "bpl/conditioning.hpp"
#include "bpl/density.hpp"
#include "bpl/diffeomorphism.hpp"
#include "bpl/hierarchical.hpp"
#include "bpl/oracle.hpp"
#include "bpl/transdim.hpp"

namespace bpl {

namespace {

constexpr double kPi = std::numbers::pi;

NamedIntegral item(std::string name, IntegrandND f, Box box, Box mc_box, double truth, double tol = 1e-9) {
  NamedIntegral out;
  out.name = std::move(name);
  out.f = std::move(f);
  out.box = std::move(box);
  out.mc_box = std::move(mc_box);
  out.truth = truth;
  out.quad_rel_tol = tol;
  out.options.rel_tol = tol * 0.01;
  return out;
}

NamedIntegral evidence_item(std::string name, std::shared_ptr<const TransDimProblem> p, int k, double truth) {
  const Box box = p->integration_box(k);
  NamedIntegral out = item(
      std::move(name), [p, k](PointView m) { return p->posterior_kernel(k, m); }, box, box.finite() ? box : Box::cube(box.dim(), -12.0, 12.0), truth);
  if (box.finite()) out.options.locate_support = 257;
  return out;
}

}  // namespace

std::vector<NamedIntegral> regression_integrals() {
  std::vector<NamedIntegral> out;
  const Box unit1 = Box::cube(1, 0.0, 1.0);
  const Box real1 = Box::unbounded(1);
  const Box wide1 = Box::cube(1, -12.0, 12.0);

  out.push_back(item("identity-on-unit-interval", [](PointView x) { return x[0]; }, unit1, unit1, 0.5));
  out.push_back(item("product-on-unit-cube", [](PointView x) { return x[0] * x[1] * x[2]; }, Box::cube(3, 0.0, 1.0),
                     Box::cube(3, 0.0, 1.0), 0.125));
  out.push_back(item("standard-normal-mass", [](PointView x) { return std::exp(-0.5 * x[0] * x[0]) / std::sqrt(2.0 * kPi); },
                     real1, wide1, 1.0));
  out.push_back(item("gaussian-kernel-nine", [](PointView x) { return std::exp(-4.5 * x[0] * x[0]); }, real1, wide1,
                     std::sqrt(2.0 * kPi) / 3.0));
  out.push_back(item("inverse-fourth-power", [](PointView x) { return std::pow(x[0], -4.0); }, Box::cube(1, 1.0, 2.0),
                     Box::cube(1, 1.0, 2.0), 7.0 / 24.0));

  {
    const Density q = pushforward(Density::uniform_box(Box::cube(1, 1.0, 2.0)), Diffeomorphism::reciprocal(1));
    out.push_back(item("reciprocal-pushforward-1d-mass", [q](PointView s) { return q(s); }, Box::cube(1, 0.5, 1.0),
                       Box::cube(1, 0.5, 1.0), 1.0));
  }
  {
    const Density q = pushforward(Density::uniform_box(Box::cube(2, 1.0, 5.0)), Diffeomorphism::reciprocal(2));
    out.push_back(item("reciprocal-pushforward-2d-mass", [q](PointView s) { return q(s); }, Box::cube(2, 0.2, 1.0),
                       Box::cube(2, 0.2, 1.0), 1.0));
  }
  {
    const BorelModels m = borel_models({});
    const Curve cv = m.velocity_diagonal;
    const Density pv = m.velocity_posterior;
    out.push_back(item("velocity-diagonal-restriction", [pv, cv](PointView t) { return pv(cv(t[0])); },
                       Box({cv.range}), Box({cv.range}), 0.125));
    const Curve cs = m.slowness_diagonal;
    const Density ps = m.slowness_posterior;
    out.push_back(item("slowness-diagonal-restriction", [ps, cs](PointView t) { return ps(cs(t[0])); },
                       Box({cs.range}), Box({cs.range}), 7.0 / 6.0));
    for (auto& it : {&out[out.size() - 2], &out.back()}) it->options.locate_support = 4097;
  }

  const HierConfig hc;
  for (double l : {1.0, 2.0}) {
    for (double d : {1.0, 2.0}) {
      const double truth = *closed_form_cell(hc, l, d);
      out.push_back(item("hierarchical-cell-" + std::to_string(static_cast<int>(l)) + "-" + std::to_string(static_cast<int>(d)),
                         [hc, l, d](PointView m) { return posterior_unnormalized(hc, m[0], l, d); }, real1,
                         Box::cube(1, -20.0, 20.0), truth));
    }
  }
  {
    const double lambda = std::sqrt(3.0);
    auto normal = [](double x, double s) { return std::exp(-0.5 * x * x / (s * s)) / (s * std::sqrt(2.0 * kPi)); };
    out.push_back(item("misfit-integrated-posterior", [=](PointView m) { return normal(2.0 - m[0], lambda) * normal(m[0], 1.0); },
                       real1, wide1, normal(2.0, 2.0)));
  }

  for (auto [sd, ss] : {std::pair{1.0, 1.0}, std::pair{2.0, 1.0}}) {
    GaussianExampleConfig g;
    g.sigma_d = sd;
    g.sigma_s = ss;
    auto p = std::make_shared<const TransDimProblem>(gaussian_problem(g));
    const std::string tag = "gaussian-evidence-sd" + std::to_string(static_cast<int>(sd));
    out.push_back(evidence_item(tag + "-k1", p, 1, gaussian_evidence_formula(g, 1)));
    out.push_back(evidence_item(tag + "-k2", p, 2, gaussian_evidence_formula(g, 2)));
  }

  const UniformExampleConfig uc;
  for (UniformVariant v : {UniformVariant::Literal, UniformVariant::Component}) {
    auto p = std::make_shared<const TransDimProblem>(uniform_problem(uc, v));
    const UniformGeometry g = uniform_geometry(uc, v);
    const double ds = uc.s_max - uc.s_min;
    if (v == UniformVariant::Literal) {
      out.push_back(evidence_item("uniform-evidence-k1", p, 1, uc.d_hat().length() / (2.0 * uc.L * ds * uc.data_volume())));
    }
    out.push_back(evidence_item("uniform-evidence-k2-" + to_string(v), p, 2, g.k2_area_formula / (ds * ds * uc.data_volume())));
    out.push_back(item(
        "uniform-support-area-" + to_string(v),
        [g](PointView s) {
          for (const auto& h : g.k2_constraints) {
            if (h.a1 * s[0] + h.a2 * s[1] > h.b) return 0.0;
          }
          return 1.0;
        },
        g.k2_box, g.k2_box, g.k2_area_formula));
    out.back().options.locate_support = 257;
  }
  {
    auto p = std::make_shared<const TransDimProblem>(uniform_problem(uc, UniformVariant::Literal));
    const Box box = p->integration_box(1);
    out.push_back(item("uniform-likelihood-evidence-k1", [p](PointView m) { return p->likelihood(1, m); }, box, box,
                       uc.d_hat().length() / (2.0 * uc.L * uc.data_volume())));
    out.back().options.locate_support = 257;
  }
  return out;
}

RegressionRow run_regression(const NamedIntegral& it, bool with_mc, std::size_t mc_samples, std::uint64_t seed) {
  RegressionRow row;
  row.name = it.name;
  row.truth = it.truth;
  row.quad = quad_integrate(it.f, it.box, it.options);
  row.quad_rel_error = std::fabs(row.quad.value - it.truth) / std::fabs(it.truth);
  row.quad_pass = row.quad.converged && row.quad_rel_error <= it.quad_rel_tol;
  if (with_mc) {
    row.mc_run = true;
    row.mc = mc_integrate(it.f, it.mc_box, mc_samples, seed);
    const double se = std::hypot(row.mc.error, row.quad.error);
    row.mc_z = se > 0.0 ? std::fabs(row.mc.value - row.quad.value) / se : (row.mc.value == row.quad.value ? 0.0 : kInf);
    row.mc_pass = row.mc_z <= 3.0;
  }
  return row;
}

}  // namespace bpl
