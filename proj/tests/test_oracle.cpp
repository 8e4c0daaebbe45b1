#include <cmath>
#include <numbers>

#include "doctest.h"

#include "bpl/conditioning.hpp"
#include "bpl/error.hpp"
#include "bpl/oracle.hpp"
#include "bpl/transdim.hpp"

using namespace bpl;

TEST_CASE("Monte Carlo is repeatable per seed") {
  auto f = [](PointView x) { return x[0] * x[0]; };
  const Box b({{0.0, 1.0}});
  const IntegralResult a = mc_integrate(f, b, 20000, 5);
  const IntegralResult c = mc_integrate(f, b, 20000, 5);
  const IntegralResult d = mc_integrate(f, b, 20000, 6);
  CHECK(a.value == c.value);
  CHECK(a.error == c.error);
  CHECK(a.value != d.value);
  CHECK(std::fabs(a.value - 1.0 / 3.0) <= 3.0 * a.error);
}

TEST_CASE("Monte Carlo preconditions") {
  const Box b({{0.0, 1.0}});
  CHECK_THROWS_AS(mc_integrate([](PointView) { return 1.0; }, b, 999, 1), Error);
  try {
    mc_integrate([](PointView x) { return x[0] > 2.0 ? 1.0 : 0.0; }, b, 5000, 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SupportNotHit);
  }
}

TEST_CASE("Metropolis reproduces the Borel velocity posterior marginal") {
  const BorelModels m = borel_models({});
  const Density& post = m.velocity_posterior;
  const ChainSample chain = metropolis([&](PointView v) { return post(v); }, {3.0, 3.0}, 400000, 0.6, 8);
  // v1 in [2, 4]; 1/v2 ranges over [max(0.2, 0.5 - 1/v1), 1 - 1/v1].
  auto width = [](double v1) { return 1.0 / std::max(0.2, 0.5 - 1.0 / v1) - 1.0 / (1.0 - 1.0 / v1); };
  constexpr int kBins = 8;
  double mass[kBins];
  double total = 0.0;
  for (int b = 0; b < kBins; ++b) {
    const double lo = 2.0 + 2.0 * b / kBins;
    const double h = 2.0 / kBins / 2000.0;
    double s = 0.0;
    for (int i = 0; i < 2000; ++i) s += width(lo + (i + 0.5) * h) * h;
    mass[b] = s;
    total += s;
  }
  for (int b = 0; b < kBins; ++b) {
    std::vector<double> hit(chain.size());
    for (std::size_t i = 0; i < chain.size(); ++i) {
      const double v1 = chain.point(i)[0];
      hit[i] = v1 >= 2.0 + 2.0 * b / kBins && v1 < 2.0 + 2.0 * (b + 1) / kBins ? 1.0 : 0.0;
    }
    const MeanEstimate e = batch_means(hit);
    CHECK(std::fabs(e.mean - mass[b] / total) <= 3.0 * e.standard_error);
  }
}

TEST_CASE("Metropolis rejects bad starts and stuck chains") {
  CHECK_THROWS_AS(metropolis([](PointView x) { return x[0] > 0.0 ? 1.0 : 0.0; }, {-1.0}, 10, 0.1, 1), Error);
  try {
    metropolis([](PointView x) { return std::fabs(x[0]) < 1e-12 ? 1.0 : 0.0; }, {0.0}, 20000, 1.0, 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StuckChain);
  }
}

TEST_CASE("reversible-jump toy kernel satisfies detailed balance") {
  for (const RjToy& toy : {RjToy{}, RjToy{0.7, 0.4, 1.3, 0.35, 0.45, 0.5}, RjToy{2.0, 0.1, 5.0, 0.8, 0.2, 0.3}}) {
    const auto P = rj_toy_transition(toy);
    const auto pi = rj_toy_stationary(toy);
    for (int i = 0; i < 3; ++i) {
      double row = 0.0;
      for (int j = 0; j < 3; ++j) {
        row += P[i][j];
        CHECK(std::fabs(pi[i] * P[i][j] - pi[j] * P[j][i]) <= 1e-10);
      }
      CHECK(std::fabs(row - 1.0) <= 1e-15);
    }
  }
}

TEST_CASE("a chain with p_k = (1, 0) never visits k = 2") {
  GaussianExampleConfig c;
  c.p_k = {1.0, 0.0};
  const ChainSample chain = rj_mcmc(gaussian_problem(c), 20000, 4);
  CHECK(chain.frequency(2) == 0.0);
  CHECK(chain.moves.at("birth").accepted == 0);
}

TEST_CASE("reversible-jump chains are seed-deterministic") {
  const TransDimProblem p = gaussian_problem({});
  const ChainSample a = rj_mcmc(p, 5000, 9);
  const ChainSample b = rj_mcmc(p, 5000, 9);
  CHECK(a.k == b.k);
  CHECK(a.values == b.values);
}

TEST_CASE("reversible-jump chain on the Gaussian example") {
  const MeanEstimate e = rj_k1_frequency(rj_mcmc(gaussian_problem({}), 200000, 3));
  const double b = std::sqrt(9.0 / 11.0);
  CHECK(std::fabs(e.mean - 1.0 / (1.0 + b)) <= 3.0 * e.standard_error);
}
