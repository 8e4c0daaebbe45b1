#include <cmath>
#include <numbers>

#include "doctest.h"

#include "bpl/density.hpp"
#include "bpl/error.hpp"

using namespace bpl;

TEST_CASE("uniform and Gaussian evaluation") {
  const Density u = Density::uniform_box(Box::cube(2, 0.0, 1.0));
  CHECK(u({0.5, 0.5}) == 1.0);
  CHECK(u({2.0, 0.0}) == 0.0);
  const Density g = Density::gaussian_iid({0.0}, 1.0);
  CHECK(std::fabs(g({0.0}) - 1.0 / std::sqrt(2.0 * std::numbers::pi)) <= 1e-15);
  CHECK_THROWS_AS(u({0.5}), Error);
}

TEST_CASE("density units default to the reciprocal coordinate units") {
  const Density v = Density::uniform_box(Box::cube(2, 1.0, 5.0), {units::velocity(), units::velocity()});
  CHECK(v.unit() == units::slowness() * units::slowness());
  CHECK(Density::uniform_box(Box::cube(1, 0.0, 1.0)).unit().is_dimensionless());
}

TEST_CASE("normalize a constant on [0, 4]") {
  const NormalizedDensity n = normalize(Density::constant(Box({{0.0, 4.0}}), 2.0));
  CHECK(std::fabs(n.constant - 0.125) <= 1e-12);
  CHECK(std::fabs(n.density({1.0}) - 0.25) <= 1e-12);
}

TEST_CASE("normalize s^-4 on [1, 2] gives 24/7") {
  const Density p = Density::custom(Box({{1.0, 2.0}}), [](PointView s) { return std::pow(s[0], -4); });
  CHECK(std::fabs(normalize(p, 1e-12).constant - 24.0 / 7.0) <= 1e-10);
}

TEST_CASE("zero mass is contradictory information") {
  const Density z = Density::custom(Box({{0.0, 1.0}}), [](PointView) { return 0.0; });
  try {
    normalize(z);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ContradictoryInformation);
    CHECK(std::string(e.what()).find("contradictory information") != std::string::npos);
  }
}

TEST_CASE("improper densities cannot be normalized") {
  const Density flat = Density::constant(Box::unbounded(1), 1.0);
  CHECK(flat.improper());
  CHECK_THROWS_AS(normalize(flat), Error);
}

TEST_CASE("sampling is repeatable per seed and stays in the support") {
  const Density u = Density::uniform_box(Box({{1.0, 5.0}, {-2.0, 0.0}}));
  CounterRng a(42);
  CounterRng b(42);
  CounterRng c(43);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const Point x = u.sample(a);
    CHECK(x == u.sample(b));
    differs = differs || x != u.sample(c);
    CHECK(u(x) > 0.0);
  }
  CHECK(differs);
}

TEST_CASE("discrete distributions") {
  const DiscreteDistribution d = DiscreteDistribution::binary(1.0, 2.0, 0.3);
  CHECK(d.probability(1.0) == doctest::Approx(0.3));
  CHECK(d.probability(2.0) == doctest::Approx(0.7));
  CHECK(d.probability(3.0) == 0.0);
  CHECK_THROWS_AS(DiscreteDistribution({{1.0, 0.5}, {2.0, 0.6}}), Error);
  CounterRng rng(1);
  int ones = 0;
  for (int i = 0; i < 20000; ++i) ones += d.sample(rng) == 1.0;
  CHECK(std::fabs(ones / 20000.0 - 0.3) < 0.02);
}

TEST_CASE("products multiply factors") {
  const Density p = Density::product({Density::gaussian_iid({0.0}, 1.0), Density::uniform_box(Box({{0.0, 2.0}}))});
  CHECK(p.dim() == 2);
  CHECK(std::fabs(p({0.0, 1.0}) - 0.5 / std::sqrt(2.0 * std::numbers::pi)) <= 1e-15);
  CHECK(p({0.0, 3.0}) == 0.0);
}
