#include <cmath>

#include "doctest.h"

#include "bpl/config.hpp"
#include "bpl/error.hpp"

using namespace bpl;

TEST_CASE("densities from JSON") {
  const Density u = density_from_json(Json::parse(R"({"kind": "uniform-box", "bounds": [[0, 2], [1, 3]],
                                                      "units": ["meter", "second"]})"));
  CHECK(u({1.0, 2.0}) == 0.25);
  CHECK(u.coordinate_units()[1] == units::second());
  const Density g = density_from_json(Json::parse(R"({"kind": "gaussian-iid", "mean": [1], "sigma": 2})"));
  CHECK(std::fabs(g({1.0}) - 1.0 / (2.0 * std::sqrt(2.0 * M_PI))) <= 1e-15);
  const Density p = density_from_json(Json::parse(R"({"kind": "pushforward",
      "base": {"kind": "uniform-box", "bounds": [[1, 2]]}, "map": {"kind": "reciprocal", "dim": 1}})"));
  CHECK(std::fabs(p({0.8}) - 1.0 / 0.64) <= 1e-12);
  const Density c = density_from_json(Json::parse(R"({"kind": "constant", "bounds": [[null, "inf"]], "value": 1})"));
  CHECK(c.improper());
}

TEST_CASE("forward models and maps from JSON") {
  const ForwardModel f = forward_from_json(Json::parse(R"({"kind": "two-block", "L": 2})"));
  CHECK(f({0.5, 0.7}) == Point{2.4, 2.0});
  const Diffeomorphism h = diffeomorphism_from_json(Json::parse(R"({"kind": "compose", "maps": [
      {"kind": "reciprocal", "dim": 1}, {"kind": "affine", "scale": [3], "shift": [1]}]})"));
  CHECK(std::fabs(h({2.0})[0] - 2.5) <= 1e-15);
  const DiscreteDistribution d = discrete_from_json(Json::parse("[[1, 0.25], [2, 0.75]]"));
  CHECK(d.probability(2.0) == 0.75);
}

TEST_CASE("config errors name the problem") {
  CHECK_THROWS_WITH_AS(density_from_json(Json::parse(R"({"kind": "cauchy"})")), doctest::Contains("config"), Error);
  CHECK_THROWS_AS(density_from_json(Json::parse(R"({"kind": "uniform-box"})")), Error);
  CHECK_THROWS_AS(box_from_json(Json::parse(R"([[0]])")), Error);
  CHECK_THROWS_AS(unit_from_json(Json::parse("3")), Error);
  CHECK_THROWS_AS(forward_from_json(Json::parse(R"({"kind": "linear"})")), Error);
}

TEST_CASE("boxes and units round-trip through JSON") {
  const Box b({{0.0, kInf}, {-1.0, 2.0}});
  CHECK(box_from_json(to_json(b)) == b);
  CHECK(unit_from_json(to_json(units::slowness())) == units::slowness());
}
