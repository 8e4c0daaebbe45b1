#include <cmath>

#include "doctest.h"

#include "bpl/diffeomorphism.hpp"
#include "bpl/error.hpp"
#include "bpl/forward.hpp"

using namespace bpl;

TEST_CASE("block models") {
  CHECK(models::one_block(1.0)({0.5}) == Point{1.0, 1.0});
  const Point d = models::two_block(1.0)({0.5, 0.7});
  CHECK(std::fabs(d[0] - 1.2) <= 1e-15);
  CHECK(std::fabs(d[1] - 1.0) <= 1e-15);
  CHECK(models::two_block(1.0)({0.5, 0.5}) == models::one_block(1.0)({0.5}));
  CHECK(models::linear(3.0)({2.0}) == Point{6.0});
  CHECK_THROWS_AS(models::linear(3.0)({1.0, 2.0}), Error);
}

TEST_CASE("tomography in both charts predicts the same data") {
  const ForwardModel gs = models::tomography_slowness();
  const ForwardModel gv = models::tomography_velocity();
  const Point v{2.0, 4.0};
  const Point a = gv(v);
  const Point b = gs({0.5, 0.25});
  CHECK(std::fabs(a[0] - b[0]) <= 1e-15);
  CHECK(std::fabs(a[1] - b[1]) <= 1e-15);
  CHECK(gs.units_consistent());
  CHECK(gs.d_units()[0] == units::second());
}

TEST_CASE("uniform priors restrict to a constant on the feasible set") {
  const Density data = Density::uniform_box(Box::cube(2, 0.5, 1.0));
  const Density prior = Density::uniform_box(Box::cube(2, 1.0, 5.0));
  const Density post = graph_restrict(data, prior, models::tomography_velocity());
  const double inside = post({3.0, 3.0});
  CHECK(inside > 0.0);
  CHECK(post({2.5, 4.5}) == inside);
  CHECK(post({1.2, 1.2}) == 0.0);  // predicts d2 = 2/1.2 outside the data box
}

TEST_CASE("a flat improper data prior returns the model prior") {
  const Density flat = Density::constant(Box::unbounded(2), 1.0);
  const Density prior = Density::gaussian_iid({0.0, 0.0}, 2.0);
  const Density post = graph_restrict(flat, prior, models::tomography_slowness());
  CHECK_FALSE(post.improper());
  for (const Point& m : {Point{0.1, 0.2}, Point{-1.0, 3.0}}) CHECK(post(m) == prior(m));
}

TEST_CASE("restriction commutes with reparameterization") {
  // Slowness posterior built directly agrees with the velocity posterior
  // carried to slowness by the reciprocal map.
  const Density data = Density::uniform_box(Box::cube(2, 0.5, 1.0));
  const Density prior_v = Density::uniform_box(Box::cube(2, 1.0, 5.0));
  const Diffeomorphism h = Diffeomorphism::reciprocal(2);
  const Density via_v = pushforward(graph_restrict(data, prior_v, models::tomography_velocity()), h);
  const Density via_s = graph_restrict(data, pushforward(prior_v, h), models::tomography_slowness());
  for (double s1 = 0.22; s1 < 0.99; s1 += 0.07) {
    for (double s2 = 0.22; s2 < 0.99; s2 += 0.07) CHECK(std::fabs(via_v({s1, s2}) - via_s({s1, s2})) <= 1e-12);
  }
}
