#include <cmath>
#include <random>

#include "doctest.h"

#include "bpl/error.hpp"
#include "bpl/units.hpp"

using namespace bpl;

TEST_CASE("rational arithmetic reduces to lowest terms") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(1, -3) == Rational(-1, 3));
  CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
  CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
  CHECK((Rational(1, 2) - Rational(1, 2)).is_zero());
  CHECK_THROWS_AS(Rational(1, 0), Error);
}

TEST_CASE("unit signatures parse and print canonically") {
  CHECK(UnitSignature::parse("second/meter") == units::slowness());
  CHECK(UnitSignature::parse("meter^-1*second") == units::slowness());
  CHECK(units::slowness().str() == "meter^-1*second");
  CHECK(UnitSignature::parse("1").is_dimensionless());
  CHECK(UnitSignature::dimensionless().str() == "1");
  CHECK(UnitSignature::parse("meter^(1/2)").exponent("meter") == Rational(1, 2));
  CHECK_THROWS_AS(UnitSignature::parse("meter^"), Error);
}

TEST_CASE("slowness times velocity is dimensionless") {
  CHECK((units::slowness() * units::velocity()).is_dimensionless());
  CHECK(units::velocity().reciprocal() == units::slowness());
  CHECK(units::second().pow(Rational(-2)).exponent("second") == Rational(-2));
}

TEST_CASE("property: random signatures form a group under multiplication") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> e(-6, 6);
  std::uniform_int_distribution<int> d(1, 4);
  const char* names[] = {"meter", "second", "kilogram"};
  for (int trial = 0; trial < 200; ++trial) {
    UnitSignature a;
    UnitSignature b;
    for (const char* n : names) {
      a = a * UnitSignature::base(n, Rational(e(rng), d(rng)));
      b = b * UnitSignature::base(n, Rational(e(rng), d(rng)));
    }
    CHECK((a * b) / b == a);
    CHECK((a * a.reciprocal()).is_dimensionless());
    CHECK(UnitSignature::parse(a.str()) == a);
    CHECK(a * b == b * a);
  }
}
