#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace bpl {

/// Exact rational number with normalized sign and lowest terms.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend Rational operator+(Rational a, Rational b);
  friend Rational operator-(Rational a) { return Rational(-a.num_, a.den_); }
  friend Rational operator-(Rational a, Rational b) { return a + (-b); }
  friend Rational operator*(Rational a, Rational b);
  friend bool operator==(const Rational&, const Rational&) = default;

  std::string str() const;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Rational exponents over named base units. The empty map is the
/// dimensionless signature; zero exponents are never stored.
class UnitSignature {
 public:
  UnitSignature() = default;

  static UnitSignature dimensionless() { return {}; }
  static UnitSignature base(const std::string& name, Rational power = 1);

  /// Parses "meter", "second/meter", "meter^2*second^-1", "1".
  static UnitSignature parse(std::string_view text);

  const std::map<std::string, Rational>& exponents() const { return exponents_; }
  bool is_dimensionless() const { return exponents_.empty(); }
  Rational exponent(const std::string& name) const;

  UnitSignature pow(Rational p) const;
  UnitSignature reciprocal() const { return pow(Rational(-1)); }

  friend UnitSignature operator*(const UnitSignature& a, const UnitSignature& b);
  friend UnitSignature operator/(const UnitSignature& a, const UnitSignature& b) {
    return a * b.reciprocal();
  }
  friend bool operator==(const UnitSignature&, const UnitSignature&) = default;

  /// Canonical text, e.g. "meter^-1*second". Dimensionless prints as "1".
  std::string str() const;

 private:
  void set(const std::string& name, Rational power);

  std::map<std::string, Rational> exponents_;
};

namespace units {
inline UnitSignature second() { return UnitSignature::base("second"); }
inline UnitSignature meter() { return UnitSignature::base("meter"); }
inline UnitSignature slowness() { return second() / meter(); }
inline UnitSignature velocity() { return meter() / second(); }
}  // namespace units

}  // namespace bpl
