#include "bpl/units.hpp"

#include <cctype>
#include <numeric>

#include "bpl/error.hpp"

namespace bpl {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "dimension mismatch";
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::ContradictoryInformation: return "contradictory information";
    case ErrorCode::Divergent: return "divergent integral";
    case ErrorCode::Singular: return "singular point";
    case ErrorCode::CurveMissesSupport: return "curve misses support";
    case ErrorCode::SupportTooSmall: return "support too small to fit exponent";
    case ErrorCode::NoStableLimit: return "no stable limit";
    case ErrorCode::SlabMassZero: return "slab mass zero";
    case ErrorCode::ExcludedByData: return "hypothesis excluded by data";
    case ErrorCode::SupportNotHit: return "support not hit";
    case ErrorCode::ZeroProbabilityInit: return "zero-probability init";
    case ErrorCode::StuckChain: return "stuck chain";
    case ErrorCode::TruncatedRegime: return "truncated regime; analytic formulas invalid";
    case ErrorCode::NoRoomToWiden: return "no room to widen prior";
    case ErrorCode::ImproperLikelihoodEvidence: return "improper likelihood evidence";
    case ErrorCode::DimensionedRatio: return "dimensioned ratio";
    case ErrorCode::IntegrandVanishes: return "integrand vanishes";
    case ErrorCode::EmptySupport: return "empty support";
  }
  return "unknown";
}

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) fail(ErrorCode::InvalidArgument, "rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  num_ = g == 0 ? 0 : num / g;
  den_ = g == 0 ? 1 : den / g;
}

Rational operator+(Rational a, Rational b) {
  const std::int64_t l = std::lcm(a.den_, b.den_);
  return Rational(a.num_ * (l / a.den_) + b.num_ * (l / b.den_), l);
}

Rational operator*(Rational a, Rational b) {
  return Rational(a.num_ * b.num_, a.den_ * b.den_);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return "(" + std::to_string(num_) + "/" + std::to_string(den_) + ")";
}

UnitSignature UnitSignature::base(const std::string& name, Rational power) {
  UnitSignature u;
  u.set(name, power);
  return u;
}

void UnitSignature::set(const std::string& name, Rational power) {
  if (power.is_zero()) {
    exponents_.erase(name);
  } else {
    exponents_[name] = power;
  }
}

Rational UnitSignature::exponent(const std::string& name) const {
  const auto it = exponents_.find(name);
  return it == exponents_.end() ? Rational(0) : it->second;
}

UnitSignature UnitSignature::pow(Rational p) const {
  UnitSignature out;
  for (const auto& [name, e] : exponents_) out.set(name, e * p);
  return out;
}

UnitSignature operator*(const UnitSignature& a, const UnitSignature& b) {
  UnitSignature out = a;
  for (const auto& [name, e] : b.exponents_) out.set(name, out.exponent(name) + e);
  return out;
}

std::string UnitSignature::str() const {
  if (exponents_.empty()) return "1";
  std::string out;
  for (const auto& [name, e] : exponents_) {
    if (!out.empty()) out += "*";
    out += name;
    if (!(e == Rational(1))) out += "^" + e.str();
  }
  return out;
}

namespace {

Rational parse_exponent(std::string_view text) {
  std::string s(text);
  if (!s.empty() && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
  try {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(std::stoll(s));
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  } catch (const std::exception&) {
    fail(ErrorCode::InvalidArgument, "bad unit exponent '" + std::string(text) + "'");
  }
}

UnitSignature parse_factor(std::string_view text) {
  const auto caret = text.find('^');
  std::string name(text.substr(0, caret));
  if (name.empty()) fail(ErrorCode::InvalidArgument, "empty unit name");
  for (char c : name) {
    if (!std::isalpha(static_cast<unsigned char>(c)) && c != '_') {
      fail(ErrorCode::InvalidArgument, "bad unit name '" + name + "'");
    }
  }
  const Rational p = caret == std::string_view::npos ? Rational(1) : parse_exponent(text.substr(caret + 1));
  return UnitSignature::base(name, p);
}

}  // namespace

UnitSignature UnitSignature::parse(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  if (s.empty() || s == "1") return {};

  // Tokens separated by '*' or '/'; '/' inverts the following factor only.
  // Parentheses are only legal inside exponents, so skip over them.
  UnitSignature out;
  bool invert = false;
  std::size_t start = 0;
  int depth = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    const bool end = i == s.size();
    if (!end && s[i] == '(') ++depth;
    if (!end && s[i] == ')') --depth;
    if (end || (depth == 0 && (s[i] == '*' || s[i] == '/'))) {
      const std::string_view tok(s.data() + start, i - start);
      if (tok != "1") {
        const UnitSignature f = parse_factor(tok);
        out = invert ? out / f : out * f;
      }
      if (!end) invert = s[i] == '/';
      start = i + 1;
    }
  }
  return out;
}

}  // namespace bpl
