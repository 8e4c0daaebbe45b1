#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bpl {

enum class ErrorCode {
  DimensionMismatch,
  InvalidArgument,
  ContradictoryInformation,
  Divergent,
  Singular,
  CurveMissesSupport,
  SupportTooSmall,
  NoStableLimit,
  SlabMassZero,
  ExcludedByData,
  SupportNotHit,
  ZeroProbabilityInit,
  StuckChain,
  TruncatedRegime,
  NoRoomToWiden,
  ImproperLikelihoodEvidence,
  DimensionedRatio,
  IntegrandVanishes,
  EmptySupport,
};

std::string_view to_string(ErrorCode code);

/// Every failure in the library surfaces as this exception; `code()` lets
/// callers (the CLI in particular) map failures to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace bpl
