#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dstable {

enum class Errc {
  AlphaOutOfRange,
  GammaSignViolation,
  DeltaBelowAlphaGamma,
  PoissonConventionViolation,
  RhoOutOfRange,
  DegenerateDistribution,
  DeltaLimViolation,
  NoScaleForDegenerate,
  DomainError,
  InvalidTranslation,
  AlphaMismatch,
  NotSelfDecomposableAtRho,
  QuadratureInsufficiency,
  IndexBeyondTable,
  QuantileBeyondTable,
  InternalConsistency,
};

constexpr std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::AlphaOutOfRange: return "AlphaOutOfRange";
    case Errc::GammaSignViolation: return "GammaSignViolation";
    case Errc::DeltaBelowAlphaGamma: return "DeltaBelowAlphaGamma";
    case Errc::PoissonConventionViolation: return "PoissonConventionViolation";
    case Errc::RhoOutOfRange: return "RhoOutOfRange";
    case Errc::DegenerateDistribution: return "DegenerateDistribution";
    case Errc::DeltaLimViolation: return "DeltaLimViolation";
    case Errc::NoScaleForDegenerate: return "NoScaleForDegenerate";
    case Errc::DomainError: return "DomainError";
    case Errc::InvalidTranslation: return "InvalidTranslation";
    case Errc::AlphaMismatch: return "AlphaMismatch";
    case Errc::NotSelfDecomposableAtRho: return "NotSelfDecomposableAtRho";
    case Errc::QuadratureInsufficiency: return "QuadratureInsufficiency";
    case Errc::IndexBeyondTable: return "IndexBeyondTable";
    case Errc::QuantileBeyondTable: return "QuantileBeyondTable";
    case Errc::InternalConsistency: return "InternalConsistency";
  }
  return "Unknown";
}

// Every rejection in the library is an Error carrying the violated
// constraint as a code; what() holds the human-readable detail.
class Error : public std::invalid_argument {
 public:
  Error(Errc code, const std::string& detail)
      : std::invalid_argument(std::string(errc_name(code)) + ": " + detail),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace dstable
