#pragma once

#include <stdexcept>
#include <string>

namespace poswalk {

// Base for every guard the library raises on purpose. The kind string is
// stable and machine-checkable; the CLI maps any Error to exit code 3.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define POSWALK_DEFINE_ERROR(NAME)                       \
  class NAME final : public Error {                      \
   public:                                               \
    explicit NAME(const std::string& what)               \
        : Error(#NAME, what) {}                          \
  };

POSWALK_DEFINE_ERROR(PeriodicSupport)
POSWALK_DEFINE_ERROR(ProbabilityMassError)
POSWALK_DEFINE_ERROR(DegenerateLaw)
POSWALK_DEFINE_ERROR(UnsupportedAlpha)
POSWALK_DEFINE_ERROR(TruncationExceeded)
POSWALK_DEFINE_ERROR(DefectTooLarge)
POSWALK_DEFINE_ERROR(RenewalRangeExceeded)
POSWALK_DEFINE_ERROR(ZeroBridgeProbability)
POSWALK_DEFINE_ERROR(ExplosionGuard)
POSWALK_DEFINE_ERROR(GridTooCoarse)
POSWALK_DEFINE_ERROR(NonFinite)
POSWALK_DEFINE_ERROR(DomainError)

#undef POSWALK_DEFINE_ERROR

}  // namespace poswalk
