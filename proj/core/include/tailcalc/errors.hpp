#ifndef TAILCALC_ERRORS_HPP
#define TAILCALC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tailcalc {

// Base class for all toolkit errors. Each named condition the checkers can
// raise gets its own type so callers (and the CLI) can react per condition.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define TAILCALC_DEFINE_ERROR(NAME)                              \
  class NAME : public Error {                                    \
   public:                                                       \
    explicit NAME(const std::string& what) : Error(#NAME ": " + what) {} \
  }

TAILCALC_DEFINE_ERROR(InvalidArgument);
TAILCALC_DEFINE_ERROR(DimensionMismatch);
TAILCALC_DEFINE_ERROR(NotStationary);
TAILCALC_DEFINE_ERROR(NotNormalized);
TAILCALC_DEFINE_ERROR(NotCovariant);
TAILCALC_DEFINE_ERROR(TargetOutsideSupport);
TAILCALC_DEFINE_ERROR(TieDetected);
TAILCALC_DEFINE_ERROR(AnchorInvalid);
TAILCALC_DEFINE_ERROR(SpaceShiftFailed);
TAILCALC_DEFINE_ERROR(HInvalid);
TAILCALC_DEFINE_ERROR(WeightInvalid);
TAILCALC_DEFINE_ERROR(ZeroField);
TAILCALC_DEFINE_ERROR(PalmViolated);
TAILCALC_DEFINE_ERROR(DivergentEnergy);
TAILCALC_DEFINE_ERROR(UnknownIdentity);
TAILCALC_DEFINE_ERROR(InvalidSpec);
TAILCALC_DEFINE_ERROR(ConfigError);

#undef TAILCALC_DEFINE_ERROR

}  // namespace tailcalc

#endif  // TAILCALC_ERRORS_HPP
