#pragma once

#include <stdexcept>
#include <string>

namespace hitchin {

// Base class for all domain errors thrown by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define HITCHIN_DEFINE_ERROR(Name)                        \
  struct Name : Error {                                   \
    explicit Name(const std::string& msg) : Error(#Name ": " + msg) {} \
  }

HITCHIN_DEFINE_ERROR(RankDeficient);
HITCHIN_DEFINE_ERROR(DimensionOverflow);
HITCHIN_DEFINE_ERROR(MixedAmbient);
HITCHIN_DEFINE_ERROR(BallTooLarge);
HITCHIN_DEFINE_ERROR(NotUnimodular);
HITCHIN_DEFINE_ERROR(NotLoxodromic);
HITCHIN_DEFINE_ERROR(ComplexSpectrum);
HITCHIN_DEFINE_ERROR(DegenerateGap);
HITCHIN_DEFINE_ERROR(NotHyperbolic);
HITCHIN_DEFINE_ERROR(InsufficientSamples);
HITCHIN_DEFINE_ERROR(DimensionMismatch);
HITCHIN_DEFINE_ERROR(DegenerateSum);
HITCHIN_DEFINE_ERROR(TooFewWords);
HITCHIN_DEFINE_ERROR(DegeneratePairing);
HITCHIN_DEFINE_ERROR(CrossratioMismatch);
HITCHIN_DEFINE_ERROR(StepTooLarge);
HITCHIN_DEFINE_ERROR(MissingScene);
HITCHIN_DEFINE_ERROR(ConfigError);

#undef HITCHIN_DEFINE_ERROR

}  // namespace hitchin
