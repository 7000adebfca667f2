#pragma once

#include <stdexcept>
#include <string>

namespace mixedfrac {

/// Base of every library error; `code()` is the stable name used in reports.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define MIXEDFRAC_ERROR(Name)                                            \
  class Name : public Error {                                            \
   public:                                                               \
    explicit Name(const std::string& what) : Error(#Name, what) {}       \
  }

MIXEDFRAC_ERROR(InvalidGeometry);
MIXEDFRAC_ERROR(LevelTooCoarse);
MIXEDFRAC_ERROR(LevelTooFine);
MIXEDFRAC_ERROR(DomainError);
MIXEDFRAC_ERROR(GridMismatch);
MIXEDFRAC_ERROR(WindowTooThin);
MIXEDFRAC_ERROR(OutOfWindow);
MIXEDFRAC_ERROR(CalibrationFailed);
MIXEDFRAC_ERROR(MaxIterExceeded);
MIXEDFRAC_ERROR(Diverged);
MIXEDFRAC_ERROR(MonotonicityViolation);
MIXEDFRAC_ERROR(NonIntegrableWeight);
MIXEDFRAC_ERROR(AliasingDetected);
MIXEDFRAC_ERROR(ConfigError);
MIXEDFRAC_ERROR(ExperimentFailure);

#undef MIXEDFRAC_ERROR

}  // namespace mixedfrac
