#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qlab {

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kSizeOverflow,
  kNotHermitian,
  kNonHermitianDrift,
  kUnnormalizedFactor,
  kConvergenceFailure,
  kStepTooCoarse,
  kScanCapExceeded,
  kInconsistentRecords,
  kMissingPauliStrings,
  kCapExceeded,
  kInsufficientData,
  kRejectionSamplingExhausted,
  kParseError,
  kIoError,
};

std::string_view error_name(ErrorCode code);

// Every error carries the owning module and a stable kind name, so messages
// read "adiabatic_engine: StepTooCoarse: ...".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string_view module, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qlab
