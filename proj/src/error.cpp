#include "qlab/error.hpp"

namespace qlab {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kSizeOverflow: return "SizeOverflow";
    case ErrorCode::kNotHermitian: return "NotHermitian";
    case ErrorCode::kNonHermitianDrift: return "NonHermitianDrift";
    case ErrorCode::kUnnormalizedFactor: return "UnnormalizedFactor";
    case ErrorCode::kConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::kStepTooCoarse: return "StepTooCoarse";
    case ErrorCode::kScanCapExceeded: return "ScanCapExceeded";
    case ErrorCode::kInconsistentRecords: return "InconsistentRecords";
    case ErrorCode::kMissingPauliStrings: return "MissingPauliStrings";
    case ErrorCode::kCapExceeded: return "CapExceeded";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kRejectionSamplingExhausted: return "RejectionSamplingExhausted";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, std::string_view module, const std::string& detail)
    : std::runtime_error(std::string(module) + ": " + std::string(error_name(code)) + ": " +
                         detail),
      code_(code) {}

}  // namespace qlab
