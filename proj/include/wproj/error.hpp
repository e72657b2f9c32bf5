#pragma once

#include <stdexcept>
#include <string>

namespace wproj {

enum class ErrorCode {
  EmptyInput,
  NonPositiveWeight,
  InvalidArgument,
  InvalidP,
  BarycenterMismatch,
  MassMismatch,
  NoConvergence,
  Parse,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidP: return "InvalidP";
    case ErrorCode::BarycenterMismatch: return "BarycenterMismatch";
    case ErrorCode::MassMismatch: return "MassMismatch";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require_valid_p(double p) {
  if (!(p >= 1.0)) throw Error(ErrorCode::InvalidP, "exponent p must satisfy p >= 1");
}

}  // namespace wproj
