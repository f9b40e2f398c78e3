#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sephorn {

enum class ErrorCode {
  NotHermitian,
  NoConvergence,
  NotOrthonormal,
  DimensionMismatch,
  DimensionTooSmall,
  NotAState,
  NotFullRank,
  BadCardinality,
  CapExceeded,
  LengthMismatch,
  NotSorted,
  NotNormalForm,
  Equation10Violated,
  BoundExceeded,
  FixedPointDiverged,
  SearchFailed,
  OutOfPositivityRange,
  NotPSD,
  ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// CLI can triage parse problems from numeric ones.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sephorn
