#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace abel {

enum class ErrorCode {
  Syntax,
  UnknownIdentifier,
  UnbalancedParentheses,
  Domain,
  DivisionByZero,
  Overflow,
  InvalidArgument,
  LeadingCoefficientZero,
  BranchLost,
  ZeroEigenvalue,
  BranchCoverage,
  GridMismatch,
  NotASolution,
  WrongDegree,
  ReferenceFailure,
  Pole,
  UnknownCase,
  Config,
  IntegrationFailure,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the expression parser; `offset` is the byte offset into the source.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::size_t offset, const std::string& what)
      : Error(code, what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Continuation could not find a root within the jump threshold at `x`.
class BranchLostError : public Error {
 public:
  explicit BranchLostError(double x)
      : Error(ErrorCode::BranchLost, "equilibrium branch lost at x=" + std::to_string(x)), x_(x) {}
  double x() const noexcept { return x_; }

 private:
  double x_;
};

}  // namespace abel
