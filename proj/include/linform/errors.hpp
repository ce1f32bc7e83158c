#pragma once

#include <stdexcept>
#include <string>

namespace linform {

// Base class for everything this library throws deliberately. `code()` is a
// stable machine-readable tag; the CLI maps it into structured error JSON.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& msg)
      : std::runtime_error(msg), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

class NotPrimeError : public Error {
public:
  explicit NotPrimeError(const std::string& m) : Error("NotPrime", m) {}
};

class ReducibleError : public Error {
public:
  explicit ReducibleError(const std::string& m) : Error("Reducible", m) {}
};

class NoDefaultModulusError : public Error {
public:
  explicit NoDefaultModulusError(const std::string& m) : Error("NoDefaultModulus", m) {}
};

class DivisionByZeroError : public Error {
public:
  explicit DivisionByZeroError(const std::string& m) : Error("DivisionByZero", m) {}
};

class FieldMismatchError : public Error {
public:
  explicit FieldMismatchError(const std::string& m) : Error("FieldMismatch", m) {}
};

class LengthMismatchError : public Error {
public:
  explicit LengthMismatchError(const std::string& m) : Error("LengthMismatch", m) {}
};

class AllZeroError : public Error {
public:
  explicit AllZeroError(const std::string& m) : Error("AllZero", m) {}
};

class WrongRhsModeError : public Error {
public:
  explicit WrongRhsModeError(const std::string& m) : Error("WrongRhsMode", m) {}
};

class RhsMismatchError : public Error {
public:
  explicit RhsMismatchError(const std::string& m) : Error("RhsMismatch", m) {}
};

class BudgetExceededError : public Error {
public:
  explicit BudgetExceededError(const std::string& m) : Error("BudgetExceeded", m) {}
};

class NotRealRangeError : public Error {
public:
  explicit NotRealRangeError(const std::string& m) : Error("NotRealRange", m) {}
};

class NumericalInconsistencyError : public Error {
public:
  explicit NumericalInconsistencyError(const std::string& m)
      : Error("NumericalInconsistency", m) {}
};

class NotApplicableError : public Error {
public:
  explicit NotApplicableError(const std::string& m) : Error("NotApplicable", m) {}
};

class ExhaustedTriesError : public Error {
public:
  explicit ExhaustedTriesError(const std::string& m) : Error("ExhaustedTries", m) {}
};

class CSearchFailedError : public Error {
public:
  explicit CSearchFailedError(const std::string& m) : Error("CSearchFailed", m) {}
};

class OutOfRangeError : public Error {
public:
  explicit OutOfRangeError(const std::string& m) : Error("OutOfRange", m) {}
};

class ArityMismatchError : public Error {
public:
  explicit ArityMismatchError(const std::string& m) : Error("ArityMismatch", m) {}
};

// Violations of documented call preconditions that have no dedicated tag.
class PreconditionError : public Error {
public:
  explicit PreconditionError(const std::string& m) : Error("Precondition", m) {}
};

class ParseError : public Error {
public:
  ParseError(const std::string& m, std::size_t position)
      : Error("ParseError", m + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

}  // namespace linform
