#pragma once

#include <stdexcept>
#include <string>

namespace gavekit {

enum class ErrorCode {
  BadJson,
  RaggedRows,
  NonFinite,
  DimensionMismatch,
  BadField,
  IndexError,
  SingularMatrix,
  NumericalFailure,
  BudgetExceeded,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct InputError : Error {
  InputError(ErrorCode code, const std::string& what) : Error(code, what) {}
};

struct NumericalError : Error {
  explicit NumericalError(const std::string& what) : Error(ErrorCode::NumericalFailure, what) {}
};

struct BudgetError : Error {
  explicit BudgetError(const std::string& what) : Error(ErrorCode::BudgetExceeded, what) {}
};

}  // namespace gavekit
