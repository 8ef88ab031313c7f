#pragma once

#include <stdexcept>
#include <string>

namespace hardyseq {

enum class ErrorKind {
  Syntax,
  PolynomialRejected,
  NotSubpolynomialType,
  Domain,
  BoundaryUnresolved,
  Constraint,
  SizeGuard,
  InvalidArgument,
  Overflow,
};

const char* to_string(ErrorKind kind);

// All library failures are reported through this one exception type; the
// kind distinguishes input problems from precision failures.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hardyseq
