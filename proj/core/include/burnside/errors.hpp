#pragma once

#include <stdexcept>
#include <string>

namespace burnside {

// Failure conditions raised by the library. Expected, recoverable outcomes
// (incomplete closures, exceeded power caps, missing invariant subspaces)
// are reported through status fields on result structs instead.
enum class Errc {
  NonPrimeModulus,
  ReducibleModulusPolynomial,
  DivisionByZero,
  ShapeMismatch,
  FieldMismatch,
  SingularMatrix,
  NotAHomomorphism,
  EmptyPreimage,
  NonComposable,
  ModeUnavailable,
  DoesNotSpan,
  DegenerateGram,
  NotInSpan,
  NotInStabilizer,
  LimitExceeded,
  ParseError,
  Internal,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& message);

// Internal consistency check; failures indicate a bug, not bad input.
inline void check_internal(bool ok, const char* what) {
  if (!ok) fail(Errc::Internal, what);
}

}  // namespace burnside
