#ifndef MOTZETA_ERROR_HPP
#define MOTZETA_ERROR_HPP

#include <stdexcept>
#include <string>

namespace motzeta {

/** Machine-readable failure codes surfaced in reports and exit status. */
enum class ErrorCode {
  PoleAtQ,
  NonvanishingPolyPart,
  Inconsistent,
  Underdetermined,
  Unbounded,
  UnsupportedShape,
  InfiniteGrading,
  DimensionTooLarge,
  OverlappingPieces,
  BudgetExceeded,
  WeightCheckFailed,
  DegenerateRHS,
  ParseError,
  ValidationError,
};

const char* error_code_name(ErrorCode c);

class EngineError : public std::runtime_error {
public:
  EngineError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
  throw EngineError(code, what);
}

} // namespace motzeta

#endif
