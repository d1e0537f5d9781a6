#pragma once

#include <stdexcept>
#include <string>

namespace pstrident {

enum class ErrorKind {
  AmbiguousFloor,
  PrecisionExhausted,
  ZeroArgument,
  RangeEmpty,
  SizeLimit,
  BudgetExceeded,
  InadmissibleLambda0,
  Overflow,
  Config,
  Invariant,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::AmbiguousFloor: return "AmbiguousFloor";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::ZeroArgument: return "ZeroArgument";
    case ErrorKind::RangeEmpty: return "RangeEmpty";
    case ErrorKind::SizeLimit: return "SizeLimit";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::InadmissibleLambda0: return "InadmissibleLambda0";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::Config: return "Config";
    case ErrorKind::Invariant: return "Invariant";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind so the
/// CLI can map it onto its exit-code contract.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) throw Error(kind, what);
}

}  // namespace pstrident
