#ifndef RXCOORD_ERROR_HPP
#define RXCOORD_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace rxcoord {

enum class ErrorKind {
  MalformedRecord,
  EmptyStructure,
  InconsistentFrame,
  NonNumericValue,
  DuplicateFrame,
  EmptySelection,
  ParseError,
  DegenerateAxes,
  TooFewAtoms,
  CollinearSelection,
  AtomOrderMismatch,
  MissingCA,
  InvalidArgument,
  LengthMismatch,
  AllDegenerate,
  InputMissing,
  OutputExists,
  Io,
};

/// Stable snake_case identifier, used by the CLI as `error_code`.
inline std::string_view error_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedRecord: return "malformed_record";
    case ErrorKind::EmptyStructure: return "empty_structure";
    case ErrorKind::InconsistentFrame: return "inconsistent_frame";
    case ErrorKind::NonNumericValue: return "non_numeric_value";
    case ErrorKind::DuplicateFrame: return "duplicate_frame";
    case ErrorKind::EmptySelection: return "empty_selection";
    case ErrorKind::ParseError: return "parse_error";
    case ErrorKind::DegenerateAxes: return "degenerate_axes";
    case ErrorKind::TooFewAtoms: return "too_few_atoms";
    case ErrorKind::CollinearSelection: return "collinear_selection";
    case ErrorKind::AtomOrderMismatch: return "atom_order_mismatch";
    case ErrorKind::MissingCA: return "missing_ca";
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::LengthMismatch: return "length_mismatch";
    case ErrorKind::AllDegenerate: return "all_degenerate";
    case ErrorKind::InputMissing: return "input_missing";
    case ErrorKind::OutputExists: return "output_exists";
    case ErrorKind::Io: return "io_error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace rxcoord

#endif  // RXCOORD_ERROR_HPP
