#ifndef GEOTRI_ERRORS_HPP
#define GEOTRI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace geotri {

enum class ErrorKind {
  DegenerateInput,
  NonGeometric,
  OverlappingHoroballs,
  NonUnimodular,
  MissingShapes,
  NotConvex,
  SameCell,
  BadValence,
  DuplicateCell,
  NotOctahedron,
  NonGeometricResult,
  ParseError,
  RealModulus,
  ForbiddenEdge,
  AngleAtLeastPi,
  SingularMatrix,
  HeightTooSmall,
  NoUniqueMinimum,
  InconsistentInput,
  BadDenominator,
  SearchExhausted,
  ZeroC,
  DependentBasis,
  PreconditionViolated,
  BadInput,
};

// Thrown by all modules.  SearchExhausted means "inconclusive", never a
// negative claim; callers that report exit codes map it to 2.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::NonGeometric: return "NonGeometric";
    case ErrorKind::OverlappingHoroballs: return "OverlappingHoroballs";
    case ErrorKind::NonUnimodular: return "NonUnimodular";
    case ErrorKind::MissingShapes: return "MissingShapes";
    case ErrorKind::NotConvex: return "NotConvex";
    case ErrorKind::SameCell: return "SameCell";
    case ErrorKind::BadValence: return "BadValence";
    case ErrorKind::DuplicateCell: return "DuplicateCell";
    case ErrorKind::NotOctahedron: return "NotOctahedron";
    case ErrorKind::NonGeometricResult: return "NonGeometricResult";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::RealModulus: return "RealModulus";
    case ErrorKind::ForbiddenEdge: return "ForbiddenEdge";
    case ErrorKind::AngleAtLeastPi: return "AngleAtLeastPi";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::HeightTooSmall: return "HeightTooSmall";
    case ErrorKind::NoUniqueMinimum: return "NoUniqueMinimum";
    case ErrorKind::InconsistentInput: return "InconsistentInput";
    case ErrorKind::BadDenominator: return "BadDenominator";
    case ErrorKind::SearchExhausted: return "SearchExhausted";
    case ErrorKind::ZeroC: return "ZeroC";
    case ErrorKind::DependentBasis: return "DependentBasis";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::BadInput: return "BadInput";
  }
  return "Unknown";
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, std::string(error_kind_name(kind)) + ": " + msg);
}

}  // namespace geotri

#endif
