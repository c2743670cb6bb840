#include "windband/error.hpp"

namespace windband {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Parse: return "parse";
    case ErrorKind::DuplicateKey: return "duplicate-key";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
    case ErrorKind::EmptySelection: return "empty-selection";
    case ErrorKind::EmptyJoin: return "empty-join";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::InsufficientBins: return "insufficient-bins";
    case ErrorKind::DegenerateRegression: return "degenerate-regression";
    case ErrorKind::ZeroRange: return "zero-range";
    case ErrorKind::SearchDomain: return "search-domain";
  }
  return "unknown";
}

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Parse:
    case ErrorKind::DuplicateKey:
    case ErrorKind::InvalidArgument:
    case ErrorKind::Config:
    case ErrorKind::Io:
    case ErrorKind::EmptySelection:
      return 1;
    default:
      return 2;
  }
}

}  // namespace windband
