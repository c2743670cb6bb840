#pragma once

#include <stdexcept>
#include <string>

namespace windband {

enum class ErrorKind {
  Parse,             // malformed input row or file
  DuplicateKey,      // repeated timestamp or (target, lead) pair
  InvalidArgument,   // violated precondition or type invariant
  Config,            // bad configuration file
  Io,                // file could not be opened or written
  EmptySelection,    // window filter left nothing
  EmptyJoin,         // no forecast matched a realized hour
  InsufficientData,  // too few samples for a fit
  InsufficientBins,  // fewer than two usable variability bins
  DegenerateRegression,
  ZeroRange,         // histogram data has no spread
  SearchDomain,      // empty optimization domain
};

const char* to_string(ErrorKind kind) noexcept;

/// Exit-code class of an error: 1 for input problems, 2 for fit failures.
int exit_code_for(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failure carrying the 1-based line number of the offending row.
class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, std::size_t line, const std::string& what)
      : Error(kind, "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace windband
