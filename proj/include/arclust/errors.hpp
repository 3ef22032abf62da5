#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace arclust {

enum class ErrorKind {
  parse,
  validation,
  degenerate_input,
  numerical,
  io,
};

const char* to_string(ErrorKind kind);

/// Error raised by every module of the library. `phase` is filled in by the
/// pipeline driver so a failure can be traced back to the step that raised it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& phase() const noexcept { return phase_; }
  const std::string& detail() const noexcept { return detail_; }

  Error with_phase(std::string phase) const;

 private:
  ErrorKind kind_;
  std::string detail_;
  std::string phase_;
};

/// Parse failure pointing at a 1-based line of an input file.
class ParseError : public Error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& what);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace arclust
