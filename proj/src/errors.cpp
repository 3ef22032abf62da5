#include "arclust/errors.hpp"

namespace arclust {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse: return "parse";
    case ErrorKind::validation: return "validation";
    case ErrorKind::degenerate_input: return "degenerate-input";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + " error: " + message),
      kind_(kind),
      detail_(message) {}

Error Error::with_phase(std::string phase) const {
  Error copy(kind_, "[" + phase + "] " + detail_);
  copy.detail_ = detail_;
  copy.phase_ = std::move(phase);
  return copy;
}

ParseError::ParseError(const std::string& file, std::size_t line, const std::string& what)
    : Error(ErrorKind::parse, file + ":" + std::to_string(line) + ": " + what), line_(line) {}

}  // namespace arclust
