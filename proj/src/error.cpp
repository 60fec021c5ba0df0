#include "aoa/error.hpp"

namespace aoa {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::malformed_log: return "malformed-log";
    case ErrorKind::degenerate_channel: return "degenerate-channel";
    case ErrorKind::resource_limit: return "resource-limit";
    case ErrorKind::degenerate_profile: return "degenerate-profile";
    case ErrorKind::singular_geometry: return "singular-geometry";
    case ErrorKind::insufficient_observations: return "insufficient-observations";
    case ErrorKind::degenerate_geometry: return "degenerate-geometry";
    case ErrorKind::parse_error: return "parse-error";
    case ErrorKind::validation_error: return "validation-error";
    case ErrorKind::io_error: return "io-error";
  }
  return "error";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), detail_(message) {}

void raise(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace aoa
