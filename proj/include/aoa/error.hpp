#pragma once

#include <stdexcept>
#include <string>

namespace aoa {

enum class ErrorKind {
  invalid_argument,
  malformed_log,
  degenerate_channel,
  resource_limit,
  degenerate_profile,
  singular_geometry,
  insufficient_observations,
  degenerate_geometry,
  parse_error,
  validation_error,
  io_error,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library. what() is prefixed with the kind
/// name, e.g. "degenerate-profile: all cells are zero".
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& message);

}  // namespace aoa
