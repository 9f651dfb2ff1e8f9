#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qreg {

enum class ErrorKind {
  Domain,
  InvalidSystem,
  ContinuousSpectrum,
  Convention,
  Degenerate,
  Overflow,
  NonConvergence,
  IllConditioned,
  InvalidInput,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Single exception type for the library; the kind drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

// Non-fatal diagnostics (auto-normalization, truncated domains, ...).
// The default sink writes one line to stderr; tests and the CLI may swap it.
using WarningSink = void (*)(std::string_view);
WarningSink set_warning_sink(WarningSink sink) noexcept;
void warn(std::string_view message);

}  // namespace qreg
