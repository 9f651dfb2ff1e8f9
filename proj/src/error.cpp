#include "qreg/error.hpp"

#include <atomic>
#include <iostream>

namespace qreg {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::InvalidSystem: return "invalid_system";
    case ErrorKind::ContinuousSpectrum: return "continuous_spectrum";
    case ErrorKind::Convention: return "convention";
    case ErrorKind::Degenerate: return "degenerate";
    case ErrorKind::Overflow: return "overflow";
    case ErrorKind::NonConvergence: return "non_convergence";
    case ErrorKind::IllConditioned: return "ill_conditioned";
    case ErrorKind::InvalidInput: return "invalid_input";
  }
  return "unknown";
}

namespace {

void stderr_sink(std::string_view message) { std::clog << "qreg: warning: " << message << '\n'; }

std::atomic<WarningSink> g_sink{&stderr_sink};

}  // namespace

WarningSink set_warning_sink(WarningSink sink) noexcept {
  return g_sink.exchange(sink ? sink : &stderr_sink);
}

void warn(std::string_view message) { g_sink.load()(message); }

}  // namespace qreg
