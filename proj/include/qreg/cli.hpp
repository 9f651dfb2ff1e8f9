#pragma once

// qreg command line: job parsing (flags over config file), execution, and
// CSV/JSON emission.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qreg/grid.hpp"
#include "qreg/model.hpp"

namespace qreg::cli {

enum class Command { Spectrum, Wavefunction, Verify, Compare };
std::string_view to_string(Command c);

/// Inclusive integer range written "A..B" (or a single "A").
struct IntRange {
  int first = 0;
  int last = 0;
  static IntRange parse(std::string_view text, std::string_view what);
  std::vector<int> values() const;
};

enum class Format { Csv, Json };
enum class Source { ClosedForm, Oracle };

struct Job {
  Command command = Command::Verify;
  std::vector<std::string> systems;
  PhysicalParams params;
  double ks = 1.0;
  double alpha = 1.0;
  double v0 = 0.0;
  std::optional<IntRange> n;
  std::optional<IntRange> l;
  std::optional<GridSpec> grid;
  double theta_max = 6.283185307179586;
  int levels = 3;
  std::optional<Format> format;  // default: csv for spectrum and wavefunction, json otherwise
  std::string out;  // empty: standard output
  std::optional<double> k;  // continuum wavenumber for `wavefunction`
  Source source = Source::ClosedForm;

  SystemSpec system(std::string_view name) const;
  /// States in output order (l, then n); defaults per system when no range is given.
  std::vector<QuantumNumbers> states(const SystemSpec& system) const;
};

/// Parses argv (argv[0] is the program name). Throws Error(InvalidInput)
/// on anything malformed; `help` is set instead when --help was requested.
Job parse(const std::vector<std::string>& args, std::string* help = nullptr);

/// Runs a job, writing artifacts to `out` (or job.out). Returns the exit code.
int execute(const Job& job, std::ostream& out);

/// Full entry point: parse + execute with exit-code mapping
/// (0 ok, 1 verification failure, 2 invalid input, 3 numerical failure).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct WavefunctionTable {
  std::vector<double> q, x, p, quantum, s;  // quantum is NaN where masked
};

void write_wavefunction_csv(std::ostream& os, const WavefunctionTable& table);
WavefunctionTable read_wavefunction_csv(std::istream& is);

}  // namespace qreg::cli
