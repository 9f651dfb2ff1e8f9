#pragma once

// Closed-form vs oracle comparison rows, the verification suite, and
// deterministic serialization (JSON with 17 significant digits, CSV).

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qreg/grid.hpp"
#include "qreg/model.hpp"
#include "qreg/variational.hpp"

namespace qreg::report {

using Json = nlohmann::ordered_json;

struct Tolerances {
  double energy_gap = 1e-4;           // |E_closed_form - E_oracle|
  double analytic_residual = 1e-6;    // closed form in its ODE
  double rayleigh_relative = 1e-9;    // RQ(eigenvector) vs eigenvalue
  double halving_stability = 1e-5;    // extrapolation change when dropping the finest level
  double orthogonality = 1e-8;
  double energy_identity = 1e-4;      // times (|E| + 1)
  double el_closure = 1e-8;
  double stationarity_ratio = 1e-2;
};

struct RunSettings {
  PhysicalParams params;
  std::optional<GridSpec> grid;  // overrides the per-system default domain
  std::size_t base_points = 4000;
  std::size_t residual_points = 10000;
  int levels = 3;
  double theta_max = 6.283185307179586;
  Tolerances tol;
};

enum class Verdict { ExactMatch, DocumentedDiscrepancy, Failure };
std::string_view to_string(Verdict v);

struct ComparisonRow {
  std::string system;
  QuantumNumbers qn;
  std::string target;               // "closed_form" or "dirichlet_box"
  double energy_paper = 0.0;        // sign convention of analytic::energy
  double energy_printed = 0.0;      // as printed
  double energy_oracle = 0.0;       // extrapolated
  double abs_gap = 0.0;
  double rel_gap = 0.0;
  double analytic_residual = 0.0;   // sixth-order residual of the closed form
  std::optional<double> alternative_residual;  // 1D Coulomb sqrt(x) reading
  double oracle_residual = 0.0;     // three-point residual of the oracle eigenvector
  double rayleigh_relative = 0.0;
  double halving_change = 0.0;
  std::size_t node_count = 0;
  std::size_t index = 0;
  std::vector<variational::IdentityReport> identities;
  std::vector<double> level_spacings;
  std::vector<double> level_energies;
  bool self_consistent = false;
  Verdict verdict = Verdict::Failure;
  std::vector<std::string> warnings;
};

/// Oracle domain for a state: the override if any, else the default.
GridSpec oracle_grid(const RunSettings& settings, const SystemSpec& system, const QuantumNumbers& qn);

/// Full closed-form vs oracle comparison for one state.
ComparisonRow compare_state(const RunSettings& settings, const SystemSpec& system, const QuantumNumbers& qn);

/// Applies the verdict rule to an already-measured row.
Verdict assign_verdict(const ComparisonRow& row, const Tolerances& tol);

struct CheckResult {
  variational::IdentityReport report;
  std::optional<double> threshold;  // asserted iff set
  bool passed = true;
};

struct SuiteResult {
  std::vector<ComparisonRow> rows;
  std::vector<CheckResult> checks;
  bool passed() const;
};

/// Comparison rows for the listed states (computed concurrently, returned in order).
std::vector<ComparisonRow> compare_states(const RunSettings& settings, const SystemSpec& system,
                                          const std::vector<QuantumNumbers>& states);

/// Rows plus the oracle invariants and identities for one system.
SuiteResult verify_system(const RunSettings& settings, const SystemSpec& system,
                          const std::vector<QuantumNumbers>& states);

/// Special-function identities and the Euler-Lagrange closure.
std::vector<CheckResult> substrate_checks(const RunSettings& settings);

Json to_json(const ComparisonRow& row);
Json to_json(const variational::IdentityReport& report);
Json to_json(const CheckResult& check);
Json settings_header(const RunSettings& settings);

/// Writes JSON with every number printed with 17 significant digits;
/// non-finite numbers become null. Output depends only on the value.
void write_json(std::ostream& os, const Json& value, int indent = 2);
std::string format_number(double value);

}  // namespace qreg::report
