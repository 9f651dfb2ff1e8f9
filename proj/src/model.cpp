#include "qreg/model.hpp"

#include <cmath>
#include <string>

#include "qreg/error.hpp"

namespace qreg {

namespace {

void require_positive_coordinate(double q, const char* what) {
  require(std::isfinite(q) && q > 0.0, ErrorKind::Domain, std::string(what) + ": coordinate must be positive");
}

}  // namespace

void PhysicalParams::validate() const {
  require(std::isfinite(m) && m > 0.0, ErrorKind::Domain, "params: mass m must be positive");
  require(std::isfinite(mu) && mu > 0.0, ErrorKind::Domain, "params: coupling mu must be positive");
}

SystemSpec::SystemSpec(Geometry geometry, Potential potential)
    : geometry_(geometry), potential_(std::move(potential)) {
  using namespace potential;
  const bool one_d = geometry == Geometry::OneDimensional;
  const bool supported = std::visit(
      [one_d](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Free>) return one_d;
        if constexpr (std::is_same_v<T, Constant>) return !one_d;
        return true;
      },
      potential_);
  require(supported, ErrorKind::InvalidSystem,
          one_d ? "system: constant potential is only supported in 2D polar geometry"
                : "system: free particle is only supported in 1D (use const2d with v0 = 0)");

  std::visit(
      [](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Harmonic>) {
          require(std::isfinite(v.ks) && v.ks > 0.0, ErrorKind::InvalidSystem, "system: ks must be positive");
        } else if constexpr (std::is_same_v<T, Coulomb>) {
          require(std::isfinite(v.alpha) && v.alpha > 0.0, ErrorKind::InvalidSystem,
                  "system: alpha must be positive");
        } else if constexpr (std::is_same_v<T, Constant>) {
          require(std::isfinite(v.v0), ErrorKind::InvalidSystem, "system: v0 must be finite");
        }
      },
      potential_);
}

bool SystemSpec::is_continuum() const {
  return std::holds_alternative<potential::Free>(potential_) ||
         std::holds_alternative<potential::Constant>(potential_);
}

std::string_view SystemSpec::name() const {
  using namespace potential;
  if (std::holds_alternative<Free>(potential_)) return "free1d";
  if (std::holds_alternative<Constant>(potential_)) return "const2d";
  if (std::holds_alternative<Harmonic>(potential_)) return is_polar() ? "harmonic2d" : "harmonic1d";
  return is_polar() ? "coulomb2d" : "coulomb1d";
}

double SystemSpec::potential_energy(double q) const {
  using namespace potential;
  return std::visit(
      [q](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Free>) return 0.0;
        if constexpr (std::is_same_v<T, Constant>) return -v.v0;
        if constexpr (std::is_same_v<T, Harmonic>) return 0.5 * v.ks * q * q;
        if constexpr (std::is_same_v<T, Coulomb>) return -v.alpha / q;
      },
      potential_);
}

SystemSpec make_system(std::string_view name, double ks, double alpha, double v0) {
  if (name == "free1d") return SystemSpec::free1d();
  if (name == "harmonic1d") return SystemSpec::harmonic1d(ks);
  if (name == "coulomb1d") return SystemSpec::coulomb1d(alpha);
  if (name == "const2d") return SystemSpec::constant2d(v0);
  if (name == "harmonic2d") return SystemSpec::harmonic2d(ks);
  if (name == "coulomb2d") return SystemSpec::coulomb2d(alpha);
  fail(ErrorKind::InvalidSystem, "unknown system '" + std::string(name) + "'");
}

const std::vector<std::string_view>& system_names() {
  static const std::vector<std::string_view> names{"free1d", "harmonic1d", "coulomb1d",
                                                   "const2d", "harmonic2d", "coulomb2d"};
  return names;
}

void QuantumNumbers::validate_for(const SystemSpec& system) const {
  require(n >= 0, ErrorKind::Domain, "n must be non-negative");
  if (system.is_polar()) {
    require(l.has_value(), ErrorKind::Domain, "l is required for polar systems");
    require(*l >= 0, ErrorKind::Domain, "l must be non-negative");
  } else {
    require(!l.has_value(), ErrorKind::Domain, "l is only defined for polar systems");
  }
}

double effective_potential(const PhysicalParams& params, const SystemSpec& system, const QuantumNumbers& qn,
                           double q) {
  params.validate();
  qn.validate_for(system);
  require_positive_coordinate(q, "effective_potential");
  const double c = params.kinetic_scale();
  if (!system.is_polar()) return c / (4.0 * q * q) + system.potential_energy(q);
  const double lh = qn.l_or_zero() + 0.5;
  return c * lh * lh / (q * q) + system.potential_energy(q);
}

double reduced_barrier_strength(const SystemSpec& system, const QuantumNumbers& qn, bool include_barrier) {
  const double information = include_barrier ? 0.25 : 0.0;
  if (!system.is_polar()) return information;
  const double l = qn.l_or_zero();
  // (l + 1/2)^2 from the rho equation, minus 1/4 from u = sqrt(r) rho.
  return l * (l + 1.0) + information - 0.25;
}

double reduced_potential(const PhysicalParams& params, const SystemSpec& system, const QuantumNumbers& qn,
                         double q, bool include_barrier) {
  params.validate();
  qn.validate_for(system);
  require_positive_coordinate(q, "reduced_potential");
  const double c = params.kinetic_scale();
  return c * reduced_barrier_strength(system, qn, include_barrier) / (q * q) + system.potential_energy(q);
}

double guidance_momentum(const PhysicalParams& params, double q) {
  params.validate();
  require_positive_coordinate(q, "guidance_momentum");
  return params.mu / (2.0 * q);
}

double phase_action(const PhysicalParams& params, double q, double q0, double energy, double t) {
  params.validate();
  require_positive_coordinate(q, "phase_action");
  require_positive_coordinate(q0, "phase_action (reference q0)");
  return 0.5 * params.mu * std::log(q / q0) - energy * t;
}

std::vector<std::complex<double>> compose_wavefunction(const SampledField& field, const PhysicalParams& params,
                                                       double energy, double q0, double t) {
  const auto q = field.grid();
  const auto x = field.values();
  std::vector<std::complex<double>> psi(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double phase = phase_action(params, q[i], q0, energy, t) / params.mu;
    psi[i] = {x[i] * std::cos(phase), x[i] * std::sin(phase)};
  }
  return psi;
}

SampledField to_reduced(const SampledField& field, const SystemSpec& system, AmplitudeForm form) {
  if (!system.is_polar() || form == AmplitudeForm::Reduced) return field;
  const auto r = field.grid();
  const auto rho = field.values();
  std::vector<double> u(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) u[i] = std::sqrt(r[i]) * rho[i];
  return field.with_values(std::move(u));
}

}  // namespace qreg
