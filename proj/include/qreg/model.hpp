#pragma once

// Physical parameterization of the regularized stationary problems.
//
// Every eigenproblem here has the form
//     -(mu^2 / 2m) X'' + W(q) X = E X,   q > 0,
// where W carries the information barrier mu^2 / (8 m q^2) produced by the
// guidance condition q p = mu / 2. Polar radial problems are stated for the
// amplitude rho(r); the oracle works on the reduced amplitude u = sqrt(r) rho.

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qreg/grid.hpp"

namespace qreg {

struct PhysicalParams {
  double m = 1.0;   // mass
  double mu = 1.0;  // information coupling, plays the role of hbar

  void validate() const;
  /// mu^2 / (2m), the coefficient of -X''.
  double kinetic_scale() const { return mu * mu / (2.0 * m); }
};

enum class Geometry { OneDimensional, TwoDimensionalPolar };

namespace potential {
struct Free {};
struct Constant {
  double v0 = 0.0;  // V(r) = -v0
};
struct Harmonic {
  double ks = 1.0;  // spring constant, V = ks q^2 / 2
};
struct Coulomb {
  double alpha = 1.0;  // V = -alpha / q
};
}  // namespace potential

using Potential = std::variant<potential::Free, potential::Constant, potential::Harmonic, potential::Coulomb>;

/// One of the six supported (geometry, potential) systems.
class SystemSpec {
 public:
  /// Throws InvalidSystem for pairs outside
  /// 1D x {Free, Harmonic, Coulomb} and 2D-polar x {Constant, Harmonic, Coulomb}.
  SystemSpec(Geometry geometry, Potential potential);

  static SystemSpec free1d() { return {Geometry::OneDimensional, potential::Free{}}; }
  static SystemSpec harmonic1d(double ks) { return {Geometry::OneDimensional, potential::Harmonic{ks}}; }
  static SystemSpec coulomb1d(double alpha) { return {Geometry::OneDimensional, potential::Coulomb{alpha}}; }
  static SystemSpec constant2d(double v0) { return {Geometry::TwoDimensionalPolar, potential::Constant{v0}}; }
  static SystemSpec harmonic2d(double ks) { return {Geometry::TwoDimensionalPolar, potential::Harmonic{ks}}; }
  static SystemSpec coulomb2d(double alpha) { return {Geometry::TwoDimensionalPolar, potential::Coulomb{alpha}}; }

  Geometry geometry() const { return geometry_; }
  const Potential& potential() const { return potential_; }
  bool is_polar() const { return geometry_ == Geometry::TwoDimensionalPolar; }
  /// Free and Constant: no discrete spectrum, boxed by the oracle.
  bool is_continuum() const;
  bool is_harmonic() const { return std::holds_alternative<potential::Harmonic>(potential_); }
  bool is_coulomb() const { return std::holds_alternative<potential::Coulomb>(potential_); }

  /// CLI name: free1d, harmonic1d, coulomb1d, const2d, harmonic2d, coulomb2d.
  std::string_view name() const;

  /// V(q) itself.
  double potential_energy(double q) const;

 private:
  Geometry geometry_;
  Potential potential_;
};

/// Parameters of the named system drawn from (ks, alpha, v0).
SystemSpec make_system(std::string_view name, double ks, double alpha, double v0);
/// The six names in canonical order.
const std::vector<std::string_view>& system_names();

struct QuantumNumbers {
  int n = 0;
  std::optional<int> l;  // present iff the geometry is polar

  static QuantumNumbers radial(int n) { return {n, std::nullopt}; }
  static QuantumNumbers polar(int n, int l) { return {n, l}; }

  int l_or_zero() const { return l.value_or(0); }
  /// Throws Domain on negative indices or on l presence not matching the geometry.
  void validate_for(const SystemSpec& system) const;
};

/// Coefficient W(q) multiplying the amplitude in its own stationary equation:
///   1D:        mu^2/(8 m q^2) + V(q)
///   2D polar:  mu^2 (l + 1/2)^2 / (2 m r^2) + V(r)    [rho equation, with
///              kinetic operator -(mu^2/2m)(rho'' + rho'/r)]
double effective_potential(const PhysicalParams& params, const SystemSpec& system, const QuantumNumbers& qn,
                           double q);

/// Potential of the first-derivative-free problem -(mu^2/2m) X'' + W X = E X.
/// Equal to effective_potential in 1D; in 2D the substitution u = sqrt(r) rho
/// removes mu^2/(8 m r^2), leaving mu^2 l(l+1)/(2 m r^2) + V(r).
/// With include_barrier = false the mu^2/(8 m q^2) term is dropped (diagnostic).
double reduced_potential(const PhysicalParams& params, const SystemSpec& system, const QuantumNumbers& qn,
                         double q, bool include_barrier = true);

/// Coefficient c of the q^-2 singularity of reduced_potential in units of
/// mu^2/(2m): 1/4 in 1D, l(l+1) in 2D.
double reduced_barrier_strength(const SystemSpec& system, const QuantumNumbers& qn, bool include_barrier = true);

/// Guidance condition q p = mu/2 with the origin-centred, positive branch.
double guidance_momentum(const PhysicalParams& params, double q);

/// S(q, t) = (mu/2) ln(q/q0) - E t, so dS/dq = guidance_momentum and dS/dt = -E.
double phase_action(const PhysicalParams& params, double q, double q0, double energy, double t);

/// Psi_i = X_i exp(i S(q_i) / mu).
std::vector<std::complex<double>> compose_wavefunction(const SampledField& field, const PhysicalParams& params,
                                                       double energy, double q0, double t);

/// Which amplitude a sampled field holds for polar systems.
enum class AmplitudeForm {
  Reduced,  // X in 1D, u = sqrt(r) rho in 2D
  Polar,    // rho(r) as printed for polar radial problems
};

/// Converts a polar rho(r) field to the reduced u = sqrt(r) rho(r); identity otherwise.
SampledField to_reduced(const SampledField& field, const SystemSpec& system, AmplitudeForm form);

}  // namespace qreg
