#pragma once

// Closed-form regularized eigenstates and spectra for the six systems,
// evaluated exactly as printed, with two convention choices:
//  * the 1D Coulomb energy carries the negative sign implied by
//    kappa = sqrt(-2 m E / mu^2) (energy_as_printed keeps the printed sign);
//  * the 2D Coulomb radial Laguerre factor uses the degree-n convention
//    L_n^{(2l+1)} in place of the printed L_{n+l+1}^{(2l+1)}.

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qreg/grid.hpp"
#include "qreg/model.hpp"

namespace qreg::analytic {

/// Order 1/sqrt(2) of every Bessel/Whittaker factor produced by the
/// 1/(4 q^2) information barrier.
inline constexpr double kBarrierOrder = 0.70710678118654752440;

/// Offset 1/sqrt(2) + 1/2 of the 1D Coulomb principal quantum number.
inline constexpr double kCoulomb1dShift = kBarrierOrder + 0.5;

/// Continuum label for Free and Constant systems. For const2d, l selects the
/// radial order l + 1/2; `imaginary` switches to I_nu / K_nu (E below the floor).
struct Wavenumber {
  double k = 1.0;
  int l = 0;
  bool imaginary = false;
};

using StateLabel = std::variant<QuantumNumbers, Wavenumber>;

struct Coefficients {
  double c1 = 1.0;
  double c2 = 0.0;  // second (irregular) branch; must be 0 for bound systems
};

struct SpectrumEntry {
  QuantumNumbers qn;
  double energy_paper = 0.0;
  std::string degeneracy_label;
};

/// Derived constants of one closed-form state; each is set only where the
/// system defines it.
struct ClosedFormState {
  SystemSpec system;
  StateLabel label;
  std::optional<double> energy;
  std::optional<double> k;        // wavenumber, k^2 = 2 m E / mu^2
  std::optional<double> kappa;    // harmonic: m ks / mu^2; 1D Coulomb: decay sqrt(-2 m E / mu^2)
  std::optional<double> gamma;    // m omega / mu (2D harmonic)
  std::optional<double> lambda;   // 2D Coulomb decay sqrt(-2 m E / mu^2)
  std::optional<double> beta;     // 2 m alpha / mu^2
  std::optional<double> kappa_w;  // Whittaker index m alpha / (mu^2 kappa)
  std::optional<double> mu_w;     // 1/sqrt(2)
  std::optional<double> nu;       // radial Bessel order
};

ClosedFormState closed_form_state(const PhysicalParams& params, const SystemSpec& system, const StateLabel& label);

/// Discrete spectrum formula. Throws ContinuousSpectrum for free1d/const2d.
double energy(const PhysicalParams& params, const SystemSpec& system, const QuantumNumbers& qn);

/// Same as energy() except the 1D Coulomb value keeps its printed (positive) sign.
double energy_as_printed(const PhysicalParams& params, const SystemSpec& system, const QuantumNumbers& qn);

/// Entries n = n_first..n_last at fixed l (l ignored in 1D).
std::vector<SpectrumEntry> spectrum(const PhysicalParams& params, const SystemSpec& system, int n_first,
                                    int n_last, int l = 0);

/// Dirichlet-box wavenumber j_{nu, n+1} / length for free1d (nu = 1/sqrt(2))
/// and const2d (nu = l + 1/2); n is the 0-based box index.
double box_wavenumber(const SystemSpec& system, const QuantumNumbers& qn, double length);

/// mu^2 k^2 / (2m) + V for the box wavenumber.
double box_energy(const PhysicalParams& params, const SystemSpec& system, const QuantumNumbers& qn,
                  double length);

/// Un-normalized closed-form amplitude at q > 0: X(x) in 1D, rho(r) in 2D.
double eigenfunction(const PhysicalParams& params, const SystemSpec& system, const StateLabel& label,
                     const Coefficients& coeffs, double q);

/// The alternative 1D Coulomb reading X = sqrt(x) M_{kappa_W, mu_w}(2 kappa x).
double coulomb1d_sqrt_variant(const PhysicalParams& params, const SystemSpec& system, int n, double c1,
                              double x);

/// Samples eigenfunction() on a grid.
SampledField sample_eigenfunction(const PhysicalParams& params, const SystemSpec& system,
                                  const StateLabel& label, const Coefficients& coeffs, const GridSpec& grid);

/// Theta(theta) = sqrt(theta) (C J_{1/sqrt2}(sqrt(l(l+1)) theta) + D Y_{1/sqrt2}(...));
/// for l = 0 the Euler solutions theta^{(1 +- sqrt2)/2}.
double angular_amplitude(int l, double theta, const Coefficients& coeffs);

/// Rescales so that the Simpson integral of X^2 is 1.
SampledField normalize(const SampledField& field);

/// Sign changes between successive samples with |X| >= 1e-12 max|X|.
std::size_t count_nodes(const SampledField& field);

}  // namespace qreg::analytic
