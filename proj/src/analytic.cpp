#include "qreg/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qreg/error.hpp"
#include "qreg/specfun.hpp"

namespace qreg::analytic {

namespace {

using specfun::BesselKind;

double omega(const PhysicalParams& params, const SystemSpec& system) {
  return std::sqrt(std::get<potential::Harmonic>(system.potential()).ks / params.m);
}

double alpha(const SystemSpec& system) { return std::get<potential::Coulomb>(system.potential()).alpha; }

const QuantumNumbers& bound_numbers(const SystemSpec& system, const StateLabel& label) {
  require(std::holds_alternative<QuantumNumbers>(label), ErrorKind::Convention,
          std::string(system.name()) + ": bound system needs quantum numbers, not a wavenumber");
  const auto& qn = std::get<QuantumNumbers>(label);
  qn.validate_for(system);
  return qn;
}

const Wavenumber& continuum_label(const SystemSpec& system, const StateLabel& label) {
  require(std::holds_alternative<Wavenumber>(label), ErrorKind::Convention,
          std::string(system.name()) + ": continuum system needs a wavenumber, not quantum numbers");
  const auto& w = std::get<Wavenumber>(label);
  require(std::isfinite(w.k) && w.k > 0.0, ErrorKind::Domain, "wavenumber k must be positive");
  require(w.l >= 0, ErrorKind::Domain, "l must be non-negative");
  require(system.is_polar() || w.l == 0, ErrorKind::Domain, "l is only defined for polar systems");
  return w;
}

// c1 * f1 + c2 * f2, skipping a branch whose coefficient is zero so that a
// divergent irregular branch never turns 0 * inf into NaN.
template <class F1, class F2>
double combine(double c1, F1&& f1, double c2, F2&& f2) {
  double sum = 0.0;
  if (c1 != 0.0) sum += c1 * f1();
  if (c2 != 0.0) sum += c2 * f2();
  return sum;
}

}  // namespace

double energy(const PhysicalParams& params, const SystemSpec& system, const QuantumNumbers& qn) {
  params.validate();
  qn.validate_for(system);
  require(!system.is_continuum(), ErrorKind::ContinuousSpectrum,
          std::string(system.name()) + " has a continuous spectrum (no discrete energy formula)");
  const double n = qn.n;
  const double l = qn.l_or_zero();
  if (system.is_harmonic()) {
    const double w = omega(params, system);
    return system.is_polar() ? params.mu * w * (2.0 * n + l + 1.0) : params.mu * w * (n + 0.5);
  }
  const double a = alpha(system);
  const double principal = system.is_polar() ? n + l + 1.0 : n + kCoulomb1dShift;
  return -params.m * a * a / (2.0 * params.mu * params.mu * principal * principal);
}

double energy_as_printed(const PhysicalParams& params, const SystemSpec& system, const QuantumNumbers& qn) {
  const double e = energy(params, system, qn);
  return system.is_coulomb() && !system.is_polar() ? -e : e;
}

std::vector<SpectrumEntry> spectrum(const PhysicalParams& params, const SystemSpec& system, int n_first,
                                    int n_last, int l) {
  require(n_first >= 0 && n_last >= n_first, ErrorKind::Domain, "spectrum: need 0 <= n_first <= n_last");
  std::vector<SpectrumEntry> out;
  for (int n = n_first; n <= n_last; ++n) {
    const QuantumNumbers qn = system.is_polar() ? QuantumNumbers::polar(n, l) : QuantumNumbers::radial(n);
    std::ostringstream label;
    if (system.is_harmonic() && system.is_polar()) {
      label << "shell 2n+l+1=" << 2 * n + l + 1;
    } else if (system.is_coulomb() && system.is_polar()) {
      label << "principal n+l+1=" << n + l + 1;
    } else if (system.is_coulomb()) {
      label << "shifted principal n+1.2071";
    } else {
      label << "nondegenerate";
    }
    out.push_back({qn, energy(params, system, qn), label.str()});
  }
  return out;
}

double box_wavenumber(const SystemSpec& system, const QuantumNumbers& qn, double length) {
  require(system.is_continuum(), ErrorKind::InvalidSystem, "box_wavenumber: only free1d and const2d are boxed");
  qn.validate_for(system);
  require(std::isfinite(length) && length > 0.0, ErrorKind::Domain, "box length must be positive");
  const double nu = system.is_polar() ? qn.l_or_zero() + 0.5 : kBarrierOrder;
  return specfun::bessel_zero(nu, qn.n + 1) / length;
}

double box_energy(const PhysicalParams& params, const SystemSpec& system, const QuantumNumbers& qn,
                  double length) {
  params.validate();
  const double k = box_wavenumber(system, qn, length);
  return params.kinetic_scale() * k * k + system.potential_energy(length);
}

ClosedFormState closed_form_state(const PhysicalParams& params, const SystemSpec& system, const StateLabel& label) {
  params.validate();
  ClosedFormState s{system, label};
  const double mu2 = params.mu * params.mu;
  const double c = params.kinetic_scale();
  s.mu_w = kBarrierOrder;

  if (system.is_continuum()) {
    const auto& w = continuum_label(system, label);
    s.k = w.k;
    s.nu = system.is_polar() ? w.l + 0.5 : kBarrierOrder;
    const double kinetic = (w.imaginary ? -1.0 : 1.0) * c * w.k * w.k;
    s.energy = kinetic + system.potential_energy(1.0);
    return s;
  }

  const auto& qn = bound_numbers(system, label);
  const double e = energy(params, system, qn);
  s.energy = e;
  if (system.is_harmonic()) {
    const double ks = std::get<potential::Harmonic>(system.potential()).ks;
    if (system.is_polar()) {
      s.gamma = params.m * omega(params, system) / params.mu;
    } else {
      s.kappa = params.m * ks / mu2;
      s.k = std::sqrt(e / c);
    }
    return s;
  }

  const double a = alpha(system);
  s.beta = 2.0 * params.m * a / mu2;
  const double decay = std::sqrt(-e / c);
  if (system.is_polar()) {
    s.lambda = decay;
  } else {
    s.kappa = decay;
    s.kappa_w = params.m * a / (mu2 * decay);
  }
  return s;
}

namespace {

double eigenfunction_raw(const PhysicalParams& params, const SystemSpec& system, const StateLabel& label,
                         const Coefficients& coeffs, double q) {
  const ClosedFormState s = closed_form_state(params, system, label);
  const double c1 = coeffs.c1;
  const double c2 = coeffs.c2;

  if (system.is_continuum()) {
    const auto& w = std::get<Wavenumber>(label);
    const double nu = *s.nu;
    const double z = w.k * q;
    const BesselKind regular = w.imaginary ? BesselKind::ModifiedFirst : BesselKind::FirstKind;
    const BesselKind irregular = w.imaginary ? BesselKind::ModifiedSecond : BesselKind::SecondKind;
    const double radial = combine(
        c1, [&] { return specfun::bessel(regular, nu, z); }, c2, [&] { return specfun::bessel(irregular, nu, z); });
    return system.is_polar() ? radial : std::sqrt(q) * radial;
  }

  require(c2 == 0.0, ErrorKind::Convention,
          std::string(system.name()) + ": only the regular branch (c2 = 0) is normalizable");
  const auto& qn = std::get<QuantumNumbers>(label);

  if (system.is_harmonic() && !system.is_polar()) {
    const double root_kappa = std::sqrt(*s.kappa);
    return c1 * std::sqrt(q) * std::exp(-0.5 * root_kappa * q * q) *
           specfun::orthopoly(specfun::Hermite{}, qn.n, std::sqrt(root_kappa) * q);
  }
  if (system.is_harmonic()) {
    const double l = qn.l_or_zero();
    const double s_arg = *s.gamma * q * q;
    return c1 * std::pow(q, l + 0.5) * std::exp(-0.5 * s_arg) *
           specfun::orthopoly(specfun::GeneralizedLaguerre{l}, qn.n, s_arg);
  }
  if (!system.is_polar()) {
    return c1 * specfun::whittaker_m(*s.kappa_w, *s.mu_w, 2.0 * *s.kappa * q);
  }
  const double l = qn.l_or_zero();
  const double lambda = *s.lambda;
  return c1 * std::pow(q, l + 0.5) * std::exp(-lambda * q) *
         specfun::orthopoly(specfun::GeneralizedLaguerre{2.0 * l + 1.0}, qn.n, 2.0 * lambda * q);
}

}  // namespace

double eigenfunction(const PhysicalParams& params, const SystemSpec& system, const StateLabel& label,
                     const Coefficients& coeffs, double q) {
  require(std::isfinite(q) && q > 0.0, ErrorKind::Domain, "eigenfunction: coordinate must be positive");
  const double v = eigenfunction_raw(params, system, label, coeffs, q);
  // As printed, polynomial and exponential factors are evaluated separately
  // and can overflow against each other far out or at high n.
  require(std::isfinite(v), ErrorKind::Overflow,
          std::string(system.name()) + ": closed form not representable at q = " + std::to_string(q));
  return v;
}

double coulomb1d_sqrt_variant(const PhysicalParams& params, const SystemSpec& system, int n, double c1, double x) {
  require(system.is_coulomb() && !system.is_polar(), ErrorKind::InvalidSystem,
          "coulomb1d_sqrt_variant: system must be coulomb1d");
  return std::sqrt(x) * eigenfunction(params, system, QuantumNumbers::radial(n), {c1, 0.0}, x);
}

SampledField sample_eigenfunction(const PhysicalParams& params, const SystemSpec& system, const StateLabel& label,
                                  const Coefficients& coeffs, const GridSpec& grid) {
  return SampledField::sample(grid, [&](double q) { return eigenfunction(params, system, label, coeffs, q); });
}

double angular_amplitude(int l, double theta, const Coefficients& coeffs) {
  require(l >= 0, ErrorKind::Domain, "angular_amplitude: l must be non-negative");
  require(std::isfinite(theta) && theta > 0.0, ErrorKind::Domain, "angular_amplitude: theta must be positive");
  if (l == 0) {
    // Theta'' = Theta / (4 theta^2): indicial roots s(s-1) = 1/4.
    const double root = std::sqrt(2.0);
    return combine(
        coeffs.c1, [&] { return std::pow(theta, 0.5 * (1.0 + root)); }, coeffs.c2,
        [&] { return std::pow(theta, 0.5 * (1.0 - root)); });
  }
  const double z = std::sqrt(static_cast<double>(l) * (l + 1.0)) * theta;
  return std::sqrt(theta) *
         combine(
             coeffs.c1, [&] { return specfun::bessel(BesselKind::FirstKind, kBarrierOrder, z); }, coeffs.c2,
             [&] { return specfun::bessel(BesselKind::SecondKind, kBarrierOrder, z); });
}

SampledField normalize(const SampledField& field) {
  const auto x = field.values();
  std::vector<double> sq(x.size());
  std::transform(x.begin(), x.end(), sq.begin(), [](double v) { return v * v; });
  const double norm2 = numerics::simpson(sq, field.spacing());
  require(std::isfinite(norm2) && norm2 > 0.0, ErrorKind::Degenerate,
          "normalize: integral of X^2 is not positive and finite");
  return field.scaled(1.0 / std::sqrt(norm2));
}

std::size_t count_nodes(const SampledField& field) {
  const auto x = field.values();
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::fabs(v));
  if (peak == 0.0) return 0;
  const double floor = 1e-12 * peak;

  std::size_t nodes = 0;
  int last_sign = 0;
  for (double v : x) {
    if (std::fabs(v) < floor) continue;
    const int sign = v > 0.0 ? 1 : -1;
    if (last_sign != 0 && sign != last_sign) ++nodes;
    last_sign = sign;
  }
  return nodes;
}

}  // namespace qreg::analytic
