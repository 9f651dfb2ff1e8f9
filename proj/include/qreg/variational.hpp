#pragma once

// Information-theoretic and field-equation diagnostics on sampled amplitudes:
// Fisher information, quantum potential, the modified energy identity, the
// stationary continuity and Euler-Lagrange residuals, and the stationary
// action with its first-variation test.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qreg/grid.hpp"
#include "qreg/model.hpp"

namespace qreg::variational {

struct IdentityReport {
  std::string identity_name;
  double max_abs = 0.0;
  double rms = 0.0;
  GridSpec grid_used;
  std::size_t points_evaluated = 0;
  std::size_t points_masked = 0;
};

/// I[P] = 4 int (X')^2 dq with X = sqrt(P). A field that is not normalized
/// (|int X^2 - 1| > 1e-8) is normalized first and a warning is emitted.
double fisher_information(const SampledField& field);

/// int (X')^2 dq: central differences + Simpson.
double kinetic_quadrature(const SampledField& field);

/// Q(q) = -(mu^2/2m) X''/X on the interior (three-point stencil). Endpoints
/// and points with |X| <= 1e-12 max|X| are masked (std::nullopt), as are
/// samples on a node: opposite-sign neighbours and |X| < 1e-6 of both.
struct QuantumPotential {
  std::vector<double> grid;
  std::vector<std::optional<double>> values;
  std::size_t masked() const;
};
QuantumPotential quantum_potential(const SampledField& field, const PhysicalParams& params);

/// Pointwise |W + Q - E| where W is the reduced potential (mu^2/(8mq^2) + V in 1D).
IdentityReport energy_identity_residual(const SampledField& field, double energy, const PhysicalParams& params,
                                        const SystemSpec& system, const QuantumNumbers& qn,
                                        AmplitudeForm form = AmplitudeForm::Reduced);

/// d/dq(X^2 p)/m with p = mu/(2q); vanishes iff P is proportional to q.
IdentityReport continuity_residual(const SampledField& field, const PhysicalParams& params);

/// |p^2 - (mu^2/4)(p'/p)'| with (p'/p)' taken as the second difference of ln p.
/// Truncation is about mu^2 h^2 / (8 q^4) for p = mu/(2q).
IdentityReport el_condition_residual(const SampledField& momentum, const PhysicalParams& params);

/// Stationary action per unit time,
///   A = int P (-E + W) dq + (mu^2/2m) int (d sqrt(P)/dq)^2 dq,
/// evaluated with the wall-trapezoid measure and forward differences so that
/// A(E = 0) reproduces the Rayleigh quotient of sqrt(P) for normalized P.
struct ActionBreakdown {
  double energy_term = 0.0;     // -E int P
  double barrier_term = 0.0;    // int P (W - V): information barrier (+ centrifugal in 2D)
  double potential_term = 0.0;  // int P V
  double fisher_term = 0.0;     // (mu^2/2m) int (X')^2 = (mu^2/8m) I[P]
  double classical() const { return energy_term + barrier_term + potential_term; }
  double total() const { return classical() + fisher_term; }
};
ActionBreakdown action_breakdown(const SampledField& density, const PhysicalParams& params,
                                 const SystemSpec& system, const QuantumNumbers& qn, double energy);
double action_per_unit_time(const SampledField& density, const PhysicalParams& params, const SystemSpec& system,
                            const QuantumNumbers& qn, double energy);

struct StationarityResult {
  std::vector<double> eps;
  std::vector<double> delta_action;
  double first_order = 0.0;   // a in dA = a eps + b eps^2
  double second_order = 0.0;  // b
  double ratio = 0.0;         // |a| / (|b| max eps); 0 for a null perturbation
  bool stationary() const { return ratio < 1e-2; }
};

/// Fits A[P + eps dP] - A[P] = a eps + b eps^2 over eps_list. Requires dP to
/// vanish at both ends and integrate to zero (wall-trapezoid measure).
/// A null perturbation returns all-zero differences; otherwise differences
/// below 1e-14 raise IllConditioned.
StationarityResult action_stationarity_test(const SampledField& density, const PhysicalParams& params,
                                            const SystemSpec& system, const QuantumNumbers& qn, double energy,
                                            const SampledField& perturbation,
                                            const std::vector<double>& eps_list = {1e-2, 1e-3, 1e-4});

/// Smooth mass-preserving perturbation dP = P (g - c s1): g is a seeded sum of
/// four sine modes over the effective support of P (from the left wall to
/// where all but 1e-10 of the mass is enclosed), s1 the first of them and
/// c = <g>_P / <s1>_P.
SampledField smooth_perturbation(const SampledField& density, std::uint64_t seed);

}  // namespace qreg::variational
