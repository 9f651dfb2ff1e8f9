#pragma once

// Finite-difference ground truth for the regularized eigenproblems.
//
// The reduced problem -(mu^2/2m) X'' + W(q) X = E X is discretized with the
// three-point Laplacian on a uniform grid with Dirichlet walls one spacing
// outside the grid. The resulting symmetric tridiagonal matrix is solved by
// Sturm-sequence bisection (index-certified eigenvalues) and inverse
// iteration (eigenvectors).

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qreg/grid.hpp"
#include "qreg/model.hpp"

namespace qreg::oracle {

struct Discretization {
  GridSpec grid;
  std::vector<double> coordinates;
  std::vector<double> diagonal;  // 2c/h^2 + W(q_i)
  double off_diagonal = 0.0;     // -c/h^2
  double kinetic_scale = 0.0;    // c = mu^2 / (2m)
  bool boxed = false;            // walls are physical (free1d, const2d)
  std::vector<std::string> warnings;

  std::size_t size() const { return diagonal.size(); }
  double spacing() const { return grid.spacing(); }
  /// Gershgorin bound on the infinity norm.
  double norm_bound() const;
  /// W at the last grid point.
  double potential_at_end() const;
};

/// Requires >= 64 points. include_barrier = false drops mu^2/(8 m q^2).
Discretization discretize(const PhysicalParams& params, const SystemSpec& system, const QuantumNumbers& qn,
                          const GridSpec& grid, bool include_barrier = true);

/// -Theta'' + Theta / (4 theta^2) on a theta grid (eigenvalues l(l+1)).
Discretization discretize_angular(const GridSpec& theta_grid);

/// Number of eigenvalues strictly below lambda.
std::size_t sturm_count(const Discretization& disc, double lambda);

/// k-th smallest eigenvalue (0-based) by bisection to full double precision.
double eigenvalue(const Discretization& disc, std::size_t k);

struct GridLevel {
  double spacing = 0.0;
  double energy = 0.0;
};

struct EigenResult {
  std::size_t index = 0;
  double energy_oracle = 0.0;
  SampledField eigenvector;  // Simpson-normalized, first significant sample positive
  std::size_t node_count = 0;
  std::vector<GridLevel> grid_levels;
  double extrapolated_energy = 0.0;
  double residual_norm = 0.0;  // ||(A - E) v|| / ||A|| for the unit vector v
  double tail_ratio = 0.0;     // |X(q_max)| / max|X|
  std::vector<std::string> warnings;
};

/// k-th eigenpair; `lower` holds the eigenvectors of indices 0..k-1 (any
/// normalization) which the iterate is kept orthogonal to. Throws
/// NonConvergence if inverse iteration cannot reach
/// ||(A - E) v|| <= 1e-8 ||A|| after retries with perturbed shifts.
EigenResult eigenpair(const Discretization& disc, std::size_t k, std::span<const SampledField> lower = {});

/// Eigenpairs 0..count-1 in order.
std::vector<EigenResult> lowest_eigenpairs(const Discretization& disc, std::size_t count);

enum class Stencil {
  ThreePoint,  // the operator the oracle discretizes
  SixthOrder,  // seven-point, for checking closed forms against the continuum ODE
};

struct ResidualReport {
  double max_relative = 0.0;
  double rms_relative = 0.0;
  double scale = 0.0;  // max |c X''| over the evaluated points
  std::size_t points = 0;
};

/// |c X'' - (W - E) X| relative to max|c X''| over interior points, where W
/// is the reduced potential. Polar-form fields are converted to u = sqrt(r) rho.
ResidualReport ode_residual(const SampledField& field, double energy, const PhysicalParams& params,
                            const SystemSpec& system, const QuantumNumbers& qn,
                            AmplitudeForm form = AmplitudeForm::Reduced, Stencil stencil = Stencil::SixthOrder);

/// Residual of Theta'' + (l(l+1) - 1/(4 theta^2)) Theta = 0, same normalization.
ResidualReport angular_residual(const SampledField& theta_field, int l, Stencil stencil = Stencil::SixthOrder);

/// [c sum (dX/h)^2 + sum W X^2] / sum X^2 with X = 0 at both walls: the
/// discrete form of the stationary action, equal to v^T A v / v^T v.
double rayleigh_quotient(const SampledField& field, const PhysicalParams& params, const SystemSpec& system,
                         const QuantumNumbers& qn, AmplitudeForm form = AmplitudeForm::Reduced);

/// Error exponents of the k-th eigenvalue under grid halving. Near q = 0 the
/// solutions behave like q^s with s = 1/2 + sqrt(1/4 + b) for a barrier b/q^2,
/// which adds an h^{2s-1} term whenever s is not an integer.
std::vector<double> error_exponents(const SystemSpec& system, const QuantumNumbers& qn,
                                    bool include_barrier = true);

/// Neville-Richardson tableau for energies on successively halved grids.
double richardson(std::span<const double> energies, std::span<const double> exponents);

/// Solves on `levels` successively halved grids (2 <= levels <= 4) and
/// extrapolates; the returned eigenvector lives on the finest grid.
EigenResult refine_and_extrapolate(const PhysicalParams& params, const SystemSpec& system, const QuantumNumbers& qn,
                                   std::size_t k, const GridSpec& base_grid, int levels,
                                   bool include_barrier = true);

/// Default truncated domain: box length 1 for free1d/const2d, 20 oscillator
/// lengths for harmonic, max(60, 15 n_eff^2) Bohr-like lengths mu^2/(m alpha)
/// for Coulomb.
GridSpec default_grid(const PhysicalParams& params, const SystemSpec& system, const QuantumNumbers& qn,
                      std::size_t points = 4000);

}  // namespace qreg::oracle
