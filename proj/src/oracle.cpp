#include "qreg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "qreg/analytic.hpp"
#include "qreg/error.hpp"

namespace qreg::oracle {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr std::size_t kMinPoints = 64;

// LU factorization of the tridiagonal A - shift with partial pivoting
// (row interchanges create a second superdiagonal).
class ShiftedTridiagonalLU {
 public:
  ShiftedTridiagonalLU(const Discretization& disc, double shift, double pivot_floor)
      : n_(disc.size()), d_(n_), dl_(n_ > 0 ? n_ - 1 : 0, disc.off_diagonal),
        du_(n_ > 0 ? n_ - 1 : 0, disc.off_diagonal), du2_(n_ > 1 ? n_ - 2 : 0, 0.0), pivot_(n_ > 0 ? n_ - 1 : 0) {
    for (std::size_t i = 0; i < n_; ++i) d_[i] = disc.diagonal[i] - shift;
    for (std::size_t i = 0; i + 1 < n_; ++i) {
      pivot_[i] = false;
      if (std::fabs(d_[i]) >= std::fabs(dl_[i])) {
        if (d_[i] == 0.0) d_[i] = pivot_floor;
        const double fact = dl_[i] / d_[i];
        dl_[i] = fact;
        d_[i + 1] -= fact * du_[i];
      } else {
        const double fact = d_[i] / dl_[i];
        d_[i] = dl_[i];
        dl_[i] = fact;
        const double temp = du_[i];
        du_[i] = d_[i + 1];
        d_[i + 1] = temp - fact * d_[i + 1];
        if (i + 2 < n_) {
          du2_[i] = du_[i + 1];
          du_[i + 1] = -fact * du_[i + 1];
        }
        pivot_[i] = true;
      }
    }
    // An exactly singular pivot only means the shift hit an eigenvalue.
    for (double& p : d_) {
      if (std::fabs(p) < pivot_floor) p = std::copysign(pivot_floor, p == 0.0 ? 1.0 : p);
    }
  }

  void solve(std::vector<double>& b) const {
    for (std::size_t i = 0; i + 1 < n_; ++i) {
      if (!pivot_[i]) {
        b[i + 1] -= dl_[i] * b[i];
      } else {
        const double temp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = temp - dl_[i] * b[i];
      }
    }
    b[n_ - 1] /= d_[n_ - 1];
    if (n_ > 1) b[n_ - 2] = (b[n_ - 2] - du_[n_ - 2] * b[n_ - 1]) / d_[n_ - 2];
    for (std::size_t i = n_ >= 2 ? n_ - 2 : 0; i-- > 0;) {
      b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) / d_[i];
    }
  }

 private:
  std::size_t n_;
  std::vector<double> d_, dl_, du_, du2_;
  std::vector<bool> pivot_;
};

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void scale(std::vector<double>& a, double factor) {
  for (double& v : a) v *= factor;
}

// Gram-Schmidt (twice) against the lower eigenvectors in the Euclidean
// product under which the discrete eigenvectors are orthogonal.
void orthogonalize(std::vector<double>& v, std::span<const SampledField> lower) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const SampledField& f : lower) {
      const auto u = f.values();
      const double uu = dot(u, u);
      if (uu == 0.0) continue;
      const double coeff = dot(v, u) / uu;
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= coeff * u[i];
    }
  }
}

std::vector<double> apply(const Discretization& disc, std::span<const double> v) {
  const std::size_t n = disc.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = disc.diagonal[i] * v[i];
    if (i > 0) s += disc.off_diagonal * v[i - 1];
    if (i + 1 < n) s += disc.off_diagonal * v[i + 1];
    out[i] = s;
  }
  return out;
}

double relative_residual(const Discretization& disc, std::span<const double> v, double lambda) {
  auto av = apply(disc, v);
  for (std::size_t i = 0; i < av.size(); ++i) av[i] -= lambda * v[i];
  return norm(av) / (disc.norm_bound() * norm(v));
}

// Portable deterministic start vector in (-1, 1).
std::vector<double> start_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::vector<double> v(n);
  for (double& x : v) x = static_cast<double>(engine() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
  return v;
}

template <class Fn>
Discretization assemble(const GridSpec& grid, double c, Fn&& potential) {
  grid.validate();
  require(grid.points >= kMinPoints, ErrorKind::Domain, "discretize: grid needs at least 64 points");
  Discretization disc;
  disc.grid = grid;
  disc.coordinates = grid.coordinates();
  disc.kinetic_scale = c;
  const double h = grid.spacing();
  const double kinetic = c / (h * h);
  disc.off_diagonal = -kinetic;
  disc.diagonal.resize(grid.points);
  for (std::size_t i = 0; i < grid.points; ++i) {
    disc.diagonal[i] = 2.0 * kinetic + potential(disc.coordinates[i]);
    require(std::isfinite(disc.diagonal[i]), ErrorKind::Domain, "discretize: non-finite diagonal entry");
  }
  return disc;
}

ResidualReport residual_core(const SampledField& field, double c, double energy,
                             const std::vector<double>& potential, Stencil stencil) {
  const auto x = field.values();
  const double h = field.spacing();
  const std::size_t n = x.size();
  const std::size_t margin = stencil == Stencil::ThreePoint ? 1 : 3;
  require(n >= 2 * margin + 1 && n >= 5, ErrorKind::Domain, "ode_residual: field too short for the stencil");
  require(std::isfinite(energy), ErrorKind::Domain, "ode_residual: energy must be finite");
  require(std::any_of(x.begin(), x.end(), [](double v) { return v != 0.0; }), ErrorKind::Degenerate,
          "ode_residual: field is identically zero");

  ResidualReport report;
  double max_abs = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = margin; i + margin < n; ++i) {
    const double d2 = stencil == Stencil::ThreePoint ? numerics::second_difference(x, h, i)
                                                     : numerics::second_derivative_6(x, h, i);
    const double kinetic = c * d2;
    const double r = std::fabs(kinetic - (potential[i] - energy) * x[i]);
    report.scale = std::max(report.scale, std::fabs(kinetic));
    max_abs = std::max(max_abs, r);
    sum_sq += r * r;
    ++report.points;
  }
  require(report.scale > 0.0 && std::isfinite(report.scale), ErrorKind::Degenerate,
          "ode_residual: kinetic term vanishes on the interior");
  report.max_relative = max_abs / report.scale;
  report.rms_relative = std::sqrt(sum_sq / static_cast<double>(report.points)) / report.scale;
  return report;
}

}  // namespace

double Discretization::norm_bound() const {
  double bound = 0.0;
  for (std::size_t i = 0; i < diagonal.size(); ++i) {
    const double neighbours = (i > 0 ? 1.0 : 0.0) + (i + 1 < diagonal.size() ? 1.0 : 0.0);
    bound = std::max(bound, std::fabs(diagonal[i]) + neighbours * std::fabs(off_diagonal));
  }
  return bound;
}

double Discretization::potential_at_end() const { return diagonal.back() + 2.0 * off_diagonal; }

Discretization discretize(const PhysicalParams& params, const SystemSpec& system, const QuantumNumbers& qn,
                          const GridSpec& grid, bool include_barrier) {
  params.validate();
  qn.validate_for(system);
  Discretization disc = assemble(grid, params.kinetic_scale(), [&](double q) {
    return reduced_potential(params, system, qn, q, include_barrier);
  });
  disc.boxed = system.is_continuum();
  return disc;
}

Discretization discretize_angular(const GridSpec& theta_grid) {
  Discretization disc = assemble(theta_grid, 1.0, [](double theta) { return 0.25 / (theta * theta); });
  disc.boxed = true;
  return disc;
}

std::size_t sturm_count(const Discretization& disc, double lambda) {
  const double b2 = disc.off_diagonal * disc.off_diagonal;
  const double tiny = kEps * (std::fabs(disc.off_diagonal) + std::fabs(lambda)) + std::numeric_limits<double>::min();
  std::size_t count = 0;
  double d = 1.0;
  for (std::size_t i = 0; i < disc.size(); ++i) {
    d = disc.diagonal[i] - lambda - (i > 0 ? b2 / d : 0.0);
    if (d == 0.0) d = -tiny;
    if (d < 0.0) ++count;
  }
  return count;
}

double eigenvalue(const Discretization& disc, std::size_t k) {
  require(k < disc.size(), ErrorKind::Domain, "eigenvalue: index out of range");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < disc.size(); ++i) {
    const double radius = ((i > 0) + (i + 1 < disc.size())) * std::fabs(disc.off_diagonal);
    lo = std::min(lo, disc.diagonal[i] - radius);
    hi = std::max(hi, disc.diagonal[i] + radius);
  }
  const double pad = kEps * std::max(std::fabs(lo), std::fabs(hi)) + std::numeric_limits<double>::min();
  lo -= pad;
  hi += pad;

  for (int iter = 0; iter < 2000; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(disc, mid) > k) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

EigenResult eigenpair(const Discretization& disc, std::size_t k, std::span<const SampledField> lower) {
  require(k < disc.size(), ErrorKind::Domain, "eigenpair: index out of range");
  const double lambda = eigenvalue(disc, k);
  const double a_norm = disc.norm_bound();
  const double pivot_floor = kEps * a_norm;
  const std::size_t n = disc.size();

  std::vector<double> best;
  double best_residual = std::numeric_limits<double>::infinity();
  constexpr int kRetries = 4;
  for (int attempt = 0; attempt < kRetries && best_residual > 1e-8; ++attempt) {
    const double shift = lambda + (attempt == 0 ? 0.0 : (attempt % 2 ? 1.0 : -1.0) * attempt * 1e-10 * a_norm);
    const ShiftedTridiagonalLU lu(disc, shift, pivot_floor);
    std::vector<double> v = start_vector(n, 0x9E3779B97F4A7C15ULL + 7919 * k + attempt);
    orthogonalize(v, lower);
    scale(v, 1.0 / norm(v));
    for (int iter = 0; iter < 5; ++iter) {
      lu.solve(v);
      orthogonalize(v, lower);
      const double nv = norm(v);
      if (!(nv > 0.0) || !std::isfinite(nv)) break;
      scale(v, 1.0 / nv);
      // Two sweeps first: the second makes the tail componentwise accurate.
      if (iter >= 1) {
        const double r = relative_residual(disc, v, lambda);
        if (r < best_residual) {
          best_residual = r;
          best = v;
        }
        if (iter >= 2 && r <= 1e-8) break;
      }
    }
  }
  if (best.empty() || best_residual > 1e-8) {
    std::ostringstream os;
    os << "eigenpair: inverse iteration did not converge for index " << k << " (residual " << best_residual
       << ")";
    fail(ErrorKind::NonConvergence, os.str());
  }

  // Deterministic sign: first significant sample positive.
  double peak = 0.0;
  for (double x : best) peak = std::max(peak, std::fabs(x));
  for (double x : best) {
    if (std::fabs(x) >= 1e-12 * peak) {
      if (x < 0.0) scale(best, -1.0);
      break;
    }
  }

  EigenResult result;
  result.index = k;
  result.energy_oracle = lambda;
  result.residual_norm = best_residual;
  result.eigenvector = analytic::normalize(SampledField(disc.coordinates, std::move(best)));
  result.node_count = analytic::count_nodes(result.eigenvector);
  result.grid_levels = {{disc.spacing(), lambda}};
  result.extrapolated_energy = lambda;

  const auto values = result.eigenvector.values();
  double vmax = 0.0;
  for (double x : values) vmax = std::max(vmax, std::fabs(x));
  result.tail_ratio = std::fabs(values.back()) / vmax;
  result.warnings = disc.warnings;
  if (!disc.boxed) {
    std::ostringstream os;
    os.precision(6);
    if (result.tail_ratio >= 1e-8) {
      os << "index " << k << ": |X(q_max)|/max|X| = " << result.tail_ratio << " >= 1e-8 (domain truncation visible)";
      result.warnings.push_back(os.str());
      os.str("");
    }
    if (disc.potential_at_end() <= lambda) {
      os << "index " << k << ": W(q_max) = " << disc.potential_at_end() << " does not exceed E = " << lambda;
      result.warnings.push_back(os.str());
    }
  }
  return result;
}

std::vector<EigenResult> lowest_eigenpairs(const Discretization& disc, std::size_t count) {
  require(count <= disc.size(), ErrorKind::Domain, "lowest_eigenpairs: more states than grid points");
  std::vector<EigenResult> out;
  std::vector<SampledField> lower;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    out.push_back(eigenpair(disc, k, lower));
    lower.push_back(out.back().eigenvector);
  }
  return out;
}

ResidualReport ode_residual(const SampledField& field, double energy, const PhysicalParams& params,
                            const SystemSpec& system, const QuantumNumbers& qn, AmplitudeForm form,
                            Stencil stencil) {
  params.validate();
  qn.validate_for(system);
  const SampledField reduced = to_reduced(field, system, form);
  std::vector<double> w;
  w.reserve(reduced.size());
  for (double q : reduced.grid()) w.push_back(reduced_potential(params, system, qn, q));
  return residual_core(reduced, params.kinetic_scale(), energy, w, stencil);
}

ResidualReport angular_residual(const SampledField& theta_field, int l, Stencil stencil) {
  require(l >= 0, ErrorKind::Domain, "angular_residual: l must be non-negative");
  std::vector<double> w;
  w.reserve(theta_field.size());
  for (double theta : theta_field.grid()) w.push_back(0.25 / (theta * theta));
  return residual_core(theta_field, 1.0, static_cast<double>(l) * (l + 1.0), w, stencil);
}

double rayleigh_quotient(const SampledField& field, const PhysicalParams& params, const SystemSpec& system,
                         const QuantumNumbers& qn, AmplitudeForm form) {
  params.validate();
  qn.validate_for(system);
  const SampledField reduced = to_reduced(field, system, form);
  const auto q = reduced.grid();
  const auto x = reduced.values();
  const double h = reduced.spacing();
  const double c = params.kinetic_scale();

  double gradient_sq = x.front() * x.front() + x.back() * x.back();  // wall edges
  double potential = 0.0;
  double norm2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i + 1 < x.size()) {
      const double d = x[i + 1] - x[i];
      gradient_sq += d * d;
    }
    potential += reduced_potential(params, system, qn, q[i]) * x[i] * x[i];
    norm2 += x[i] * x[i];
  }
  require(norm2 > 0.0 && std::isfinite(norm2), ErrorKind::Degenerate, "rayleigh_quotient: field has zero norm");
  const double value = (c * gradient_sq / (h * h) + potential) / norm2;
  require(std::isfinite(value), ErrorKind::Degenerate, "rayleigh_quotient: non-finite quotient");
  return value;
}

std::vector<double> error_exponents(const SystemSpec& system, const QuantumNumbers& qn, bool include_barrier) {
  const double b = reduced_barrier_strength(system, qn, include_barrier);
  const double singular = std::sqrt(std::max(0.0, 1.0 + 4.0 * b));  // 2s - 1
  std::vector<double> exponents{2.0, 4.0, 6.0};
  const bool integral = std::fabs(singular - std::round(singular)) < 1e-12;
  if (singular > 0.0 && !integral) {
    exponents.push_back(singular);
    exponents.push_back(singular + 2.0);
  }
  std::sort(exponents.begin(), exponents.end());
  return exponents;
}

double richardson(std::span<const double> energies, std::span<const double> exponents) {
  require(!energies.empty(), ErrorKind::Domain, "richardson: no energies");
  require(exponents.size() + 1 >= energies.size(), ErrorKind::Domain, "richardson: too few exponents");
  std::vector<double> row(energies.begin(), energies.end());
  for (std::size_t j = 0; j + 1 < energies.size(); ++j) {
    const double factor = std::pow(2.0, exponents[j]) - 1.0;
    for (std::size_t i = row.size() - 1; i > j; --i) row[i] = row[i] + (row[i] - row[i - 1]) / factor;
  }
  return row.back();
}

EigenResult refine_and_extrapolate(const PhysicalParams& params, const SystemSpec& system, const QuantumNumbers& qn,
                                   std::size_t k, const GridSpec& base_grid, int levels, bool include_barrier) {
  require(levels >= 2 && levels <= 4, ErrorKind::Domain, "refine_and_extrapolate: levels must be in [2, 4]");
  GridSpec grid = base_grid;
  std::vector<GridLevel> history;
  std::vector<double> energies;
  EigenResult finest;
  for (int level = 0; level < levels; ++level) {
    const Discretization disc = discretize(params, system, qn, grid, include_barrier);
    auto pairs = lowest_eigenpairs(disc, k + 1);
    finest = std::move(pairs.back());
    history.push_back({disc.spacing(), finest.energy_oracle});
    energies.push_back(finest.energy_oracle);
    grid = grid.halved();
  }
  finest.grid_levels = history;
  finest.extrapolated_energy = richardson(energies, error_exponents(system, qn, include_barrier));
  return finest;
}

GridSpec default_grid(const PhysicalParams& params, const SystemSpec& system, const QuantumNumbers& qn,
                      std::size_t points) {
  params.validate();
  qn.validate_for(system);
  if (system.is_continuum()) return GridSpec::box(1.0, points);
  if (system.is_harmonic()) {
    const double ks = std::get<potential::Harmonic>(system.potential()).ks;
    const double length = std::pow(params.mu * params.mu / (params.m * ks), 0.25);
    return GridSpec::box(20.0 * length, points);
  }
  const double alpha = std::get<potential::Coulomb>(system.potential()).alpha;
  const double bohr = params.mu * params.mu / (params.m * alpha);
  const double n_eff = system.is_polar() ? qn.n + qn.l_or_zero() + 1.0 : qn.n + analytic::kCoulomb1dShift;
  return GridSpec::box(bohr * std::max(60.0, 15.0 * n_eff * n_eff), points);
}

}  // namespace qreg::oracle
