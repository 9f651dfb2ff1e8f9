#include "qreg/variational.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "qreg/analytic.hpp"
#include "qreg/error.hpp"

namespace qreg::variational {

namespace {

IdentityReport summarize(std::string name, const SampledField& field, const std::vector<double>& residuals,
                         std::size_t masked) {
  IdentityReport report;
  report.identity_name = std::move(name);
  report.grid_used = field.spec();
  report.points_evaluated = residuals.size();
  report.points_masked = masked;
  double sum_sq = 0.0;
  for (double r : residuals) {
    report.max_abs = std::max(report.max_abs, r);
    sum_sq += r * r;
  }
  if (!residuals.empty()) report.rms = std::sqrt(sum_sq / static_cast<double>(residuals.size()));
  return report;
}

double max_abs_value(std::span<const double> x) {
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::fabs(v));
  return peak;
}

std::vector<double> squares(std::span<const double> x) {
  std::vector<double> out(x.size());
  std::transform(x.begin(), x.end(), out.begin(), [](double v) { return v * v; });
  return out;
}

}  // namespace

double kinetic_quadrature(const SampledField& field) {
  const auto d = numerics::gradient(field.values(), field.spacing());
  return numerics::simpson(squares(d), field.spacing());
}

double fisher_information(const SampledField& field) {
  const double mass = numerics::simpson(squares(field.values()), field.spacing());
  require(std::isfinite(mass) && mass > 0.0, ErrorKind::Degenerate, "fisher_information: field has zero norm");
  if (std::fabs(mass - 1.0) > 1e-8) {
    std::ostringstream os;
    os.precision(12);
    os << "fisher_information: field not normalized (int X^2 = " << mass << "), normalizing";
    warn(os.str());
    return 4.0 * kinetic_quadrature(analytic::normalize(field));
  }
  return 4.0 * kinetic_quadrature(field);
}

std::size_t QuantumPotential::masked() const {
  return static_cast<std::size_t>(std::count(values.begin(), values.end(), std::nullopt));
}

QuantumPotential quantum_potential(const SampledField& field, const PhysicalParams& params) {
  params.validate();
  const auto x = field.values();
  const double h = field.spacing();
  const double c = params.kinetic_scale();
  const double floor = 1e-12 * max_abs_value(x);

  QuantumPotential out;
  out.grid.assign(field.grid().begin(), field.grid().end());
  out.values.assign(x.size(), std::nullopt);
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    if (std::fabs(x[i]) <= floor) continue;
    // A sample sitting on a node (neighbours of opposite sign, itself at the
    // rounding level) leaves X''/X as 0/0.
    if (x[i - 1] * x[i + 1] < 0.0 && std::fabs(x[i]) < 1e-6 * std::min(std::fabs(x[i - 1]), std::fabs(x[i + 1]))) {
      continue;
    }
    out.values[i] = -c * numerics::second_difference(x, h, i) / x[i];
  }
  return out;
}

IdentityReport energy_identity_residual(const SampledField& field, double energy, const PhysicalParams& params,
                                        const SystemSpec& system, const QuantumNumbers& qn, AmplitudeForm form) {
  qn.validate_for(system);
  const SampledField reduced = to_reduced(field, system, form);
  const QuantumPotential q_pot = quantum_potential(reduced, params);
  std::vector<double> residuals;
  residuals.reserve(reduced.size());
  for (std::size_t i = 0; i < q_pot.values.size(); ++i) {
    if (!q_pot.values[i]) continue;
    const double w = reduced_potential(params, system, qn, q_pot.grid[i]);
    residuals.push_back(std::fabs(w + *q_pot.values[i] - energy));
  }
  return summarize("modified_energy_identity", reduced, residuals, q_pot.masked());
}

IdentityReport continuity_residual(const SampledField& field, const PhysicalParams& params) {
  params.validate();
  const auto q = field.grid();
  const auto x = field.values();
  std::vector<double> flux(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) flux[i] = x[i] * x[i] * guidance_momentum(params, q[i]) / params.m;
  const auto d = numerics::gradient(flux, field.spacing());
  std::vector<double> residuals(d.size());
  std::transform(d.begin(), d.end(), residuals.begin(), [](double v) { return std::fabs(v); });
  return summarize("stationary_continuity", field, residuals, 0);
}

IdentityReport el_condition_residual(const SampledField& momentum, const PhysicalParams& params) {
  params.validate();
  const auto p = momentum.values();
  const double h = momentum.spacing();
  std::vector<double> log_p(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    require(p[i] > 0.0, ErrorKind::Domain, "el_condition_residual: momentum must be positive on the grid");
    log_p[i] = std::log(p[i]);
  }
  const double quarter_mu2 = 0.25 * params.mu * params.mu;
  std::vector<double> residuals;
  residuals.reserve(p.size());
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    residuals.push_back(std::fabs(p[i] * p[i] - quarter_mu2 * numerics::second_difference(log_p, h, i)));
  }
  return summarize("euler_lagrange_closure", momentum, residuals, 0);
}

ActionBreakdown action_breakdown(const SampledField& density, const PhysicalParams& params,
                                 const SystemSpec& system, const QuantumNumbers& qn, double energy) {
  params.validate();
  qn.validate_for(system);
  const auto q = density.grid();
  const auto p = density.values();
  const double h = density.spacing();
  const double c = params.kinetic_scale();

  std::vector<double> amplitude(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    require(p[i] >= 0.0, ErrorKind::Degenerate, "action: density must be non-negative");
    amplitude[i] = std::sqrt(p[i]);
  }
  const double mass = numerics::wall_trapezoid(p, h);
  require(mass > 0.0 && std::isfinite(mass), ErrorKind::Degenerate, "action: density has zero mass");

  ActionBreakdown a;
  double gradient_sq = amplitude.front() * amplitude.front() + amplitude.back() * amplitude.back();
  for (std::size_t i = 0; i + 1 < amplitude.size(); ++i) {
    const double d = amplitude[i + 1] - amplitude[i];
    gradient_sq += d * d;
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double v = system.potential_energy(q[i]);
    a.potential_term += p[i] * v;
    a.barrier_term += p[i] * (reduced_potential(params, system, qn, q[i]) - v);
  }
  // Per unit probability: the discrete mass h sum P divides every term.
  a.potential_term *= h / mass;
  a.barrier_term *= h / mass;
  a.energy_term = -energy;
  a.fisher_term = c * gradient_sq / h / mass;
  return a;
}

double action_per_unit_time(const SampledField& density, const PhysicalParams& params, const SystemSpec& system,
                            const QuantumNumbers& qn, double energy) {
  return action_breakdown(density, params, system, qn, energy).total();
}

StationarityResult action_stationarity_test(const SampledField& density, const PhysicalParams& params,
                                            const SystemSpec& system, const QuantumNumbers& qn, double energy,
                                            const SampledField& perturbation, const std::vector<double>& eps_list) {
  require(perturbation.size() == density.size(), ErrorKind::Domain,
          "action_stationarity_test: perturbation must share the density grid");
  require(eps_list.size() >= 2, ErrorKind::Domain, "action_stationarity_test: need at least two eps values");
  const auto p = density.values();
  const auto dp = perturbation.values();
  const double h = density.spacing();

  const double dp_peak = max_abs_value(dp);
  StationarityResult result;
  result.eps = eps_list;
  if (dp_peak == 0.0) {
    result.delta_action.assign(eps_list.size(), 0.0);
    return result;
  }
  double dp_abs_mass = 0.0;
  for (double v : dp) dp_abs_mass += std::fabs(v) * h;
  require(std::fabs(numerics::wall_trapezoid(dp, h)) <= 1e-10 * dp_abs_mass, ErrorKind::Domain,
          "action_stationarity_test: perturbation must integrate to zero");
  if (std::max(std::fabs(dp.front()), std::fabs(dp.back())) > 1e-3 * dp_peak) {
    warn("action_stationarity_test: perturbation does not vanish at the grid ends");
  }

  const double base = action_per_unit_time(density, params, system, qn, energy);
  double max_eps = 0.0;
  for (double eps : eps_list) {
    std::vector<double> shifted(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      shifted[i] = p[i] + eps * dp[i];
      require(shifted[i] >= 0.0, ErrorKind::Domain, "action_stationarity_test: P + eps dP became negative");
    }
    result.delta_action.push_back(
        action_per_unit_time(density.with_values(std::move(shifted)), params, system, qn, energy) - base);
    max_eps = std::max(max_eps, std::fabs(eps));
  }
  const bool above_floor = std::any_of(result.delta_action.begin(), result.delta_action.end(),
                                       [](double d) { return std::fabs(d) >= 1e-14; });
  require(above_floor, ErrorKind::IllConditioned,
          "action_stationarity_test: action differences below the 1e-14 noise floor");

  // Least squares for dA/eps = a + b eps.
  double s1 = 0.0, sx = 0.0, sxx = 0.0, sy = 0.0, sxy = 0.0;
  for (std::size_t j = 0; j < eps_list.size(); ++j) {
    const double x = eps_list[j];
    const double y = result.delta_action[j] / x;
    s1 += 1.0;
    sx += x;
    sxx += x * x;
    sy += y;
    sxy += x * y;
  }
  const double det = s1 * sxx - sx * sx;
  require(det > 0.0, ErrorKind::IllConditioned, "action_stationarity_test: eps values must be distinct");
  result.first_order = (sxx * sy - sx * sxy) / det;
  result.second_order = (s1 * sxy - sx * sy) / det;
  result.ratio = std::fabs(result.first_order) / (std::fabs(result.second_order) * max_eps);
  return result;
}

SampledField smooth_perturbation(const SampledField& density, std::uint64_t seed) {
  const auto q = density.grid();
  const auto p = density.values();
  const GridSpec spec = density.spec();
  const double left = spec.left_wall();
  // Modes span the effective support of P (all but 1e-10 of its mass) so a
  // state living in a small corner of a wide box is still perturbed.
  double total = 0.0;
  for (double v : p) total += v;
  require(total > 0.0, ErrorKind::Degenerate, "smooth_perturbation: density has zero mass");
  double width = spec.right_wall() - left;
  double running = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    running += p[i];
    if (running >= (1.0 - 1e-10) * total) {
      width = std::min(width, q[i] - left + 8.0 * density.spacing());
      break;
    }
  }

  std::mt19937_64 engine(seed);
  constexpr int kModes = 4;
  double amp[kModes];
  for (double& a : amp) a = (static_cast<double>(engine() >> 11) * 0x1.0p-53 * 2.0 - 1.0) / kModes;

  // Compensating with the positive first mode instead of a constant keeps
  // dP zero at both walls while removing its mass.
  std::vector<double> g(q.size()), base(q.size());
  double weighted = 0.0;
  double base_weighted = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double t = std::numbers::pi * (q[i] - left) / width;
    double s = 0.0;
    for (int j = 0; j < kModes; ++j) s += amp[j] * std::sin((j + 1) * t);
    g[i] = s;
    base[i] = std::sin(t);
    weighted += p[i] * s;
    base_weighted += p[i] * base[i];
  }
  require(base_weighted > 0.0, ErrorKind::Degenerate, "smooth_perturbation: density has zero mass");
  const double c = weighted / base_weighted;
  std::vector<double> dp(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) dp[i] = p[i] * (g[i] - c * base[i]);
  return density.with_values(std::move(dp));
}

}  // namespace qreg::variational
