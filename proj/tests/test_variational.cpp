#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qreg/analytic.hpp"
#include "qreg/error.hpp"
#include "qreg/oracle.hpp"
#include "qreg/variational.hpp"

using namespace qreg;
using namespace qreg::variational;
using doctest::Approx;

namespace {
const PhysicalParams kUnit{1.0, 1.0};

SampledField density_of(const SampledField& x) {
  std::vector<double> p(x.values().begin(), x.values().end());
  for (double& v : p) v *= v;
  return x.with_values(std::move(p));
}

SampledField gaussian(double sigma, double centre, const GridSpec& g) {
  return SampledField::sample(g, [=](double q) {
    return std::pow(2 * std::numbers::pi * sigma * sigma, -0.25) * std::exp(-(q - centre) * (q - centre) / (4 * sigma * sigma));
  });
}

int warnings_seen = 0;
void count_warning(std::string_view) { ++warnings_seen; }
}  // namespace

TEST_CASE("fisher information of Gaussians") {
  const GridSpec g{0.01, 20.0, 4000};
  // Unit variance: I = 1/sigma^2 = 1.
  CHECK(fisher_information(gaussian(1.0, 10.0, g)) == Approx(1.0).epsilon(1e-4));
  // pi^{-1/4} e^{-x^2/2} has variance 1/2, hence I = 2.
  const SampledField half = SampledField::sample(g, [](double q) {
    return std::pow(std::numbers::pi, -0.25) * std::exp(-(q - 10) * (q - 10) / 2);
  });
  CHECK(fisher_information(half) == Approx(2.0).epsilon(1e-4));
  // Definition identity with the kinetic quadrature.
  const auto f = gaussian(0.7, 9.0, g);
  CHECK(std::fabs(fisher_information(f) - 4 * kinetic_quadrature(f)) < 1e-12);
  // P_lambda(x) = lambda P(lambda x) -> I scales by lambda^2.
  const auto narrow = gaussian(0.5, 10.0, g);
  CHECK(fisher_information(narrow) == Approx(4.0 * fisher_information(gaussian(1.0, 10.0, g))).epsilon(1e-3));
}

TEST_CASE("fisher information: constant field and auto-normalization") {
  const GridSpec g = GridSpec::box(1.0, 1001);
  const SampledField c = SampledField::sample(g, [](double) { return 1.0; });
  CHECK(fisher_information(c) >= 0.0);
  CHECK(fisher_information(c) < 1e-10);
  warnings_seen = 0;
  auto old = set_warning_sink(&count_warning);
  const double scaled = fisher_information(gaussian(1.0, 10.0, GridSpec{0.01, 20.0, 4000}).scaled(3.0));
  set_warning_sink(old);
  CHECK(warnings_seen == 1);
  CHECK(scaled == Approx(1.0).epsilon(1e-4));
}

TEST_CASE("Cramer-Rao equality for the Gaussian") {
  const GridSpec g{0.01, 20.0, 4000};
  for (double sigma : {0.6, 1.0, 1.5}) {
    const auto f = gaussian(sigma, 10.0, g);
    std::vector<double> m1(f.size()), m2(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double p = f.values()[i] * f.values()[i];
      m1[i] = f.grid()[i] * p;
      m2[i] = f.grid()[i] * f.grid()[i] * p;
    }
    const double mean = numerics::simpson(m1, f.spacing());
    const double var = numerics::simpson(m2, f.spacing()) - mean * mean;
    CHECK(std::fabs(var * fisher_information(f) - 1.0) < 2e-3);
  }
}

TEST_CASE("quantum potential") {
  const GridSpec g{1e-3, 6.0, 6000};
  const SampledField x = SampledField::sample(g, [](double q) { return std::exp(-q * q / 2); });
  const auto qp = quantum_potential(x, kUnit);
  REQUIRE(qp.values[1]);
  CHECK(*qp.values[1] == Approx(0.5).epsilon(1e-5));
  for (std::size_t i = 1; i + 1 < qp.values.size(); i += 250) {
    REQUIRE(qp.values[i]);
    const double q = qp.grid[i];
    CHECK(*qp.values[i] == Approx(-(q * q - 1) / 2).epsilon(1e-5));
  }
  CHECK_FALSE(qp.values.front());
  CHECK_FALSE(qp.values.back());

  const SampledField c = SampledField::sample(g, [](double) { return 2.0; });
  for (const auto& v : quantum_potential(c, kUnit).values) {
    if (v) CHECK(*v == 0.0);
  }
  // Points below 1e-12 max|X| are masked and counted.
  const SampledField dip = SampledField::sample(GridSpec{0.1, 1.0, 10}, [](double q) { return q < 0.45 ? 1e-14 : 1.0; });
  CHECK(quantum_potential(dip, kUnit).masked() >= 4);
}

TEST_CASE("energy identity on oracle eigenvectors") {
  const SystemSpec sys = SystemSpec::coulomb1d(1.0);
  const auto qn = QuantumNumbers::radial(0);
  const auto d = oracle::discretize(kUnit, sys, qn, oracle::default_grid(kUnit, sys, qn, 8000));
  const auto e = oracle::eigenpair(d, 0);
  const auto rep = energy_identity_residual(e.eigenvector, e.energy_oracle, kUnit, sys, qn);
  CHECK(rep.max_abs < 1e-5 * std::fabs(e.energy_oracle));
  CHECK(rep.max_abs >= rep.rms);
  CHECK(rep.rms >= 0.0);
  const auto shifted = energy_identity_residual(e.eigenvector, e.energy_oracle + 0.1, kUnit, sys, qn);
  CHECK(shifted.max_abs == Approx(0.1).epsilon(1e-3));

  // Pointwise form of the same statement: W + Q = E.
  const auto qp = quantum_potential(e.eigenvector, kUnit);
  for (std::size_t i = 1; i + 1 < qp.values.size(); i += 101) {
    if (!qp.values[i]) continue;
    CHECK(std::fabs(reduced_potential(kUnit, sys, qn, qp.grid[i]) + *qp.values[i] - e.energy_oracle) < 1e-5);
  }
}

TEST_CASE("energy identity: every oracle eigenpair after one refinement, nodes included") {
  for (auto name : system_names()) {
    CAPTURE(name);
    const SystemSpec sys = make_system(name, 1.0, 1.0, 0.0);
    const QuantumNumbers qn = sys.is_polar() ? QuantumNumbers::polar(0, 0) : QuantumNumbers::radial(0);
    const auto grid = oracle::default_grid(kUnit, sys, qn, 2000).halved();
    const auto pairs = oracle::lowest_eigenpairs(oracle::discretize(kUnit, sys, qn, grid), 4);
    for (const auto& e : pairs) {
      const auto rep = energy_identity_residual(e.eigenvector, e.energy_oracle, kUnit, sys, qn);
      CHECK(rep.max_abs < 1e-4 * (std::fabs(e.energy_oracle) + 1.0));
    }
  }
}

TEST_CASE("printed harmonic form in the energy identity is reported") {
  const SystemSpec sys = SystemSpec::harmonic1d(1.0);
  const auto qn = QuantumNumbers::radial(0);
  const auto f = analytic::sample_eigenfunction(kUnit, sys, qn, {}, GridSpec{0.01, 10.0, 2000});
  const auto rep = energy_identity_residual(f, 0.5, kUnit, sys, qn);
  CHECK(rep.identity_name == "modified_energy_identity");
  CHECK(std::isfinite(rep.max_abs));
  CHECK(rep.max_abs > 1e-2);
}

TEST_CASE("continuity residual") {
  const GridSpec g{0.1, 5.0, 500};
  const auto lin = SampledField::sample(g, [](double q) { return std::sqrt(0.3 * q); });
  CHECK(continuity_residual(lin, kUnit).max_abs < 1e-8);
  const auto flat = SampledField::sample(g, [](double) { return 1.0; });
  const auto rep = continuity_residual(flat, kUnit);
  // d/dq (mu / 2q) / m = -mu / (2 m q^2); largest at the first interior point.
  CHECK(rep.max_abs == Approx(0.5 / (0.1 * 0.1)).epsilon(2e-2));
  const auto h = analytic::normalize(analytic::sample_eigenfunction(kUnit, SystemSpec::harmonic1d(1.0),
                                                                    QuantumNumbers::radial(0), {}, g));
  CHECK(continuity_residual(h, kUnit).max_abs > 1e-2);
}

TEST_CASE("Euler-Lagrange condition residual") {
  const GridSpec g{10.0, 100.0, 9001};
  const auto good = SampledField::sample(g, [](double q) { return guidance_momentum(kUnit, q); });
  CHECK(el_condition_residual(good, kUnit).max_abs < 1e-8);
  const auto constant = SampledField::sample(GridSpec{1.0, 3.0, 50}, [](double) { return 0.8; });
  CHECK(el_condition_residual(constant, kUnit).max_abs == Approx(0.64).epsilon(1e-14));
  const PhysicalParams p{1.0, 1.5};
  const GridSpec g2{1.0, 4.0, 3001};
  const auto wrong = SampledField::sample(g2, [&](double q) { return p.mu / q; });
  const auto rep = el_condition_residual(wrong, p);
  // Worst at q = 1 + h: 0.75 mu^2 / q^2.
  CHECK(rep.max_abs == Approx(0.75 * p.mu * p.mu / std::pow(1.0 + g2.spacing(), 2)).epsilon(1e-5));
  const auto negative = SampledField::sample(GridSpec{1.0, 3.0, 50}, [](double) { return -1.0; });
  CHECK_THROWS_AS(el_condition_residual(negative, kUnit), Error);
}

TEST_CASE("action per unit time") {
  const SystemSpec sys = SystemSpec::harmonic2d(1.0);
  const auto qn = QuantumNumbers::polar(0, 1);
  const auto d = oracle::discretize(kUnit, sys, qn, oracle::default_grid(kUnit, sys, qn, 3000));
  const auto e = oracle::eigenpair(d, 0);
  const auto dens = density_of(e.eigenvector);
  CHECK(std::fabs(action_per_unit_time(dens, kUnit, sys, qn, e.energy_oracle)) < 1e-6);
  CHECK(action_per_unit_time(dens, kUnit, sys, qn, 0.0) ==
        Approx(oracle::rayleigh_quotient(e.eigenvector, kUnit, sys, qn)).epsilon(1e-10));

  const auto trial = density_of(SampledField::sample(d.grid, [](double r) { return r * std::exp(-r * r / 3); }));
  const auto b1 = action_breakdown(trial, kUnit, sys, qn, 0.4);
  const auto b2 = action_breakdown(trial, {1.0, 2.0}, sys, qn, 0.4);
  CHECK(b2.barrier_term == Approx(4 * b1.barrier_term).epsilon(1e-12));
  CHECK(b2.fisher_term == Approx(4 * b1.fisher_term).epsilon(1e-12));
  CHECK(std::fabs(b1.classical() + b1.fisher_term - b1.total()) < 1e-12);
  CHECK(std::fabs(b1.total() - action_per_unit_time(trial, kUnit, sys, qn, 0.4)) < 1e-12);
}

TEST_CASE("action stationarity") {
  const SystemSpec sys = SystemSpec::harmonic1d(1.0);
  const auto qn = QuantumNumbers::radial(0);
  const GridSpec g = oracle::default_grid(kUnit, sys, qn, 3000);
  const auto e = oracle::eigenpair(oracle::discretize(kUnit, sys, qn, g), 0);
  const auto p = density_of(e.eigenvector);
  const auto dp = smooth_perturbation(p, 7);
  double peak = 0.0;
  for (double v : dp.values()) peak = std::max(peak, std::fabs(v));
  CHECK(std::fabs(dp.values().front()) < 1e-6 * peak);
  CHECK(std::fabs(dp.values().back()) < 1e-6 * peak);
  CHECK(std::fabs(numerics::wall_trapezoid(dp.values(), dp.spacing())) < 1e-14);
  const auto st = action_stationarity_test(p, kUnit, sys, qn, e.energy_oracle, dp);
  CHECK(st.stationary());
  CHECK(std::fabs(st.first_order) < 1e-2 * std::fabs(st.second_order) * 1e-2);

  // Ground density of a stiffer oscillator is not stationary for this one.
  const SystemSpec other = SystemSpec::harmonic1d(4.0);
  const auto eo = oracle::eigenpair(oracle::discretize(kUnit, other, qn, g), 0);
  const auto po = density_of(eo.eigenvector);
  const auto moved = action_stationarity_test(po, kUnit, sys, qn, e.energy_oracle, smooth_perturbation(po, 7));
  CHECK(moved.ratio > 10 * 1e-2);

  const auto zero = dp.scaled(0.0);
  const auto z = action_stationarity_test(p, kUnit, sys, qn, e.energy_oracle, zero);
  for (double v : z.delta_action) CHECK(v == 0.0);

  std::vector<double> bad(dp.values().begin(), dp.values().end());
  for (double& v : bad) v += 1e-3;
  CHECK_THROWS_AS(action_stationarity_test(p, kUnit, sys, qn, e.energy_oracle, dp.with_values(bad)), Error);
}

TEST_CASE("action stationarity on all six oracle ground states") {
  for (auto name : system_names()) {
    CAPTURE(name);
    const SystemSpec sys = make_system(name, 1.0, 1.0, 0.0);
    const QuantumNumbers qn = sys.is_polar() ? QuantumNumbers::polar(0, 0) : QuantumNumbers::radial(0);
    const auto e = oracle::eigenpair(oracle::discretize(kUnit, sys, qn, oracle::default_grid(kUnit, sys, qn, 3000)), 0);
    const auto p = density_of(e.eigenvector);
    const auto st = action_stationarity_test(p, kUnit, sys, qn, e.energy_oracle, smooth_perturbation(p, 11));
    CHECK(st.ratio < 1e-2);
  }
}
