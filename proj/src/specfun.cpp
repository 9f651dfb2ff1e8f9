#include "qreg/specfun.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include <boost/math/policies/policy.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/tools/roots.hpp>

#include "qreg/error.hpp"

namespace qreg::specfun {

namespace {

namespace bmp = boost::math::policies;

// Divergent values near the origin are part of the contract, so overflow
// returns infinity; genuine evaluation failures still throw.
using BesselPolicy = bmp::policy<bmp::overflow_error<bmp::ignore_error>,
                                 bmp::underflow_error<bmp::ignore_error>,
                                 bmp::promote_double<false>>;

std::string describe(const char* what, double value) {
  std::ostringstream os;
  os.precision(17);
  os << what << " = " << value;
  return os.str();
}

bool is_nonpositive_integer(double v) { return v <= 0.0 && std::floor(v) == v; }

}  // namespace

double bessel(BesselKind kind, double nu, double x) {
  require(std::isfinite(nu), ErrorKind::Domain, describe("bessel: non-finite order nu", nu));
  require(std::isfinite(x), ErrorKind::Domain, describe("bessel: non-finite argument x", x));
  require(x > 0.0, ErrorKind::Domain, describe("bessel: argument must be positive, x", x));

  const BesselPolicy pol;
  try {
    switch (kind) {
      case BesselKind::FirstKind: return boost::math::cyl_bessel_j(nu, x, pol);
      case BesselKind::SecondKind: return boost::math::cyl_neumann(nu, x, pol);
      case BesselKind::ModifiedFirst: return boost::math::cyl_bessel_i(nu, x, pol);
      case BesselKind::ModifiedSecond: return boost::math::cyl_bessel_k(std::fabs(nu), x, pol);
    }
  } catch (const std::domain_error& e) {
    fail(ErrorKind::Domain, std::string("bessel: ") + e.what());
  } catch (const boost::math::evaluation_error& e) {
    fail(ErrorKind::NonConvergence, std::string("bessel: ") + e.what());
  }
  fail(ErrorKind::Domain, "bessel: unknown kind");
}

double bessel_derivative(BesselKind kind, double nu, double x) {
  const double lower = bessel(kind, nu - 1.0, x);
  const double value = bessel(kind, nu, x);
  if (kind == BesselKind::ModifiedSecond) return -lower - nu / x * value;
  return lower - nu / x * value;
}

double bessel_zero(double nu, int k) {
  require(std::isfinite(nu) && nu >= 0.0, ErrorKind::Domain,
          describe("bessel_zero: order must be finite and >= 0, nu", nu));
  require(k >= 1, ErrorKind::Domain, "bessel_zero: root index k must be >= 1");

  auto j = [nu](double x) { return bessel(BesselKind::FirstKind, nu, x); };

  // J_nu > 0 on (0, j_{nu,1}) and j_{nu,1} > nu; consecutive zeros are more
  // than 3 apart for nu >= 0, so a unit step never skips a sign change.
  constexpr double step = 1.0;
  double left = std::max(nu, 1e-3);
  double f_left = j(left);
  int found = 0;
  for (int guard = 0; guard < 1000000; ++guard) {
    const double right = left + step;
    const double f_right = j(right);
    if (f_right == 0.0) {
      if (++found == k) return right;
      left = right + 1e-9;
      f_left = j(left);
      continue;
    }
    if (std::signbit(f_left) != std::signbit(f_right)) {
      if (++found == k) {
        std::uintmax_t iterations = 200;
        const auto tol = boost::math::tools::eps_tolerance<double>(52);
        const auto [lo, hi] =
            boost::math::tools::toms748_solve(j, left, right, f_left, f_right, tol, iterations);
        return 0.5 * (lo + hi);
      }
    }
    left = right;
    f_left = f_right;
  }
  fail(ErrorKind::NonConvergence, "bessel_zero: root scan exhausted");
}

double orthopoly(const OrthoPolyKind& kind, int n, double x) {
  require(n >= 0, ErrorKind::Domain, "orthopoly: degree n must be >= 0");
  require(std::isfinite(x), ErrorKind::Domain, describe("orthopoly: non-finite argument x", x));

  if (std::holds_alternative<Hermite>(kind)) {
    double prev = 1.0;
    if (n == 0) return prev;
    double curr = 2.0 * x;
    for (int k = 1; k < n; ++k) {
      const double next = 2.0 * x * curr - 2.0 * k * prev;
      prev = curr;
      curr = next;
    }
    return curr;
  }

  const double a = std::get<GeneralizedLaguerre>(kind).a;
  require(std::isfinite(a) && a > -1.0, ErrorKind::Domain,
          describe("orthopoly: Laguerre parameter must exceed -1, a", a));
  double prev = 1.0;
  if (n == 0) return prev;
  double curr = 1.0 + a - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + a - x) * curr - (k + a) * prev) / (k + 1.0);
    prev = curr;
    curr = next;
  }
  return curr;
}

double pochhammer(double a, int n) {
  require(n >= 0, ErrorKind::Domain, "pochhammer: n must be >= 0");
  double product = 1.0;
  for (int j = 0; j < n; ++j) product *= a + j;
  return product;
}

namespace {

// Plain power series for z >= 0 (or any z when it terminates).
double kummer_series(double a, double b, double z) {
  constexpr int max_terms = 100000;
  const bool terminates = is_nonpositive_integer(a);
  const int last = terminates ? static_cast<int>(-a) : max_terms;

  double term = 1.0;
  double sum = 1.0;
  for (int j = 0; j < last; ++j) {
    term *= (a + j) / (b + j) * z / (j + 1.0);
    sum += term;
    if (!std::isfinite(sum) || !std::isfinite(term)) {
      fail(ErrorKind::Overflow, "kummer_m: series exceeds representable range");
    }
    if (!terminates && std::fabs(term) <= std::numeric_limits<double>::epsilon() * 0.25 * std::fabs(sum) &&
        std::fabs((a + j + 1.0) * z) < std::fabs((b + j + 1.0) * (j + 2.0))) {
      return sum;
    }
  }
  if (!terminates) fail(ErrorKind::NonConvergence, "kummer_m: series did not converge");
  return sum;
}

}  // namespace

double kummer_m(double a, double b, double z) {
  require(std::isfinite(a) && std::isfinite(b) && std::isfinite(z), ErrorKind::Domain,
          "kummer_m: non-finite argument");
  if (is_nonpositive_integer(b)) {
    // (b)_j vanishes for j > -b; only a polynomial ending before that is defined.
    const bool safe = is_nonpositive_integer(a) && -a <= -b;
    require(safe, ErrorKind::Domain, describe("kummer_m: b is a non-positive integer pole, b", b));
  }
  if (z == 0.0) return 1.0;
  if (is_nonpositive_integer(a) || z > 0.0) return kummer_series(a, b, z);

  // z < 0: M(a; b; z) = e^z M(b - a; b; -z) keeps the summed terms of one sign.
  const double transformed = kummer_series(b - a, b, -z);
  const double value = std::exp(z) * transformed;
  if (!std::isfinite(value)) fail(ErrorKind::Overflow, "kummer_m: value exceeds representable range");
  return value;
}

double whittaker_m(double kappa, double mu, double z) {
  require(std::isfinite(z) && z > 0.0, ErrorKind::Domain,
          describe("whittaker_m: argument must be positive, z", z));
  const double b = 1.0 + 2.0 * mu;
  require(!is_nonpositive_integer(b), ErrorKind::Domain,
          describe("whittaker_m: 1 + 2 mu must not be a non-positive integer, mu", mu));
  const double m = kummer_m(mu - kappa + 0.5, b, z);
  // Combine in log space; e^{-z/2} and M can each be huge for large z.
  const double log_prefactor = -0.5 * z + (mu + 0.5) * std::log(z);
  const double value = std::exp(log_prefactor) * m;
  if (!std::isfinite(value)) fail(ErrorKind::Overflow, "whittaker_m: value exceeds representable range");
  return value;
}

}  // namespace qreg::specfun
