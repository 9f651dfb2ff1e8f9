#pragma once

// Real-order special functions used by the closed-form eigenstates.
//
// All arguments are real. Bessel functions of imaginary argument are reached
// through the modified kinds rather than complex arithmetic.

#include <variant>

namespace qreg::specfun {

enum class BesselKind { FirstKind, SecondKind, ModifiedFirst, ModifiedSecond };

/// J_nu, Y_nu, I_nu or K_nu at x > 0.
///
/// Accurate to ~1e-10 relative for x in [1e-6, 1e3] and nu in [0, 50].
/// Values that overflow near x -> 0 (Y, K) are returned as +-infinity
/// instead of raising. Negative orders are accepted for the recurrence
/// identities (J_{-1} = -J_1 etc.).
double bessel(BesselKind kind, double nu, double x);

/// d/dx of bessel(kind, nu, x) from the order-lowering recurrence
///   C'_nu = C_{nu-1} - (nu/x) C_nu        (J, Y, I)
///   K'_nu = -K_{nu-1} - (nu/x) K_nu
double bessel_derivative(BesselKind kind, double nu, double x);

/// k-th positive zero j_{nu,k} of J_nu (k >= 1), absolute accuracy 1e-10.
double bessel_zero(double nu, int k);

struct Hermite {};
struct GeneralizedLaguerre {
  double a = 0.0;  // must satisfy a > -1
};
using OrthoPolyKind = std::variant<Hermite, GeneralizedLaguerre>;

/// Physicists' Hermite H_n(x) or generalized Laguerre L_n^{(a)}(x) by the
/// three-term recurrence.
double orthopoly(const OrthoPolyKind& kind, int n, double x);

/// Rising factorial (a)_n = a (a+1) ... (a+n-1), (a)_0 = 1.
double pochhammer(double a, int n);

/// Kummer's confluent hypergeometric function M(a; b; z) = 1F1(a; b; z).
///
/// Terminating series (a = 0, -1, -2, ...) are summed exactly. For z < 0
/// the Kummer transformation e^z M(b-a; b; -z) is used so that the summed
/// series has no cancellation. Throws Overflow when the value is not
/// representable, Domain when b is a pole that the series does not avoid.
double kummer_m(double a, double b, double z);

/// Whittaker M_{kappa,mu}(z) = e^{-z/2} z^{mu+1/2} M(mu - kappa + 1/2; 1 + 2 mu; z).
double whittaker_m(double kappa, double mu, double z);

}  // namespace qreg::specfun
