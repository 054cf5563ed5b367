#pragma once

// Real-argument special functions shared by every other module.

namespace sel::special {

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;
inline constexpr double pi = 3.14159265358979323846264338327950288;

/// ln Gamma(x) for x > 0 (Lanczos, g = 7, 9 coefficients).
double ln_gamma(double x);

/// Gamma(x) for x > 0; overflow error past the double range.
double gamma_fn(double x);

/// psi(x) = d/dx ln Gamma(x) for x > 0.
double digamma(double x);

/// H_n = 1 + 1/2 + ... + 1/n, H_0 = 0.
double harmonic(int n);

/// Modified Bessel function of the first kind I_alpha(z), alpha >= -1/2, z >= 0.
/// Power series below z = 15, large-argument asymptotic expansion above.
double bessel_i(double alpha, double z);

/// ln I_alpha(z); stays finite where bessel_i would overflow.
double log_bessel_i(double alpha, double z);

/// Generalized Laguerre polynomial L_n^alpha(u) by the three-term recurrence.
double laguerre(int n, double alpha, double u);

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed without cancellation.
double gamma_q(double a, double x);

}  // namespace sel::special
