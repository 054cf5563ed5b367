#pragma once

#include <functional>

// Adaptive quadrature front end. All routines throw Errc::divergence when the
// scheme cannot certify the requested accuracy.

namespace sel::quad {

using Integrand = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (61 point) on a finite interval.
double integrate(const Integrand& f, double a, double b, double rel_tol = 1e-13);

/// Tanh-sinh on a finite interval; tolerates integrable endpoint singularities.
double integrate_singular(const Integrand& f, double a, double b, double rel_tol = 1e-13);

/// Integral over [a, inf): tanh-sinh on [a, a + 1], exp-sinh on the tail.
double integrate_halfline(const Integrand& f, double a = 0.0, double rel_tol = 1e-13);

/// Integral over the whole real line (sinh-sinh).
double integrate_line(const Integrand& f, double rel_tol = 1e-13);

}  // namespace sel::quad
