#include "sel/quadrature.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "sel/error.hpp"

namespace sel::quad {

namespace bq = boost::math::quadrature;

namespace {

constexpr unsigned kMaxDepth = 18;

double checked(double value, double error, double l1, const char* scheme) {
    if (!std::isfinite(value) || !(error <= 1e-7 * std::max(l1, 1e-300) + 1e-14)) {
        throw Error(Errc::divergence, std::string(scheme) + " failed to converge (estimate " +
                                          std::to_string(value) + ", error " +
                                          std::to_string(error) + ")");
    }
    return value;
}

template <class Fn>
double guarded(Fn&& fn, const char* scheme) {
    try {
        return fn();
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(Errc::divergence, std::string(scheme) + ": " + e.what());
    }
}

}  // namespace

double integrate(const Integrand& f, double a, double b, double rel_tol) {
    if (a == b) return 0.0;
    return guarded(
        [&] {
            double error = 0.0;
            double l1 = 0.0;
            const double value =
                bq::gauss_kronrod<double, 61>::integrate(f, a, b, kMaxDepth, rel_tol, &error, &l1);
            return checked(value, error, l1, "gauss-kronrod");
        },
        "gauss-kronrod");
}

double integrate_singular(const Integrand& f, double a, double b, double rel_tol) {
    if (a == b) return 0.0;
    thread_local bq::tanh_sinh<double> scheme(15);
    return guarded(
        [&] {
            double error = 0.0;
            double l1 = 0.0;
            const double value = scheme.integrate(f, a, b, rel_tol, &error, &l1);
            return checked(value, error, l1, "tanh-sinh");
        },
        "tanh-sinh");
}

double integrate_halfline(const Integrand& f, double a, double rel_tol) {
    thread_local bq::exp_sinh<double> tail_scheme(12);
    const double head = integrate_singular(f, a, a + 1.0, rel_tol);
    const double tail = guarded(
        [&] {
            double error = 0.0;
            double l1 = 0.0;
            const double value = tail_scheme.integrate(f, a + 1.0, std::numeric_limits<double>::infinity(),
                                                       rel_tol, &error, &l1);
            return checked(value, error, l1, "exp-sinh");
        },
        "exp-sinh");
    return head + tail;
}

double integrate_line(const Integrand& f, double rel_tol) {
    thread_local bq::sinh_sinh<double> scheme(12);
    return guarded(
        [&] {
            double error = 0.0;
            double l1 = 0.0;
            const double value = scheme.integrate(f, rel_tol, &error, &l1);
            return checked(value, error, l1, "sinh-sinh");
        },
        "sinh-sinh");
}

}  // namespace sel::quad
