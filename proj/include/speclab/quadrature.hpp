#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>

#include "speclab/errors.hpp"

namespace speclab {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
    bool converged = true;
};

namespace detail {

template <typename Fn>
void adaptive_simpson_rec(const Fn& f, double a, double b, double fa, double fm, double fb,
                          double whole, double tol, int depth, QuadratureResult& out) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    out.evaluations += 2;
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double diff = left + right - whole;
    if (depth <= 0 || std::abs(diff) <= 15.0 * tol) {
        out.value += left + right + diff / 15.0;
        out.error_estimate += std::abs(diff) / 15.0;
        if (depth <= 0 && std::abs(diff) > 15.0 * tol) out.converged = false;
        return;
    }
    adaptive_simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1, out);
    adaptive_simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1, out);
}

} // namespace detail

// Adaptive Simpson quadrature of a real function over [a, b].
template <typename Fn>
QuadratureResult adaptive_simpson(const Fn& f, double a, double b, double tol = 1e-10,
                                  int max_depth = 40) {
    QuadratureResult out;
    if (a == b) return out;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    out.evaluations = 3;
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth, out);
    return out;
}

struct ComplexQuadratureResult {
    std::complex<double> value{0.0, 0.0};
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
    bool converged = true;
};

// Adaptive Simpson for complex integrands: both components controlled at tol.
template <typename Fn>
ComplexQuadratureResult adaptive_simpson_complex(const Fn& f, double a, double b,
                                                 double tol = 1e-10, int max_depth = 40) {
    auto re = adaptive_simpson([&](double x) { return f(x).real(); }, a, b, tol, max_depth);
    auto im = adaptive_simpson([&](double x) { return f(x).imag(); }, a, b, tol, max_depth);
    ComplexQuadratureResult out;
    out.value = {re.value, im.value};
    out.error_estimate = std::hypot(re.error_estimate, im.error_estimate);
    out.evaluations = re.evaluations + im.evaluations;
    out.converged = re.converged && im.converged;
    return out;
}

} // namespace speclab
