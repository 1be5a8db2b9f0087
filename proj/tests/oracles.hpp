// Test-side reference computations, independent of the library code paths
// they are used to check.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "speclab/grid_function.hpp"

namespace oracles {

using speclab::complexd;

// Characteristic polynomial coefficients c[0] + c[1] x + ... + c[n] x^n of
// det(xI - A) by the Faddeev-LeVerrier recursion.
inline std::vector<complexd> char_poly(const Eigen::MatrixXcd& A) {
    const Eigen::Index n = A.rows();
    std::vector<complexd> c(static_cast<std::size_t>(n) + 1, complexd{0.0, 0.0});
    c[static_cast<std::size_t>(n)] = 1.0;
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(n, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        Eigen::MatrixXcd AM = A * M;
        complexd ck = -AM.trace() / static_cast<double>(k);
        c[static_cast<std::size_t>(n - k)] = ck;
        M = AM + ck * Eigen::MatrixXcd::Identity(n, n);
    }
    return c;
}

// Durand-Kerner simultaneous root iteration; coefficients ordered as in
// char_poly. Assumes a nonzero leading coefficient.
inline std::vector<complexd> poly_roots(std::vector<complexd> c, int max_iter = 2000,
                                        double tol = 1e-14) {
    const std::size_t n = c.size() - 1;
    for (std::size_t i = 0; i < c.size(); ++i) c[i] /= c[n];
    std::vector<complexd> z(n);
    complexd seed{0.4, 0.9};
    complexd acc{1.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        acc *= seed;
        z[i] = acc;
    }
    auto eval = [&](complexd x) {
        complexd p = c[n];
        for (std::size_t k = n; k-- > 0;) p = p * x + c[k];
        return p;
    };
    for (int it = 0; it < max_iter; ++it) {
        double move = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            complexd denom{1.0, 0.0};
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) denom *= (z[i] - z[j]);
            complexd dz = eval(z[i]) / denom;
            z[i] -= dz;
            move = std::max(move, std::abs(dz));
        }
        if (move < tol) break;
    }
    return z;
}

// Even bound state of the 1D square well V = -V0 on |x| <= a: secant solve of
// k tan(k a) = sqrt(-E) with k = sqrt(V0 + E). Works for complex V0.
inline complexd square_well_even_state(complexd V0, double a, complexd guess) {
    auto f = [&](complexd E) {
        complexd k = std::sqrt(V0 + E);
        return k * std::tan(k * a) - std::sqrt(-E);
    };
    complexd x0 = guess;
    complexd x1 = guess * 1.001 + complexd{1e-5, 1e-5};
    complexd f0 = f(x0), f1 = f(x1);
    for (int it = 0; it < 200; ++it) {
        complexd dx = f1 * (x1 - x0) / (f1 - f0);
        x0 = x1;
        f0 = f1;
        x1 = x1 - dx;
        f1 = f(x1);
        if (std::abs(dx) < 1e-14 * (1.0 + std::abs(x1))) break;
    }
    return x1;
}

// Closed-form ||Gamma_rho||^2 in d = 1 from the rank-2 Gram of the two
// exponentials: (2 pi)^{-1} (int W^2 dx + |int W^2 e^{2 i rho x} dx|), grid
// sums standing in for the integrals.
inline double gamma_norm2_1d(const speclab::GridFunction& W, double rho) {
    double s0 = 0.0;
    complexd s2{0.0, 0.0};
    const auto& g = W.grid();
    for (std::size_t j = 0; j < g.size(); ++j) {
        double w2 = std::norm(W[j]);
        s0 += w2;
        s2 += w2 * std::polar(1.0, 2.0 * rho * g.point(j)[0]);
    }
    double h = g.cell_volume();
    return (s0 * h + std::abs(s2 * h)) / (2.0 * std::numbers::pi);
}

// int_1^inf drho / (rho^2 - lambda) with s = sqrt(-lambda), Re s > 0.
inline complexd shell_weight_integral(complexd lambda) {
    complexd s = std::sqrt(-lambda);
    return (std::numbers::pi / 2.0 - std::atan(1.0 / s)) / s;
}

} // namespace oracles
