#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "speclab/errors.hpp"
#include "speclab/grid_function.hpp"

namespace speclab {

inline constexpr double resolvent_pole_tolerance = 1e-10;

// H u = -Laplacian u + V u, with the Laplacian applied as a Fourier
// multiplier.
inline GridFunction apply_hamiltonian(const GridFunction& V, const GridFunction& u) {
    V.require_same_grid(u);
    const Grid& g = u.grid();
    std::vector<complexd> hat, out;
    g.forward(u.values(), hat);
    const auto& mu = g.multipliers();
    for (std::size_t i = 0; i < hat.size(); ++i) hat[i] *= mu[i];
    g.inverse(hat, out);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += V[i] * u[i];
    return GridFunction(g, std::move(out));
}

// (-Laplacian - lambda)^{-1} u, diagonal in the Fourier basis. Throws when
// lambda sits on a multiplier within resolvent_pole_tolerance.
inline GridFunction apply_free_resolvent(complexd lambda, const GridFunction& u) {
    const Grid& g = u.grid();
    const auto& mu = g.multipliers();
    for (double m : mu) {
        if (std::abs(lambda - m) < resolvent_pole_tolerance)
            throw singular_resolvent_error(
                "spectral parameter within tolerance of a discrete Laplacian eigenvalue " +
                    std::to_string(m),
                m);
    }
    std::vector<complexd> hat, out;
    g.forward(u.values(), hat);
    for (std::size_t i = 0; i < hat.size(); ++i) hat[i] /= (mu[i] - lambda);
    g.inverse(hat, out);
    return GridFunction(g, std::move(out));
}

// Spectral projection of -Laplacian onto [0, 1]: zeroes every Fourier
// coefficient with multiplier > 1.
inline GridFunction spectral_projection_low(const GridFunction& u) {
    const Grid& g = u.grid();
    const auto& mu = g.multipliers();
    std::vector<complexd> hat, out;
    g.forward(u.values(), hat);
    for (std::size_t i = 0; i < hat.size(); ++i)
        if (mu[i] > 1.0) hat[i] = complexd{0.0, 0.0};
    g.inverse(hat, out);
    return GridFunction(g, std::move(out));
}

using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

// Dense matrix of H = -Laplacian + V. The kinetic part is circulant, so one
// inverse transform of the multiplier array yields its first column.
inline MatrixXc dense_hamiltonian(const GridFunction& V) {
    const Grid& g = V.grid();
    const std::size_t N = g.size();
    std::vector<complexd> mu_c(N);
    const auto& mu = g.multipliers();
    for (std::size_t i = 0; i < N; ++i) mu_c[i] = complexd{mu[i], 0.0};
    std::vector<complexd> col;
    g.inverse(mu_c, col);

    const int n = g.points_per_axis();
    const int d = g.dimension();
    MatrixXc H(N, N);
    // K_{jl} = col[(j - l) mod n per axis]
    std::vector<int> strides(static_cast<std::size_t>(d), 1);
    for (int a = d - 2; a >= 0; --a)
        strides[static_cast<std::size_t>(a)] =
            strides[static_cast<std::size_t>(a) + 1] * n;
    auto decompose = [&](std::size_t flat, std::array<int, 3>& idx) {
        for (int a = d - 1; a >= 0; --a) {
            idx[static_cast<std::size_t>(a)] = static_cast<int>(flat % static_cast<std::size_t>(n));
            flat /= static_cast<std::size_t>(n);
        }
    };
    std::array<int, 3> ji{}, li{};
    for (std::size_t j = 0; j < N; ++j) {
        decompose(j, ji);
        for (std::size_t l = 0; l < N; ++l) {
            decompose(l, li);
            std::size_t diff = 0;
            for (int a = 0; a < d; ++a) {
                int dd = ji[static_cast<std::size_t>(a)] - li[static_cast<std::size_t>(a)];
                if (dd < 0) dd += n;
                diff += static_cast<std::size_t>(dd) *
                        static_cast<std::size_t>(strides[static_cast<std::size_t>(a)]);
            }
            H(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) = col[diff];
        }
    }
    for (std::size_t j = 0; j < N; ++j)
        H(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) += V[j];
    return H;
}

} // namespace speclab
