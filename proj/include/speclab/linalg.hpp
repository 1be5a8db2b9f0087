#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "speclab/grid.hpp"

namespace speclab {

// Largest singular value. Works through the Gram matrix on the smaller side,
// so tall-thin and short-wide matrices cost O(min^2 max).
inline double spectral_norm(const Eigen::MatrixXcd& M) {
    if (M.rows() == 0 || M.cols() == 0) return 0.0;
    Eigen::MatrixXcd gram;
    if (M.rows() <= M.cols())
        gram = M * M.adjoint();
    else
        gram = M.adjoint() * M;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
    double lmax = es.eigenvalues().maxCoeff();
    return lmax > 0.0 ? std::sqrt(lmax) : 0.0;
}

// Operator norm of a Hermitian matrix (largest |eigenvalue|).
inline double hermitian_norm(const Eigen::MatrixXcd& A) {
    if (A.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
}

// || M1^* M1 - M2^* M2 || without forming the N x N difference. The
// difference is B^* J B with B = [M1; M2] and J = diag(+I, -I); its nonzero
// spectrum (real) equals that of the small matrix J B B^*.
inline double gram_difference_norm(const Eigen::MatrixXcd& M1, const Eigen::MatrixXcd& M2) {
    const Eigen::Index k1 = M1.rows(), k2 = M2.rows();
    if (k1 + k2 == 0) return 0.0;
    Eigen::MatrixXcd B(k1 + k2, M1.cols());
    B.topRows(k1) = M1;
    B.bottomRows(k2) = M2;
    Eigen::MatrixXcd S = B * B.adjoint();
    S.bottomRows(k2) *= -1.0;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(S, false);
    double best = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        best = std::max(best, std::abs(es.eigenvalues()[i].real()));
    return best;
}

struct MatchResult {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    double max_distance = 0.0;
    double total_distance = 0.0;
    bool counts_equal = true;
};

namespace detail {

// Hungarian algorithm with potentials; minimizes the total assignment cost
// of a square matrix. cost(i, j) indexed row-major.
inline std::vector<int> hungarian(const std::vector<std::vector<double>>& cost) {
    const int n = static_cast<int>(cost.size());
    const double INF = std::numeric_limits<double>::infinity();
    std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0),
        v(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<int> p(static_cast<std::size_t>(n) + 1, 0),
        way(static_cast<std::size_t>(n) + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(n) + 1, INF);
        std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
        do {
            used[static_cast<std::size_t>(j0)] = 1;
            int i0 = p[static_cast<std::size_t>(j0)];
            double delta = INF;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                double cur = cost[static_cast<std::size_t>(i0 - 1)][static_cast<std::size_t>(j - 1)] -
                             u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (p[static_cast<std::size_t>(j0)] != 0);
        do {
            int j1 = way[static_cast<std::size_t>(j0)];
            p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> row_of_col(static_cast<std::size_t>(n), -1);
    for (int j = 1; j <= n; ++j)
        row_of_col[static_cast<std::size_t>(j - 1)] = p[static_cast<std::size_t>(j)] - 1;
    return row_of_col;
}

} // namespace detail

// Pairs up two eigenvalue multisets by |a_i - b_j|. Equal counts use optimal
// assignment; unequal counts fall back to greedy nearest pairs over the
// smaller set.
inline MatchResult match_spectra(const std::vector<complexd>& a, const std::vector<complexd>& b) {
    MatchResult res;
    res.counts_equal = (a.size() == b.size());
    if (a.empty() || b.empty()) return res;
    if (res.counts_equal) {
        const std::size_t n = a.size();
        std::vector<std::vector<double>> cost(n, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) cost[i][j] = std::abs(a[i] - b[j]);
        auto row_of_col = detail::hungarian(cost);
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t i = static_cast<std::size_t>(row_of_col[j]);
            res.pairs.emplace_back(i, j);
            double d = cost[i][j];
            res.total_distance += d;
            res.max_distance = std::max(res.max_distance, d);
        }
        return res;
    }
    std::vector<char> ua(a.size(), 0), ub(b.size(), 0);
    std::size_t want = std::min(a.size(), b.size());
    while (res.pairs.size() < want) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (ua[i]) continue;
            for (std::size_t j = 0; j < b.size(); ++j) {
                if (ub[j]) continue;
                double d = std::abs(a[i] - b[j]);
                if (d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        }
        ua[bi] = 1;
        ub[bj] = 1;
        res.pairs.emplace_back(bi, bj);
        res.total_distance += best;
        res.max_distance = std::max(res.max_distance, best);
    }
    return res;
}

} // namespace speclab
