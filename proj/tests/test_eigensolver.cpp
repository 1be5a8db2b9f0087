#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "speclab/eigensolver.hpp"
#include "speclab/linalg.hpp"
#include "speclab/potential.hpp"

using namespace speclab;

namespace {

MatrixXc random_matrix(Eigen::Index n, std::uint64_t seed, double scale = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    MatrixXc A(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) A(i, j) = scale * complexd(u(rng), u(rng));
    return A;
}

} // namespace

TEST_CASE("dense solve of a diagonal matrix") {
    MatrixXc A = MatrixXc::Zero(2, 2);
    A(0, 0) = complexd{1.5, -0.5};
    A(1, 1) = complexd{-2.0, 1.0};
    auto res = dense_eigenvalues(A);
    auto match = match_spectra(res.eigenvalues, {A(0, 0), A(1, 1)});
    CHECK(match.max_distance < 1e-12);
    CHECK(res.max_residual() < 1e-8);
}

TEST_CASE("nilpotent Jordan block has a double zero eigenvalue") {
    MatrixXc A = MatrixXc::Zero(2, 2);
    A(0, 1) = 1.0;
    auto res = dense_eigenvalues(A);
    REQUIRE(res.eigenvalues.size() == 2);
    CHECK(std::abs(res.eigenvalues[0]) < 1e-8);
    CHECK(std::abs(res.eigenvalues[1]) < 1e-8);
}

TEST_CASE("random 6x6 spectrum matches characteristic polynomial roots") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        MatrixXc A = random_matrix(6, seed);
        auto res = dense_eigenvalues(A);
        auto roots = oracles::poly_roots(oracles::char_poly(A));
        auto match = match_spectra(res.eigenvalues, roots);
        CHECK(match.counts_equal);
        CHECK(match.max_distance < 1e-7);
    }
}

TEST_CASE("eigenvalue sum equals the trace") {
    MatrixXc A = random_matrix(20, 77);
    auto res = dense_eigenvalues(A);
    complexd sum{0.0, 0.0};
    for (complexd z : res.eigenvalues) sum += z;
    CHECK(std::abs(sum - A.trace()) < 1e-8 * A.norm());
}

TEST_CASE("spectrum of the adjoint is the conjugated spectrum") {
    MatrixXc A = random_matrix(12, 5);
    auto res = dense_eigenvalues(A);
    auto res_adj = dense_eigenvalues(MatrixXc(A.adjoint()));
    std::vector<complexd> conjugated;
    for (complexd z : res.eigenvalues) conjugated.push_back(std::conj(z));
    auto match = match_spectra(res_adj.eigenvalues, conjugated);
    CHECK(match.max_distance < 1e-9);
}

TEST_CASE("similarity transforms preserve the spectrum") {
    MatrixXc A = random_matrix(20, 13);
    MatrixXc P = MatrixXc::Identity(20, 20) + 0.3 * random_matrix(20, 14);
    MatrixXc B = P.inverse() * A * P;
    auto ra = dense_eigenvalues(A);
    auto rb = dense_eigenvalues(B);
    auto match = match_spectra(ra.eigenvalues, rb.eigenvalues);
    CHECK(match.max_distance < 1e-6);
}

TEST_CASE("dense solve rejects bad input") {
    CHECK_THROWS_AS(dense_eigenvalues(random_matrix(3, 1), DenseSolveOptions{.dense_limit = 2}),
                    validation_error);
    MatrixXc bad = random_matrix(3, 2);
    bad(1, 1) = complexd(std::numeric_limits<double>::quiet_NaN(), 0.0);
    CHECK_THROWS_AS(dense_eigenvalues(bad), validation_error);
}

TEST_CASE("shift-invert picks the diagonal entry nearest the shift") {
    VectorXc diag(3);
    diag << complexd{1.0, 0.0}, complexd{2.0, 0.0}, complexd{10.0, 0.0};
    ApplyFn apply = [&](const VectorXc& x, VectorXc& y) { y = diag.asDiagonal() * x; };
    auto res = shift_invert_eigenvalues(apply, 3, complexd{1.9, 0.0}, 1);
    REQUIRE(res.eigenvalues.size() == 1);
    CHECK(std::abs(res.eigenvalues[0] - complexd{2.0, 0.0}) < 1e-9);
    CHECK(res.max_residual() < 1e-8);
}

TEST_CASE("shift-invert on the free grid operator finds the lowest multipliers") {
    Grid g(1, 64, 6.0);
    GridFunction zero(g);
    ApplyFn apply = [&](const VectorXc& x, VectorXc& y) {
        GridFunction u(g, std::vector<complexd>(x.data(), x.data() + x.size()));
        auto hu = apply_hamiltonian(zero, u);
        y = Eigen::Map<const VectorXc>(hu.values().data(),
                                       static_cast<Eigen::Index>(hu.size()));
    };
    auto res = shift_invert_eigenvalues(apply, static_cast<Eigen::Index>(g.size()),
                                        complexd{-1.0, 0.0}, 3);
    std::vector<double> mus(g.multipliers());
    std::sort(mus.begin(), mus.end());
    std::vector<complexd> expected{complexd{mus[0], 0.0}, complexd{mus[1], 0.0},
                                   complexd{mus[2], 0.0}};
    auto match = match_spectra(res.eigenvalues, expected);
    CHECK(match.max_distance < 1e-8);
}

TEST_CASE("shift-invert agrees with the dense path on a complex well") {
    Grid g(1, 96, 8.0);
    auto V = sample_potential(WellPotential{complexd{-1.0, -0.4}, 1.0}, g);
    auto dense = dense_eigenvalues(dense_hamiltonian(V));
    complexd sigma{-0.5, -0.2};
    ApplyFn apply = [&](const VectorXc& x, VectorXc& y) {
        GridFunction u(g, std::vector<complexd>(x.data(), x.data() + x.size()));
        auto hu = apply_hamiltonian(V, u);
        y = Eigen::Map<const VectorXc>(hu.values().data(),
                                       static_cast<Eigen::Index>(hu.size()));
    };
    ShiftInvertOptions opts;
    opts.preconditioner = [&](const VectorXc& x, VectorXc& y) {
        GridFunction u(g, std::vector<complexd>(x.data(), x.data() + x.size()));
        auto ru = apply_free_resolvent(sigma, u);
        y = Eigen::Map<const VectorXc>(ru.values().data(),
                                       static_cast<Eigen::Index>(ru.size()));
    };
    auto krylov = shift_invert_eigenvalues(apply, static_cast<Eigen::Index>(g.size()), sigma,
                                           1, opts);
    REQUIRE(krylov.eigenvalues.size() == 1);
    double best = 1e300;
    for (complexd z : dense.eigenvalues) best = std::min(best, std::abs(z - krylov.eigenvalues[0]));
    CHECK(best < 1e-7);
}

TEST_CASE("free potential has no off-axis eigenvalues") {
    Grid g(1, 64, 6.0);
    GridFunction zero(g);
    auto res = discrete_eigenvalues_offaxis(zero, 1e-2);
    CHECK(res.eigenvalues.empty());
    CHECK(res.discarded_near_axis.size() == g.size());
}

TEST_CASE("real well bound state matches the transcendental oracle") {
    Grid g(1, 256, 20.0);
    auto V = sample_potential(WellPotential{complexd{-1.0, 0.0}, 1.0}, g);
    auto res = discrete_eigenvalues_offaxis(V, 1e-2);
    REQUIRE(res.eigenvalues.size() == 1);
    complexd oracle =
        oracles::square_well_even_state(complexd{1.0, 0.0}, 1.0, complexd{-0.45, 0.0});
    CHECK(std::abs(oracle - complexd{-0.453753165860328, 0.0}) < 1e-12);
    CHECK(std::abs(res.eigenvalues[0] - oracle) < 5e-3);
    CHECK(res.residuals[0] < 1e-8);
}

TEST_CASE("narrow complex well approaches the point-interaction limit") {
    // depth * width = -(1+2i) fixed; E -> -c^2/4 = (3-4i)/4 as width -> 0
    Grid g(1, 1024, 8.0);
    complexd c{1.0, 2.0};
    complexd limit = -c * c / 4.0;
    CHECK(std::abs(limit - complexd{0.75, -1.0}) < 1e-15);
    double prev_gap = 1e300;
    for (double w : {0.4, 0.2, 0.1}) {
        auto V = sample_potential(WellPotential{-c / w, w / 2.0}, g);
        OffAxisOptions opts;
        opts.dense.dense_limit = 2048;
        auto res = discrete_eigenvalues_offaxis(V, 1e-2, opts);
        REQUIRE(!res.eigenvalues.empty());
        complexd oracle = oracles::square_well_even_state(c / w, w / 2.0, limit);
        double best = 1e300;
        complexd found;
        for (complexd z : res.eigenvalues) {
            if (std::abs(z - oracle) < best) {
                best = std::abs(z - oracle);
                found = z;
            }
        }
        CHECK(best < 2e-2);
        double gap = std::abs(found - limit);
        CHECK(gap < prev_gap + 1e-6);
        prev_gap = gap;
    }
    CHECK(prev_gap < 0.2);
}
