#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "speclab/operators.hpp"
#include "speclab/potential.hpp"

using namespace speclab;

namespace {

GridFunction random_function(const Grid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    GridFunction f(g);
    for (std::size_t j = 0; j < g.size(); ++j) f[j] = complexd(u(rng), u(rng));
    return f;
}

} // namespace

TEST_CASE("Fourier modes are kinetic eigenvectors") {
    Grid g(1, 32, 5.0);
    GridFunction zero(g);
    for (std::size_t lex : {std::size_t{3}, std::size_t{16}, std::size_t{20}}) {
        auto e = GridFunction::fourier_mode(g, lex);
        auto he = apply_hamiltonian(zero, e);
        double mu = g.multiplier_lex(lex);
        double err = (he - mu * e).norm();
        CHECK(err < 1e-10 * (1.0 + mu));
    }
}

TEST_CASE("constant potential acts linearly") {
    Grid g(1, 32, 5.0);
    GridFunction zero(g);
    GridFunction c(g);
    complexd cval{0.7, -0.3};
    for (std::size_t j = 0; j < g.size(); ++j) c[j] = cval;
    auto u = random_function(g, 3);
    auto lhs = apply_hamiltonian(c, u);
    auto rhs = apply_hamiltonian(zero, u) + cval * u;
    CHECK((lhs - rhs).norm() < 1e-12 * u.norm());
}

TEST_CASE("minus-Laplacian kills the constant mode") {
    Grid g(1, 64, 6.0);
    auto V = sample_potential(WellPotential{complexd{-1.0, 0.0}, 1.0}, g);
    auto e0 = GridFunction::fourier_mode(g, g.size() / 2); // m = 0
    REQUIRE(g.multiplier_lex(g.size() / 2) == 0.0);
    auto he = apply_hamiltonian(V, e0);
    auto expected = hadamard(V, e0);
    CHECK((he - expected).norm() < 1e-12);
}

TEST_CASE("free resolvent is diagonal on modes") {
    Grid g(1, 32, 5.0);
    complexd lambda{-1.0, 0.0};
    auto e0 = GridFunction::fourier_mode(g, g.size() / 2);
    auto r = apply_free_resolvent(lambda, e0);
    // mu(0) = 0, so the divisor is 0 - (-1) = 1
    CHECK((r - e0).norm() < 1e-12);
}

TEST_CASE("resolvent round trip is the identity off the spectrum") {
    Grid g(2, 12, 4.0);
    GridFunction zero(g);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    int done = 0;
    while (done < 100) {
        complexd lambda{u(rng), u(rng)};
        if (g.resolvent_distance(lambda) <= 0.1) continue;
        auto f = random_function(g, 100 + static_cast<std::uint64_t>(done));
        auto r = apply_free_resolvent(lambda, f);
        auto back = apply_hamiltonian(zero, r) - lambda * r;
        CHECK((back - f).norm() / f.norm() < 1e-12);
        ++done;
    }
}

TEST_CASE("resolvent refuses a spectral parameter on the discrete spectrum") {
    Grid g(1, 16, 4.0);
    auto u = random_function(g, 5);
    CHECK_THROWS_AS(apply_free_resolvent(complexd{0.0, 0.0}, u), singular_resolvent_error);
    try {
        apply_free_resolvent(complexd{0.0, 0.0}, u);
    } catch (const singular_resolvent_error& e) {
        CHECK(e.offending_multiplier() == 0.0);
    }
}

TEST_CASE("low projection kills high modes, keeps low ones, and is idempotent") {
    Grid g(1, 64, 10.0);
    auto e0 = GridFunction::fourier_mode(g, g.size() / 2);
    CHECK((spectral_projection_low(e0) - e0).norm() < 1e-13);

    std::size_t high_lex = 0; // most negative m has the largest multiplier
    REQUIRE(g.multiplier_lex(high_lex) > 1.0);
    auto eh = GridFunction::fourier_mode(g, high_lex);
    CHECK(spectral_projection_low(eh).norm() < 1e-12 * eh.norm());

    auto u = random_function(g, 23);
    auto pu = spectral_projection_low(u);
    auto ppu = spectral_projection_low(pu);
    CHECK((ppu - pu).norm() < 1e-14 * (1.0 + pu.norm()));
}

TEST_CASE("low projection commutes with the free resolvent") {
    Grid g(1, 48, 7.0);
    complexd lambda{-0.7, 0.4};
    for (int k = 0; k < 20; ++k) {
        auto u = random_function(g, 300 + static_cast<std::uint64_t>(k));
        auto a = spectral_projection_low(apply_free_resolvent(lambda, u));
        auto b = apply_free_resolvent(lambda, spectral_projection_low(u));
        CHECK((a - b).norm() < 1e-12 * (1.0 + u.norm()));
    }
}

TEST_CASE("dense assembly agrees with the operator application") {
    Grid g(1, 24, 4.0);
    auto V = sample_potential(WellPotential{complexd{-1.0, -0.3}, 1.2}, g);
    auto H = dense_hamiltonian(V);
    auto u = random_function(g, 9);
    VectorXc uv = Eigen::Map<const VectorXc>(u.values().data(),
                                             static_cast<Eigen::Index>(u.size()));
    VectorXc hv = H * uv;
    auto hu = apply_hamiltonian(V, u);
    double err = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) err += std::norm(hv[static_cast<Eigen::Index>(j)] - hu[j]);
    CHECK(std::sqrt(err) < 1e-10);
}
