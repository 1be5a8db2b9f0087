#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <random>

#include "speclab/grid.hpp"
#include "speclab/grid_function.hpp"

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

TEST_CASE("grid validates its construction parameters") {
    CHECK_THROWS_AS(Grid(0, 16, 5.0), validation_error);
    CHECK_THROWS_AS(Grid(4, 16, 5.0), validation_error);
    CHECK_THROWS_AS(Grid(1, 15, 5.0), validation_error);
    CHECK_THROWS_AS(Grid(1, 16, -1.0), validation_error);
}

TEST_CASE("frequency set has n^d members with nonnegative multipliers") {
    for (int d = 1; d <= 3; ++d) {
        Grid g(d, 8, 4.0);
        std::size_t expect = 1;
        for (int a = 0; a < d; ++a) expect *= 8;
        CHECK(g.size() == expect);
        double min_mu = 1e300;
        for (double m : g.multipliers()) {
            CHECK(m >= 0.0);
            min_mu = std::min(min_mu, m);
        }
        CHECK(min_mu == 0.0);
    }
}

TEST_CASE("forward then inverse transform is the identity") {
    for (int d : {1, 2}) {
        Grid g(d, 16, 3.0);
        auto u = random_function(g, 7);
        std::vector<complexd> hat, back;
        g.forward(u.values(), hat);
        g.inverse(hat, back);
        double err = 0.0, ref = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) {
            err += std::norm(back[j] - u[j]);
            ref += std::norm(u[j]);
        }
        CHECK(std::sqrt(err / ref) < 1e-12);
    }
}

TEST_CASE("Parseval identity at the grid inner product") {
    Grid g(1, 64, 10.0);
    auto u = random_function(g, 11);
    std::vector<complexd> hat;
    g.forward(u.values(), hat);
    double freq_norm2 = 0.0;
    for (const auto& c : hat) freq_norm2 += std::norm(c);
    freq_norm2 *= g.cell_volume() / static_cast<double>(g.size());
    CHECK(std::abs(freq_norm2 - u.norm() * u.norm()) <= 1e-12 * freq_norm2);
}

TEST_CASE("lexicographic order enumerates every frequency exactly once") {
    Grid g(2, 6, 2.0);
    std::vector<int> seen(g.size(), 0);
    for (std::size_t lex = 0; lex < g.size(); ++lex) {
        std::size_t fft = g.lex_to_fft(lex);
        REQUIRE(fft < g.size());
        seen[fft] += 1;
        CHECK(g.multiplier_lex(lex) == g.multipliers()[fft]);
    }
    for (int c : seen) CHECK(c == 1);
}

TEST_CASE("lexicographic frequencies match their multipliers") {
    Grid g(2, 8, 3.0);
    for (std::size_t lex = 0; lex < g.size(); ++lex) {
        auto xi = g.frequency_lex(lex);
        double mu = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        CHECK(g.multiplier_lex(lex) == Catch::Approx(mu).margin(1e-12));
    }
}

TEST_CASE("finite-difference symbol stays below the spectral one") {
    Grid spec(1, 32, 5.0, LaplacianSymbol::spectral);
    Grid fd(1, 32, 5.0, LaplacianSymbol::finite_difference);
    for (std::size_t f = 0; f < spec.size(); ++f)
        CHECK(fd.multipliers()[f] <= spec.multipliers()[f] + 1e-12);
}

TEST_CASE("grid function arithmetic checks grid compatibility") {
    Grid a(1, 16, 2.0), b(1, 16, 3.0);
    GridFunction fa(a), fb(b);
    CHECK_THROWS_AS(fa += fb, validation_error);
}
