#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "speclab/potential.hpp"

using namespace speclab;

TEST_CASE("power decay samples the family formula") {
    Grid g(1, 64, 8.0);
    auto V = sample_potential(PowerDecayPotential{1.0, 2.0, 0.0}, g);
    // x = 0 lives at flat index n/2
    std::size_t mid = g.size() / 2;
    CHECK(g.point(mid)[0] == 0.0);
    CHECK(V[mid].real() == Catch::Approx(1.0));
    // |x| = 1 gives (1+1)^{-1}
    std::size_t one = mid + static_cast<std::size_t>(std::lround(1.0 / g.spacing()));
    REQUIRE(g.point(one)[0] == Catch::Approx(1.0));
    CHECK(V[one].real() == Catch::Approx(0.5));
}

TEST_CASE("power decay attains its envelope at every point") {
    Grid g(1, 128, 10.0);
    double L = 2.5, p = 1.7, theta = 0.9;
    auto V = sample_potential(PowerDecayPotential{L, p, theta}, g);
    for (std::size_t j = 0; j < g.size(); ++j) {
        double envelope = L * std::pow(1.0 + g.radius2(j), -p / 2.0);
        CHECK(std::abs(V[j]) == Catch::Approx(envelope).epsilon(1e-13));
    }
}

TEST_CASE("well is the indicator of its ball") {
    Grid g(1, 64, 8.0);
    complexd depth{-1.0, -0.5};
    auto V = sample_potential(WellPotential{depth, 1.0}, g);
    for (std::size_t j = 0; j < g.size(); ++j) {
        double r = std::abs(g.point(j)[0]);
        if (r <= 1.0)
            CHECK(V[j] == depth);
        else
            CHECK(V[j] == complexd{0.0, 0.0});
    }
}

TEST_CASE("p outside (1,3) warns but still samples") {
    Grid g(1, 32, 4.0);
    SampleNotes notes;
    auto V = sample_potential(PowerDecayPotential{1.0, 3.5, 0.0}, g, &notes);
    CHECK(notes.warnings.size() == 1);
    CHECK(V.size() == g.size());
}

TEST_CASE("table potential must match the grid shape") {
    Grid g(1, 32, 4.0);
    TablePotential t;
    t.values.assign(g.size() - 1, complexd{1.0, 0.0});
    CHECK_THROWS_AS(sample_potential(PotentialSpec{t}, g), validation_error);
}
