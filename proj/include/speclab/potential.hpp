#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <variant>
#include <vector>

#include "speclab/errors.hpp"
#include "speclab/grid_function.hpp"

namespace speclab {

// V(x) = L (1+|x|^2)^{-p/2} e^{i theta}. The decay envelope is attained with
// equality at every grid point by construction.
struct PowerDecayPotential {
    double L = 1.0;
    double p = 2.0;
    double theta = 0.0;
};

// V(x) = depth inside the ball |x - center| <= radius, 0 outside.
struct WellPotential {
    complexd depth{-1.0, 0.0};
    double radius = 1.0;
    std::array<double, 3> center{0.0, 0.0, 0.0};
};

// V(x) = amplitude exp(-|x|^2 / (2 width^2)).
struct GaussianPotential {
    complexd amplitude{-1.0, 0.0};
    double width = 1.0;
};

// Explicit samples; the shape must match the target grid.
struct TablePotential {
    std::vector<complexd> values;
};

using PotentialSpec =
    std::variant<PowerDecayPotential, WellPotential, GaussianPotential, TablePotential>;

struct SampleNotes {
    std::vector<std::string> warnings;
};

inline GridFunction sample_potential(const PotentialSpec& spec, const Grid& grid,
                                     SampleNotes* notes = nullptr) {
    GridFunction v(grid);
    if (const auto* pd = std::get_if<PowerDecayPotential>(&spec)) {
        if (!(pd->L > 0.0))
            throw validation_error("power_decay L must be positive", "potential.L");
        if ((pd->p <= 1.0 || pd->p >= 3.0) && notes)
            notes->warnings.push_back("power_decay p outside (1,3); bound machinery assumes 1 < p < 3");
        complexd phase = std::polar(1.0, pd->theta);
        for (std::size_t j = 0; j < grid.size(); ++j) {
            double r2 = grid.radius2(j);
            v[j] = pd->L * std::pow(1.0 + r2, -pd->p / 2.0) * phase;
        }
        return v;
    }
    if (const auto* w = std::get_if<WellPotential>(&spec)) {
        if (!(w->radius > 0.0))
            throw validation_error("well radius must be positive", "potential.radius");
        double r2max = w->radius * w->radius;
        for (std::size_t j = 0; j < grid.size(); ++j) {
            auto x = grid.point(j);
            double r2 = 0.0;
            for (int a = 0; a < grid.dimension(); ++a) {
                double dx = x[static_cast<std::size_t>(a)] - w->center[static_cast<std::size_t>(a)];
                r2 += dx * dx;
            }
            if (r2 <= r2max) v[j] = w->depth;
        }
        return v;
    }
    if (const auto* g = std::get_if<GaussianPotential>(&spec)) {
        if (!(g->width > 0.0))
            throw validation_error("gaussian width must be positive", "potential.width");
        double inv2w2 = 1.0 / (2.0 * g->width * g->width);
        for (std::size_t j = 0; j < grid.size(); ++j)
            v[j] = g->amplitude * std::exp(-grid.radius2(j) * inv2w2);
        return v;
    }
    const auto& t = std::get<TablePotential>(spec);
    if (t.values.size() != grid.size())
        throw validation_error("table potential shape does not match the grid", "potential.table");
    return GridFunction(grid, t.values);
}

} // namespace speclab
