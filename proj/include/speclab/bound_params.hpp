#pragma once

#include <algorithm>
#include <cmath>

#include "speclab/errors.hpp"

namespace speclab {

// Exponent bookkeeping for the decay family |V| <= L (1+|x|^2)^{-p/2}:
//   l = p/2, kappa = (p-1)/2, delta = l - alpha - 1/2,
// so kappa = alpha + delta holds by construction. epsilon must lie in
// (0, (1-kappa)/2) and (0, 1/2); alpha in (0, l - 1/2).
struct BoundParams {
    double L = 1.0;
    double p = 2.0;
    double epsilon = 0.0; // 0 requests the default
    double alpha = 0.0;   // 0 requests the default
    double C = 1.0;

    double l() const { return p / 2.0; }
    double kappa() const { return (p - 1.0) / 2.0; }
    double delta() const { return l() - alpha - 0.5; }

    static double default_epsilon(double p) {
        double kappa = (p - 1.0) / 2.0;
        return std::min((1.0 - kappa) / 2.0, 0.5) / 5.0;
    }

    static double default_alpha(double p) { return (p / 2.0 - 0.5) / 2.0; }

    // Validates ranges and fills defaulted exponents.
    static BoundParams make(double L, double p, double epsilon = 0.0, double alpha = 0.0,
                            double C = 1.0) {
        if (!(L > 0.0)) throw validation_error("L must be positive", "bounds.L");
        if (!(p > 1.0 && p < 3.0))
            throw validation_error("p must lie in (1, 3)", "bounds.p");
        BoundParams bp;
        bp.L = L;
        bp.p = p;
        bp.epsilon = epsilon > 0.0 ? epsilon : default_epsilon(p);
        bp.alpha = alpha > 0.0 ? alpha : default_alpha(p);
        bp.C = C;
        double eps_max = std::min((1.0 - bp.kappa()) / 2.0, 0.5);
        if (!(bp.epsilon > 0.0 && bp.epsilon < eps_max))
            throw validation_error("epsilon outside (0, min((1-kappa)/2, 1/2))",
                                   "bounds.epsilon");
        if (!(bp.alpha > 0.0 && bp.alpha < bp.l() - 0.5))
            throw validation_error("alpha outside (0, l - 1/2)", "bounds.alpha");
        if (!(C > 0.0)) throw validation_error("C must be positive", "bounds.C");
        return bp;
    }
};

} // namespace speclab
