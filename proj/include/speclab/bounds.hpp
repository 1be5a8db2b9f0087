#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "speclab/bound_params.hpp"
#include "speclab/eigensolver.hpp"
#include "speclab/errors.hpp"
#include "speclab/grid_function.hpp"

namespace speclab {

// One bound evaluation. The eigensolver residual enters as the uncertainty:
// pass means LHS <= RHS + uncertainty, and a pass or fail within uncertainty
// of the boundary is flagged marginal.
struct BoundRow {
    complexd lambda;
    double lhs = 0.0;
    double rhs = 0.0;
    double uncertainty = 0.0;
    bool pass = false;
    bool marginal = false;

    double margin() const { return rhs - lhs; }
};

inline BoundRow make_bound_row(complexd lambda, double lhs, double rhs, double uncertainty) {
    BoundRow row;
    row.lambda = lambda;
    row.lhs = lhs;
    row.rhs = rhs;
    row.uncertainty = uncertainty;
    row.pass = lhs <= rhs + uncertainty;
    row.marginal = std::abs(lhs - rhs) <= uncertainty;
    return row;
}

// 1D integral bound: every eigenvalue off [0, inf) satisfies
// |lambda| <= (1/4) (int |V| dx)^2.
inline double davies_bound(const GridFunction& V) {
    if (V.grid().dimension() != 1)
        throw validation_error("the integral bound is one-dimensional", "grid.d");
    double l1 = V.integral_abs();
    return 0.25 * l1 * l1;
}

inline BoundRow davies_check(complexd lambda, const GridFunction& V, double residual = 0.0) {
    return make_bound_row(lambda, std::abs(lambda), davies_bound(V), residual);
}

// |Im lambda|^{p-1} <= |lambda|^{d/2-1} C int |V|^p dx for Re lambda > 0.
// For p = d = 1 the constant is pinned at 1/2 (not fitted).
inline BoundRow im_power_check(complexd lambda, const GridFunction& V, double p, double C,
                               double residual = 0.0) {
    if (!(lambda.real() > 0.0))
        throw validation_error("the imaginary-part bound assumes Re lambda > 0");
    const int d = V.grid().dimension();
    if (p == 1.0 && d == 1) C = 0.5;
    double lhs = std::pow(std::abs(lambda.imag()), p - 1.0);
    double rhs = std::pow(std::abs(lambda), 0.5 * d - 1.0) * C * V.integral_abs_pow(p);
    return make_bound_row(lambda, lhs, rhs, residual);
}

struct SectorSumResult {
    double sum = 0.0;      // sum over |z_j|^gamma outside the sector
    double integral = 0.0; // int |V|^{gamma + d/2} dx
    double ratio = 0.0;    // empirical constant, 0 when the sum is empty
    std::size_t outside_count = 0;
};

// Sum bound for eigenvalues outside the sector {|Im z| < t Re z}. Boundary
// eigenvalues (|Im z| = t Re z) are kept, which is the conservative side for
// an upper-bound check.
inline SectorSumResult flls_sum(const SpectrumResult& spectrum, const GridFunction& V,
                                double t, double gamma) {
    if (!(t > 0.0)) throw validation_error("sector parameter t must be positive", "bounds.t");
    if (!(gamma >= 1.0))
        throw validation_error("moment exponent gamma must be >= 1", "bounds.gamma");
    SectorSumResult out;
    out.integral = V.integral_abs_pow(gamma + 0.5 * V.grid().dimension());
    for (complexd z : spectrum.eigenvalues) {
        if (std::abs(z.imag()) >= t * z.real()) {
            out.sum += std::pow(std::abs(z), gamma);
            ++out.outside_count;
        }
    }
    out.ratio = (out.sum > 0.0 && out.integral > 0.0) ? out.sum / out.integral : 0.0;
    return out;
}

// Partial accumulation sum over the strip a < Re z < b.
inline double accumulation_sum(const SpectrumResult& spectrum, double a, double b,
                               double gamma) {
    if (!(a >= 0.0 && a < b))
        throw validation_error("strip must satisfy 0 <= a < b", "bounds.strip");
    double s = 0.0;
    for (complexd z : spectrum.eigenvalues) {
        if (z.real() > a && z.real() < b) {
            double im = std::abs(z.imag());
            if (gamma == 0.0)
                s += 1.0;
            else if (im > 0.0)
                s += std::pow(im, gamma);
        }
    }
    return s;
}

// Right-hand side of the disc-confinement criterion for Re lambda > 0,
// |lambda| > 1:
//   C L (|Re lambda|^{(kappa+2eps-1)/2} + |lambda|^{eps-1/2}
//        + (1 + |lambda|^eps) / (|lambda| - 1)).
inline double disc_bound_rhs(complexd lambda, const BoundParams& params) {
    if (!(lambda.real() > 0.0))
        throw validation_error("disc criterion assumes Re lambda > 0");
    double al = std::abs(lambda);
    if (!(al > 1.0))
        throw validation_error("disc criterion assumes |lambda| > 1; use the unit-disc case");
    double kappa = params.kappa();
    double eps = params.epsilon;
    double term1 = std::pow(lambda.real(), 0.5 * (kappa + 2.0 * eps - 1.0));
    double term2 = std::pow(al, eps - 0.5);
    double term3 = (1.0 + std::pow(al, eps)) / (al - 1.0);
    return params.C * params.L * (term1 + term2 + term3);
}

enum class ExclusionStatus { excluded, not_excluded, not_covered };

struct ExclusionMask {
    std::vector<double> re_points;
    std::vector<double> im_points;
    std::vector<ExclusionStatus> status; // row-major, iy * n_re + ix

    ExclusionStatus at(std::size_t iy, std::size_t ix) const {
        return status[iy * re_points.size() + ix];
    }
};

// Marks lattice points provably eigenvalue-free for the whole admissible
// class: rhs < 1 with Re lambda > 0 and |lambda| > 1. Points outside that
// regime are not covered by the displayed inequality.
inline ExclusionMask exclusion_region(const BoundParams& params, double re_min, double re_max,
                                      double im_min, double im_max, std::size_t n_re,
                                      std::size_t n_im) {
    if (n_re == 0 || n_im == 0)
        throw validation_error("exclusion lattice must be nonempty", "scan.resolution");
    ExclusionMask mask;
    auto lin = [](double lo, double hi, std::size_t c) {
        std::vector<double> pts;
        if (c == 1) {
            pts.push_back(0.5 * (lo + hi));
            return pts;
        }
        for (std::size_t i = 0; i < c; ++i)
            pts.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(c - 1));
        return pts;
    };
    mask.re_points = lin(re_min, re_max, n_re);
    mask.im_points = lin(im_min, im_max, n_im);
    mask.status.reserve(n_re * n_im);
    for (double im : mask.im_points) {
        for (double re : mask.re_points) {
            complexd lambda{re, im};
            if (!(re > 0.0) || !(std::abs(lambda) > 1.0)) {
                mask.status.push_back(ExclusionStatus::not_covered);
            } else {
                mask.status.push_back(disc_bound_rhs(lambda, params) < 1.0
                                          ? ExclusionStatus::excluded
                                          : ExclusionStatus::not_excluded);
            }
        }
    }
    return mask;
}

struct EmpiricalConstant {
    double C = 0.0;
    bool vacuous = true;
    complexd argmax_lambda{0.0, 0.0};
};

// Smallest C for which every non-real eigenvalue with Re lambda > 0 in the
// supplied spectra satisfies |lambda| <= 1 or rhs(C) >= 1: the max over
// |lambda| > 1 of 1 / rhs(C=1).
inline EmpiricalConstant empirical_constant(
    const std::vector<std::pair<const SpectrumResult*, BoundParams>>& spectra) {
    EmpiricalConstant out;
    for (const auto& [spec, params] : spectra) {
        BoundParams unit = params;
        unit.C = 1.0;
        for (complexd z : spec->eigenvalues) {
            if (z.imag() == 0.0) continue;
            if (!(z.real() > 0.0)) continue;
            if (!(std::abs(z) > 1.0)) continue;
            double rhs1 = disc_bound_rhs(z, unit);
            if (!(rhs1 > 0.0)) continue;
            double needed = 1.0 / rhs1;
            if (needed > out.C) {
                out.C = needed;
                out.argmax_lambda = z;
            }
            out.vacuous = false;
        }
    }
    return out;
}

} // namespace speclab
