#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "speclab/bound_params.hpp"
#include "speclab/errors.hpp"
#include "speclab/grid_function.hpp"
#include "speclab/linalg.hpp"
#include "speclab/operators.hpp"
#include "speclab/parallel.hpp"
#include "speclab/quadrature.hpp"
#include "speclab/restriction.hpp"

namespace speclab {

// X = W (-Delta - lambda)^{-1} W restricted to the support of V, with
// W = |V|^{1/2}; X0 = X U with the unitary phase U = V/|V|. Truncating to
// the support shrinks the matrix from n^d to the effective support and
// leaves the singular values of X0 equal to those of X.
struct BSOperator {
    complexd lambda;
    std::vector<std::size_t> support;
    MatrixXc X;
    VectorXc phase;

    MatrixXc X0() const { return X * phase.asDiagonal(); }
};

inline BSOperator build_bs(const GridFunction& V, complexd lambda,
                           double support_threshold = -1.0) {
    const Grid& g = V.grid();
    if (support_threshold < 0.0) support_threshold = default_support_threshold(V);
    BSOperator op;
    op.lambda = lambda;
    op.support = support_indices(V, support_threshold);
    if (op.support.empty())
        throw validation_error("potential support is empty at this threshold");

    const auto& mu = g.multipliers();
    for (double m : mu)
        if (std::abs(lambda - m) < resolvent_pole_tolerance)
            throw singular_resolvent_error(
                "spectral parameter within tolerance of a discrete Laplacian eigenvalue " +
                    std::to_string(m),
                m);

    // The free resolvent kernel is circulant: one inverse transform of the
    // symbol yields every entry.
    const std::size_t N = g.size();
    std::vector<complexd> symbol(N), kernel;
    for (std::size_t f = 0; f < N; ++f) symbol[f] = 1.0 / (mu[f] - lambda);
    g.inverse(symbol, kernel);

    const std::size_t S = op.support.size();
    const int n = g.points_per_axis();
    const int d = g.dimension();
    std::vector<std::array<int, 3>> sub(S);
    std::vector<double> W(S);
    for (std::size_t c = 0; c < S; ++c) {
        std::size_t flat = op.support[c];
        for (int a = d - 1; a >= 0; --a) {
            sub[c][static_cast<std::size_t>(a)] =
                static_cast<int>(flat % static_cast<std::size_t>(n));
            flat /= static_cast<std::size_t>(n);
        }
        W[c] = std::sqrt(std::abs(V[op.support[c]]));
    }
    op.X.resize(static_cast<Eigen::Index>(S), static_cast<Eigen::Index>(S));
    for (std::size_t i = 0; i < S; ++i) {
        for (std::size_t l = 0; l < S; ++l) {
            std::size_t diff = 0;
            for (int a = 0; a < d; ++a) {
                int dd = sub[i][static_cast<std::size_t>(a)] - sub[l][static_cast<std::size_t>(a)];
                if (dd < 0) dd += n;
                diff = diff * static_cast<std::size_t>(n) + static_cast<std::size_t>(dd);
            }
            op.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) =
                W[i] * kernel[diff] * W[l];
        }
    }
    op.phase.resize(static_cast<Eigen::Index>(S));
    for (std::size_t c = 0; c < S; ++c) {
        complexd v = V[op.support[c]];
        op.phase[static_cast<Eigen::Index>(c)] = v / std::abs(v);
    }
    return op;
}

// min |mu + 1| over the spectrum of X0; vanishes exactly when lambda is an
// eigenvalue of the discretized H away from the free spectrum. Empty support
// means X0 = 0, whose spectrum {0} gives indicator 1.
inline double bs_indicator(const GridFunction& V, complexd lambda,
                           double support_threshold = -1.0) {
    BSOperator op;
    try {
        op = build_bs(V, lambda, support_threshold);
    } catch (const validation_error&) {
        return 1.0;
    }
    Eigen::ComplexEigenSolver<MatrixXc> es(op.X0(), false);
    if (es.info() != Eigen::Success)
        throw numerical_error("eigensolve of the Birman-Schwinger operator failed");
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        best = std::min(best, std::abs(es.eigenvalues()[i] + complexd{1.0, 0.0}));
    return best;
}

// Largest singular value of X (equals that of X0).
inline double bs_norm(const GridFunction& V, complexd lambda,
                      double support_threshold = -1.0) {
    return spectral_norm(build_bs(V, lambda, support_threshold).X);
}

struct ScanRegion {
    double re_min = -1.0;
    double re_max = 1.0;
    double im_min = -1.0;
    double im_max = 1.0;
};

struct ScanResult {
    std::vector<double> re_points;
    std::vector<double> im_points;
    // row-major, index = iy * re_points.size() + ix; NaN where a point
    // failed
    std::vector<double> indicator;
    std::vector<std::pair<std::size_t, std::string>> errors;

    double at(std::size_t iy, std::size_t ix) const {
        return indicator[iy * re_points.size() + ix];
    }

    // Strict local minima of the field (interior in both directions).
    std::vector<complexd> local_minima() const {
        std::vector<complexd> out;
        const std::size_t nx = re_points.size(), ny = im_points.size();
        for (std::size_t iy = 0; iy < ny; ++iy) {
            for (std::size_t ix = 0; ix < nx; ++ix) {
                double v = at(iy, ix);
                if (!std::isfinite(v)) continue;
                bool minimal = true;
                for (int dy = -1; dy <= 1 && minimal; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        long jy = static_cast<long>(iy) + dy;
                        long jx = static_cast<long>(ix) + dx;
                        if (jy < 0 || jx < 0 || jy >= static_cast<long>(ny) ||
                            jx >= static_cast<long>(nx))
                            continue;
                        double w = at(static_cast<std::size_t>(jy), static_cast<std::size_t>(jx));
                        if (std::isfinite(w) && w < v) {
                            minimal = false;
                            break;
                        }
                    }
                }
                if (minimal) out.emplace_back(re_points[ix], im_points[iy]);
            }
        }
        return out;
    }
};

namespace detail {

inline std::vector<double> lattice_points(double lo, double hi, std::size_t count) {
    std::vector<double> pts;
    if (count == 1) {
        pts.push_back(0.5 * (lo + hi));
        return pts;
    }
    double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) pts.push_back(lo + step * static_cast<double>(i));
    return pts;
}

} // namespace detail

// Indicator field over a lambda lattice. Per-point failures are recorded and
// the scan continues; results are independent of the thread count.
inline ScanResult scan_plane(const GridFunction& V, const ScanRegion& region,
                             std::size_t n_re, std::size_t n_im,
                             double support_threshold = -1.0, unsigned threads = 1) {
    if (n_re == 0 || n_im == 0)
        throw validation_error("scan resolution must be positive", "scan.resolution");
    if (region.re_max < region.re_min || region.im_max < region.im_min)
        throw validation_error("scan region is empty", "scan.region");
    ScanResult out;
    out.re_points = detail::lattice_points(region.re_min, region.re_max, n_re);
    out.im_points = detail::lattice_points(region.im_min, region.im_max, n_im);
    out.indicator.assign(n_re * n_im, std::numeric_limits<double>::quiet_NaN());
    std::vector<std::string> point_errors(n_re * n_im);
    parallel_for(n_re * n_im, threads, [&](std::size_t idx) {
        std::size_t iy = idx / n_re, ix = idx % n_re;
        complexd lambda{out.re_points[ix], out.im_points[iy]};
        try {
            out.indicator[idx] = bs_indicator(V, lambda, support_threshold);
        } catch (const std::exception& e) {
            point_errors[idx] = e.what();
        }
    });
    for (std::size_t i = 0; i < point_errors.size(); ++i)
        if (!point_errors[i].empty()) out.errors.emplace_back(i, point_errors[i]);
    return out;
}

struct LocateResult {
    complexd lambda;
    double indicator = std::numeric_limits<double>::infinity();
    bool converged = false;
    std::size_t iterations = 0;
};

// Nelder-Mead refinement of an indicator minimum starting at lambda0.
inline LocateResult locate_eigenvalue(const GridFunction& V, complexd lambda0,
                                      double tol = 1e-8, std::size_t max_iter = 500,
                                      double initial_step = 0.0,
                                      double support_threshold = -1.0) {
    auto f = [&](complexd z) {
        try {
            return bs_indicator(V, z, support_threshold);
        } catch (const std::exception&) {
            return std::numeric_limits<double>::infinity();
        }
    };
    double step = initial_step > 0.0 ? initial_step : std::max(1e-3, 1e-3 * std::abs(lambda0));

    struct Vertex {
        complexd z;
        double v;
    };
    std::array<Vertex, 3> simplex{Vertex{lambda0, f(lambda0)},
                                  Vertex{lambda0 + complexd{step, 0.0}, 0.0},
                                  Vertex{lambda0 + complexd{0.0, step}, 0.0}};
    simplex[1].v = f(simplex[1].z);
    simplex[2].v = f(simplex[2].z);

    LocateResult res;
    for (std::size_t it = 0; it < max_iter; ++it) {
        std::sort(simplex.begin(), simplex.end(),
                  [](const Vertex& a, const Vertex& b) { return a.v < b.v; });
        res.lambda = simplex[0].z;
        res.indicator = simplex[0].v;
        res.iterations = it;
        if (simplex[0].v < tol) {
            res.converged = true;
            return res;
        }
        double diameter = std::max(std::abs(simplex[1].z - simplex[0].z),
                                   std::abs(simplex[2].z - simplex[0].z));
        if (diameter < 1e-14 * (1.0 + std::abs(simplex[0].z))) break;

        complexd centroid = 0.5 * (simplex[0].z + simplex[1].z);
        complexd reflect = centroid + (centroid - simplex[2].z);
        double fr = f(reflect);
        if (fr < simplex[0].v) {
            complexd expand = centroid + 2.0 * (centroid - simplex[2].z);
            double fe = f(expand);
            simplex[2] = fe < fr ? Vertex{expand, fe} : Vertex{reflect, fr};
        } else if (fr < simplex[1].v) {
            simplex[2] = Vertex{reflect, fr};
        } else {
            complexd contract = centroid + 0.5 * (simplex[2].z - centroid);
            double fc = f(contract);
            if (fc < simplex[2].v) {
                simplex[2] = Vertex{contract, fc};
            } else {
                simplex[1].z = simplex[0].z + 0.5 * (simplex[1].z - simplex[0].z);
                simplex[1].v = f(simplex[1].z);
                simplex[2].z = simplex[0].z + 0.5 * (simplex[2].z - simplex[0].z);
                simplex[2].v = f(simplex[2].z);
            }
        }
    }
    std::sort(simplex.begin(), simplex.end(),
              [](const Vertex& a, const Vertex& b) { return a.v < b.v; });
    res.lambda = simplex[0].z;
    res.indicator = simplex[0].v;
    res.converged = simplex[0].v < tol;
    return res;
}

struct TauSplitReport {
    complexd lambda;
    double tau = 0.0;
    // integral of ||G_rho - G_tau|| / |rho^2 - lambda| over [1, xi_max],
    // plus the analytic tail where the lattice has no shells left
    double term_integral = 0.0;
    double integral_tail = 0.0;
    double term_projection = 0.0; // pi ||G_tau|| / (2 sqrt|lambda|)
    double term_low = 0.0;        // (||V||_inf + ||G_tau||) / (|lambda| - 1)
    double quad_error = 0.0;
    std::size_t quad_evaluations = 0;
    double total = 0.0;
    double bs_norm_value = 0.0;
    bool holds = false;
};

// Evaluates the three-term majorant of ||X|| obtained by splitting the shell
// integral at tau = sqrt(Re lambda) and projecting out the low modes, then
// compares it with the actual norm.
inline TauSplitReport tau_split_bound(const GridFunction& V, complexd lambda,
                                      double quad_tol = 1e-7,
                                      double support_threshold = -1.0) {
    const Grid& g = V.grid();
    if (!(lambda.real() > 0.0))
        throw validation_error("tau split needs Re lambda > 0");
    if (!(std::abs(lambda) > 1.0))
        throw validation_error("tau split needs |lambda| > 1");
    double tau = std::sqrt(lambda.real());
    if (tau < 1.0)
        throw validation_error("tau = sqrt(Re lambda) < 1 is outside the estimate's regime");

    const double xi_max = std::sqrt(g.max_multiplier());
    if (!(xi_max * xi_max > std::abs(lambda)))
        throw validation_error("|lambda| exceeds the grid's kinetic range");

    GridFunction W(g);
    for (std::size_t j = 0; j < g.size(); ++j) W[j] = std::sqrt(std::abs(V[j]));

    // one node set for every radius keeps operator differences meaningful
    SphereQuadrature quad = SphereQuadrature::standard(g.dimension(), xi_max);
    RestrictionOperator gamma_tau(W, tau, quad);
    const MatrixXc& Mtau = gamma_tau.matrix();
    double g_tau_norm = gamma_tau.norm() * gamma_tau.norm();

    auto integrand = [&](double rho) {
        if (rho <= 0.0) return 0.0;
        RestrictionOperator gamma(W, rho, quad);
        double diff = gram_difference_norm(gamma.matrix(), Mtau);
        return diff / std::abs(rho * rho - lambda);
    };

    TauSplitReport rep;
    rep.lambda = lambda;
    rep.tau = tau;

    auto accumulate = [&](double a, double b) {
        if (b <= a) return;
        auto q = adaptive_simpson(integrand, a, b, quad_tol, 32);
        rep.term_integral += q.value;
        rep.quad_error += q.error_estimate;
        rep.quad_evaluations += q.evaluations;
    };
    double split = std::clamp(tau, 1.0, xi_max);
    accumulate(1.0, split);
    accumulate(split, xi_max);

    // beyond xi_max the lattice has no shells: ||0 - G_tau|| integrates to an
    // arctanh tail, bounded with |rho^2 - lambda| >= rho^2 - |lambda|
    double al = std::abs(lambda);
    rep.integral_tail = g_tau_norm * std::atanh(std::sqrt(al) / xi_max) / std::sqrt(al);
    rep.term_integral += rep.integral_tail;

    rep.term_projection = std::numbers::pi * g_tau_norm / (2.0 * std::sqrt(al));
    rep.term_low = (V.sup_norm() + g_tau_norm) / (al - 1.0);
    rep.total = rep.term_integral + rep.term_projection + rep.term_low;
    rep.bs_norm_value = bs_norm(V, lambda, support_threshold);
    rep.holds = rep.bs_norm_value <= rep.total + rep.quad_error + 1e-12;
    return rep;
}

} // namespace speclab
