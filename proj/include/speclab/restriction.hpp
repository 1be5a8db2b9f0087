#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "speclab/bound_params.hpp"
#include "speclab/errors.hpp"
#include "speclab/grid_function.hpp"
#include "speclab/linalg.hpp"
#include "speclab/operators.hpp"

namespace speclab {

// Fraction of the Nyquist frequency pi/h up to which sphere radii are
// trusted; beyond it the plane-wave samples alias.
inline constexpr double nyquist_guard_fraction = 0.8;

inline double nyquist_radius_cap(const Grid& g) {
    return nyquist_guard_fraction * g.nyquist_frequency();
}

namespace detail {

// Gauss-Legendre nodes and weights on (-1, 1) by Newton iteration on the
// recurrence.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(static_cast<std::size_t>(n), 0.0);
    w.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[static_cast<std::size_t>(i)] = -t;
        x[static_cast<std::size_t>(n - 1 - i)] = t;
        double wi = 2.0 / ((1.0 - t * t) * dp * dp);
        w[static_cast<std::size_t>(i)] = wi;
        w[static_cast<std::size_t>(n - 1 - i)] = wi;
    }
}

} // namespace detail

// Quadrature on the unit sphere S^{d-1}; weights sum to its area (2, 2*pi,
// 4*pi for d = 1, 2, 3). Node counts grow linearly with the target radius so
// the oscillatory factor e^{-i rho theta x} stays resolved across the box.
struct SphereQuadrature {
    int dimension = 1;
    std::vector<std::array<double, 3>> nodes;
    std::vector<double> weights;

    double area() const {
        double s = 0.0;
        for (double w : weights) s += w;
        return s;
    }

    static SphereQuadrature standard(int d, double rho) {
        SphereQuadrature q;
        q.dimension = d;
        if (d == 1) {
            q.nodes = {{1.0, 0.0, 0.0}, {-1.0, 0.0, 0.0}};
            q.weights = {1.0, 1.0};
            return q;
        }
        if (d == 2) {
            int m = std::max(64, static_cast<int>(std::ceil(8.0 * rho)));
            q.nodes.reserve(static_cast<std::size_t>(m));
            q.weights.assign(static_cast<std::size_t>(m), 2.0 * std::numbers::pi / m);
            for (int k = 0; k < m; ++k) {
                double phi = 2.0 * std::numbers::pi * k / m;
                q.nodes.push_back({std::cos(phi), std::sin(phi), 0.0});
            }
            return q;
        }
        if (d == 3) {
            int nt = std::max(32, static_cast<int>(std::ceil(4.0 * rho)));
            int np = std::max(64, static_cast<int>(std::ceil(8.0 * rho)));
            std::vector<double> ct, cw;
            detail::gauss_legendre(nt, ct, cw);
            q.nodes.reserve(static_cast<std::size_t>(nt * np));
            q.weights.reserve(static_cast<std::size_t>(nt * np));
            for (int i = 0; i < nt; ++i) {
                double cos_th = ct[static_cast<std::size_t>(i)];
                double sin_th = std::sqrt(std::max(0.0, 1.0 - cos_th * cos_th));
                for (int k = 0; k < np; ++k) {
                    double phi = 2.0 * std::numbers::pi * k / np;
                    q.nodes.push_back({sin_th * std::cos(phi), sin_th * std::sin(phi), cos_th});
                    q.weights.push_back(cw[static_cast<std::size_t>(i)] * 2.0 *
                                        std::numbers::pi / np);
                }
            }
            return q;
        }
        throw validation_error("sphere quadrature needs dimension 1, 2 or 3");
    }
};

// Quadrature realization of the restriction operator on the sphere of radius
// rho. The stored matrix M maps isometric grid coordinates to weighted
// sphere samples, so ||Gamma_rho|| = sigma_max(M) and G_rho = M^* M. The
// unit-sphere conjugate Y_rho has the rho^{(d-1)/2} factor folded in and is
// realized by the same matrix, which is why ||Y_rho|| = ||Gamma_rho||
// identically here.
class RestrictionOperator {
public:
    RestrictionOperator(const GridFunction& W, double rho, SphereQuadrature quad,
                        std::vector<std::size_t> support = {})
        : rho_(rho), quad_(std::move(quad)), support_(std::move(support)) {
        if (!(rho > 0.0)) throw validation_error("sphere radius must be positive");
        const Grid& g = W.grid();
        if (quad_.dimension != g.dimension())
            throw validation_error("quadrature dimension does not match the grid");
        for (const auto& v : W.values())
            if (v.imag() != 0.0 || v.real() < 0.0)
                throw validation_error("restriction weight W must be real nonnegative");

        const std::size_t k = quad_.nodes.size();
        const std::size_t ncols = support_.empty() ? g.size() : support_.size();
        const int d = g.dimension();
        const double half_vol = std::pow(g.cell_volume(), 0.5);
        const double front = std::pow(2.0 * std::numbers::pi, -0.5 * d) *
                             std::pow(rho_, 0.5 * (d - 1)) * half_vol;
        M_.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(ncols));
        for (std::size_t r = 0; r < k; ++r) {
            const auto& th = quad_.nodes[r];
            const double wf = std::sqrt(quad_.weights[r]) * front;
            for (std::size_t c = 0; c < ncols; ++c) {
                std::size_t j = support_.empty() ? c : support_[c];
                auto x = g.point(j);
                double phase = -rho_ * (th[0] * x[0] + th[1] * x[1] + th[2] * x[2]);
                M_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    wf * W[j].real() * std::polar(1.0, phase);
            }
        }
    }

    double rho() const noexcept { return rho_; }
    const SphereQuadrature& quadrature() const noexcept { return quad_; }
    const MatrixXc& matrix() const noexcept { return M_; }
    const std::vector<std::size_t>& support() const noexcept { return support_; }

    double norm() const {
        if (!norm_) norm_ = spectral_norm(M_);
        return *norm_;
    }

    MatrixXc gram() const { return M_.adjoint() * M_; }

private:
    double rho_;
    SphereQuadrature quad_;
    std::vector<std::size_t> support_;
    MatrixXc M_;
    mutable std::optional<double> norm_;
};

inline RestrictionOperator build_gamma(const GridFunction& W, double rho,
                                       const SphereQuadrature& quad) {
    return RestrictionOperator(W, rho, quad);
}

inline RestrictionOperator build_gamma(const GridFunction& W, double rho) {
    return RestrictionOperator(W, rho,
                               SphereQuadrature::standard(W.grid().dimension(), rho));
}

struct GammaProfile {
    std::vector<double> rho;
    std::vector<double> norms;
    double loglog_slope = 0.0;
};

// ||Gamma_rho|| over a radius sweep, plus the fitted log-log slope.
inline GammaProfile gamma_norm_profile(const GridFunction& W,
                                       const std::vector<double>& rho_list) {
    const Grid& g = W.grid();
    const double cap = nyquist_radius_cap(g);
    GammaProfile out;
    out.rho = rho_list;
    out.norms.reserve(rho_list.size());
    for (double rho : rho_list) {
        if (!(rho >= 1.0))
            throw validation_error("profile radii must satisfy rho >= 1");
        if (rho > cap)
            throw validation_error("rho beyond the Nyquist guard " + std::to_string(cap) +
                                   "; plane-wave samples would alias");
        out.norms.push_back(build_gamma(W, rho).norm());
    }
    // least-squares slope of log(norm) against log(rho)
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t np = 0;
    for (std::size_t i = 0; i < rho_list.size(); ++i) {
        if (!(out.norms[i] > 0.0)) continue;
        double lx = std::log(rho_list[i]), ly = std::log(out.norms[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++np;
    }
    double denom = np * sxx - sx * sx;
    out.loglog_slope = (np >= 2 && std::abs(denom) > 0.0)
                           ? (np * sxy - sx * sy) / denom
                           : 0.0;
    return out;
}

struct HolderReport {
    double rho = 0.0;
    double rho_prime = 0.0;
    double y_diff = 0.0;
    double g_diff = 0.0;
    double y_rhs = 0.0;
    double g_rhs = 0.0;
    double y_ratio = 0.0;
    double g_ratio = 0.0;
};

// Moduli of continuity in the radius: ||Y_rho' - Y_rho|| and
// ||G_rho' - G_rho|| against |rho'-rho|^alpha rho^delta (rho^eps + rho'^eps)
// and its square, with C = 1, so a sweep exhibits the empirical constant.
inline HolderReport holder_modulus(const GridFunction& W, double rho, double rho_prime,
                                   const BoundParams& params) {
    const Grid& g = W.grid();
    if (!(rho >= 1.0) || rho_prime < rho)
        throw validation_error("holder modulus needs 1 <= rho <= rho'");
    const double cap = nyquist_radius_cap(g);
    if (rho_prime > cap)
        throw validation_error("rho' beyond the Nyquist guard; samples would alias");
    if (!(params.alpha < params.l() - 0.5))
        throw validation_error("alpha must satisfy alpha < l - 1/2", "bounds.alpha");

    // shared node set: both radii sampled with the finer quadrature
    SphereQuadrature quad = SphereQuadrature::standard(g.dimension(), rho_prime);
    RestrictionOperator A(W, rho, quad);
    RestrictionOperator B(W, rho_prime, quad);

    HolderReport rep;
    rep.rho = rho;
    rep.rho_prime = rho_prime;
    rep.y_diff = spectral_norm(B.matrix() - A.matrix());
    rep.g_diff = gram_difference_norm(B.matrix(), A.matrix());
    double dr = rho_prime - rho;
    double eps_sum = std::pow(rho, params.epsilon) + std::pow(rho_prime, params.epsilon);
    double base = std::pow(dr, params.alpha) * std::pow(rho, params.delta());
    rep.y_rhs = base * eps_sum;
    rep.g_rhs = base * eps_sum * eps_sum;
    rep.y_ratio = rep.y_rhs > 0.0 ? rep.y_diff / rep.y_rhs : 0.0;
    rep.g_ratio = rep.g_rhs > 0.0 ? rep.g_diff / rep.g_rhs : 0.0;
    return rep;
}

// Grid points with |V| above the support threshold, in flat-index order.
inline std::vector<std::size_t> support_indices(const GridFunction& V, double threshold) {
    std::vector<std::size_t> s;
    for (std::size_t j = 0; j < V.size(); ++j)
        if (std::abs(V[j]) > threshold) s.push_back(j);
    return s;
}

inline double default_support_threshold(const GridFunction& V) {
    return 1e-10 * V.sup_norm();
}

struct ShellDecomposition {
    std::vector<std::size_t> support;
    // Frequency sum regrouped over exact |xi| shells; agrees with the dense
    // Birman-Schwinger matrix to solver precision.
    MatrixXc exact_regroup;
    // Radial-bin surrogate sum_b G_{rho_b} drho / (rho_b^2 - lambda).
    MatrixXc binned;
    std::vector<double> bin_centers;
    double bin_width = 0.0;
    std::vector<int> flagged_bins; // bins whose rho^2 range passes near lambda
    double binned_vs_exact = 0.0;  // operator-norm discrepancy
};

// Shell representation of X = W (-Delta - lambda)^{-1} W. Spectral symbol
// only: shells are |xi| level sets, meaningless for the finite-difference
// dispersion.
inline ShellDecomposition shell_decomposition(const GridFunction& V, complexd lambda,
                                              int bins, double support_threshold = -1.0) {
    const Grid& g = V.grid();
    if (g.symbol() != LaplacianSymbol::spectral)
        throw validation_error("shell decomposition requires the spectral symbol");
    if (bins < 1) throw validation_error("bin count must be positive");
    if (g.resolvent_distance(lambda) < resolvent_pole_tolerance)
        throw singular_resolvent_error("lambda collides with the discrete spectrum",
                                       lambda.real());

    if (support_threshold < 0.0) support_threshold = default_support_threshold(V);
    ShellDecomposition out;
    out.support = support_indices(V, support_threshold);
    if (out.support.empty()) {
        // vanishing potential: both representations are the empty operator
        out.exact_regroup = MatrixXc::Zero(0, 0);
        out.binned = MatrixXc::Zero(0, 0);
        return out;
    }
    const std::size_t S = out.support.size();
    const std::size_t N = g.size();

    std::vector<double> Wvals(S);
    for (std::size_t c = 0; c < S; ++c) Wvals[c] = std::sqrt(std::abs(V[out.support[c]]));

    // group lexicographic frequencies by the integer square norm of m, which
    // identifies an exact shell
    std::map<long long, std::vector<std::size_t>> shells;
    const int n = g.points_per_axis();
    const int d = g.dimension();
    for (std::size_t lex = 0; lex < N; ++lex) {
        std::size_t rest = lex;
        long long m2 = 0;
        for (int a = 0; a < d; ++a) {
            long long m = static_cast<long long>(rest % static_cast<std::size_t>(n)) - n / 2;
            rest /= static_cast<std::size_t>(n);
            m2 += m * m;
        }
        shells[m2].push_back(lex);
    }

    const double scale = 1.0 / static_cast<double>(N);
    out.exact_regroup = MatrixXc::Zero(static_cast<Eigen::Index>(S),
                                       static_cast<Eigen::Index>(S));
    MatrixXc shell_vecs;
    for (const auto& [m2, members] : shells) {
        shell_vecs.resize(static_cast<Eigen::Index>(S),
                          static_cast<Eigen::Index>(members.size()));
        double mu = 0.0;
        for (std::size_t q = 0; q < members.size(); ++q) {
            auto xi = g.frequency_lex(members[q]);
            mu = g.multiplier_lex(members[q]);
            for (std::size_t c = 0; c < S; ++c) {
                auto x = g.point(out.support[c]);
                double phase = xi[0] * x[0] + xi[1] * x[1] + xi[2] * x[2];
                shell_vecs(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(q)) =
                    Wvals[c] * std::polar(1.0, phase);
            }
        }
        out.exact_regroup +=
            (scale / (mu - lambda)) * (shell_vecs * shell_vecs.adjoint());
    }

    // binned quadrature surrogate over (0, xi_max]
    const double xi_max = std::sqrt(g.max_multiplier());
    out.bin_width = xi_max / bins;
    GridFunction Wfun(g);
    for (std::size_t c = 0; c < S; ++c) Wfun[out.support[c]] = Wvals[c];
    out.binned = MatrixXc::Zero(static_cast<Eigen::Index>(S), static_cast<Eigen::Index>(S));
    for (int b = 0; b < bins; ++b) {
        double lo = b * out.bin_width, hi = lo + out.bin_width;
        double rc = 0.5 * (lo + hi);
        out.bin_centers.push_back(rc);
        // the bin's rho^2 range brushing lambda makes the surrogate unreliable
        if (lambda.real() >= lo * lo && lambda.real() <= hi * hi &&
            std::abs(lambda.imag()) < (hi * hi - lo * lo))
            out.flagged_bins.push_back(b);
        RestrictionOperator gamma(Wfun, rc, SphereQuadrature::standard(d, rc), out.support);
        out.binned += (out.bin_width / (rc * rc - lambda)) * gamma.gram();
    }
    out.binned_vs_exact = spectral_norm(out.binned - out.exact_regroup);
    return out;
}

// Best constant in the discrete trace inequality
//   int_{S_1} |phi|^2 dtheta <= C int (|grad^l phi|^2 + |phi|^2) dx,
// with phi trig-interpolated at the sphere nodes and the Sobolev form
// diagonal in frequency. The trace form has rank equal to the node count, so
// the generalized problem reduces exactly to a small Gram eigenproblem with
// entries
//   B_km = sqrt(w_k w_m) / (N h^d) sum_xi e^{i xi (theta_k - theta_m)}
//          / (|xi|^{2l} + 1).
inline double trace_constant_estimate(double l, const Grid& g) {
    if (!(l > 0.5))
        throw validation_error("trace estimate requires l > 1/2", "restriction.l");
    if (!(g.half_length() > 1.0))
        throw validation_error("box must contain the unit sphere (R > 1)", "grid.R");
    SphereQuadrature quad = SphereQuadrature::standard(g.dimension(), 1.0);
    const std::size_t k = quad.nodes.size();
    const std::size_t N = g.size();
    const auto& mu = g.multipliers();

    std::vector<double> sob(N);
    for (std::size_t f = 0; f < N; ++f) sob[f] = std::pow(mu[f], l) + 1.0;

    // frequency vectors in FFT layout
    std::vector<std::array<double, 3>> xi(N);
    for (std::size_t lex = 0; lex < N; ++lex) xi[g.lex_to_fft(lex)] = g.frequency_lex(lex);

    const double scale = 1.0 / (static_cast<double>(N) * g.cell_volume());
    MatrixXc B(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t s = r; s < k; ++s) {
            double dx0 = quad.nodes[r][0] - quad.nodes[s][0];
            double dx1 = quad.nodes[r][1] - quad.nodes[s][1];
            double dx2 = quad.nodes[r][2] - quad.nodes[s][2];
            complexd acc{0.0, 0.0};
            for (std::size_t f = 0; f < N; ++f) {
                double phase = xi[f][0] * dx0 + xi[f][1] * dx1 + xi[f][2] * dx2;
                acc += std::polar(1.0 / sob[f], phase);
            }
            complexd val = std::sqrt(quad.weights[r] * quad.weights[s]) * scale * acc;
            B(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) = val;
            B(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(r)) = std::conj(val);
        }
    }
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(B, Eigen::EigenvaluesOnly);
    return std::max(0.0, es.eigenvalues().maxCoeff());
}

} // namespace speclab
