#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "speclab/errors.hpp"
#include "speclab/grid_function.hpp"
#include "speclab/operators.hpp"

namespace speclab {

enum class SolverMethod { dense, shift_invert };

// Eigenvalues with residual certificates ||Hv - lambda v|| / ||v||. Entries
// removed by the R+-proximity filter are kept for audit.
struct SpectrumResult {
    std::vector<complexd> eigenvalues;
    std::vector<double> residuals;
    SolverMethod method = SolverMethod::dense;
    std::vector<complexd> discarded_near_axis;

    double max_residual() const {
        double m = 0.0;
        for (double r : residuals) m = std::max(m, r);
        return m;
    }
};

struct DenseSolveOptions {
    std::size_t dense_limit = 4096;
    double residual_tol = 1e-8;
    // Detect numerically Hermitian input and route it through the symmetric
    // solver.
    bool hermitian_auto = true;
};

// Distance from lambda to the half line [0, inf).
inline double dist_to_positive_axis(complexd lambda) {
    if (lambda.real() >= 0.0) return std::abs(lambda.imag());
    return std::abs(lambda);
}

namespace detail {

// One step of inverse iteration against a slightly shifted matrix; used to
// push residuals below tolerance when the Schur-derived vector is not good
// enough.
inline void refine_eigenpair(const MatrixXc& A, complexd& lambda, VectorXc& v,
                             double& residual, double tol) {
    const double scale = A.norm();
    for (int pass = 0; pass < 4 && residual > tol; ++pass) {
        MatrixXc shifted = A;
        complexd shift = lambda + complexd(0.0, 0.0);
        // tiny diagonal offset keeps the LU factorization usable at an
        // exact eigenvalue
        shifted.diagonal().array() -= shift + complexd(1e-14 * (scale + 1.0), 0.0);
        Eigen::PartialPivLU<MatrixXc> lu(shifted);
        VectorXc w = lu.solve(v);
        double wn = w.norm();
        if (!(wn > 0.0) || !std::isfinite(wn)) break;
        w /= wn;
        complexd rayleigh = w.dot(A * w); // Eigen's dot conjugates the left argument
        VectorXc r = A * w - rayleigh * w;
        double res = r.norm();
        if (res < residual) {
            v = w;
            lambda = rayleigh;
            residual = res;
        } else {
            break;
        }
    }
}

} // namespace detail

// Full spectrum of a dense complex matrix with certified residuals.
inline SpectrumResult dense_eigenvalues(const MatrixXc& A,
                                        const DenseSolveOptions& opts = {}) {
    if (A.rows() != A.cols())
        throw validation_error("dense eigensolve requires a square matrix");
    if (static_cast<std::size_t>(A.rows()) > opts.dense_limit)
        throw validation_error("matrix dimension exceeds the dense limit");
    if (!A.allFinite())
        throw validation_error("matrix contains non-finite entries");

    SpectrumResult out;
    out.method = SolverMethod::dense;
    const Eigen::Index n = A.rows();
    if (n == 0) return out;

    const double scale = A.cwiseAbs().maxCoeff();
    bool hermitian = false;
    if (opts.hermitian_auto) {
        double dev = (A - A.adjoint()).cwiseAbs().maxCoeff();
        hermitian = dev <= 1e-14 * (scale + 1.0);
    }

    MatrixXc vectors;
    VectorXc values(n);
    if (hermitian) {
        Eigen::SelfAdjointEigenSolver<MatrixXc> es(A);
        if (es.info() != Eigen::Success)
            throw numerical_error("Hermitian eigensolver failed to converge");
        values = es.eigenvalues().cast<complexd>();
        vectors = es.eigenvectors();
    } else {
        Eigen::ComplexEigenSolver<MatrixXc> es(A, true);
        if (es.info() != Eigen::Success)
            throw numerical_error("complex Schur eigensolver failed to converge");
        values = es.eigenvalues();
        vectors = es.eigenvectors();
    }

    out.eigenvalues.resize(static_cast<std::size_t>(n));
    out.residuals.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        complexd lambda = values[i];
        VectorXc v = vectors.col(i);
        double vn = v.norm();
        if (vn > 0.0) v /= vn;
        double residual = (A * v - lambda * v).norm();
        if (residual > opts.residual_tol)
            detail::refine_eigenpair(A, lambda, v, residual, opts.residual_tol);
        if (residual > opts.residual_tol)
            throw numerical_error("eigenpair residual " + std::to_string(residual) +
                                  " above tolerance after refinement");
        out.eigenvalues[static_cast<std::size_t>(i)] = lambda;
        out.residuals[static_cast<std::size_t>(i)] = residual;
    }
    return out;
}

using ApplyFn = std::function<void(const VectorXc&, VectorXc&)>;

struct ShiftInvertOptions {
    int krylov_dim = 60;
    int max_restarts = 10;
    double residual_tol = 1e-8;
    int gmres_max_iter = 400;
    double gmres_tol = 1e-13;
    std::uint64_t seed = 0x5ec1ab;
    // Approximate inverse of (A - sigma); applied on the right inside GMRES.
    ApplyFn preconditioner;
};

namespace detail {

// Unrestarted GMRES with optional right preconditioning.
inline VectorXc gmres(const ApplyFn& op, const VectorXc& rhs, const ApplyFn& precond,
                      int max_iter, double tol) {
    const Eigen::Index n = rhs.size();
    const double bnorm = rhs.norm();
    if (bnorm == 0.0) return VectorXc::Zero(n);
    const int m = std::min<int>(max_iter, static_cast<int>(n));

    std::vector<VectorXc> V;
    V.reserve(static_cast<std::size_t>(m) + 1);
    V.push_back(rhs / bnorm);
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(m + 1, m);
    std::vector<complexd> cs(static_cast<std::size_t>(m)), sn(static_cast<std::size_t>(m));
    VectorXc g = VectorXc::Zero(m + 1);
    g[0] = bnorm;

    int iters = 0;
    VectorXc w(n), pw(n);
    for (int j = 0; j < m; ++j) {
        if (precond) {
            precond(V[static_cast<std::size_t>(j)], pw);
            op(pw, w);
        } else {
            op(V[static_cast<std::size_t>(j)], w);
        }
        for (int i = 0; i <= j; ++i) {
            complexd hij = V[static_cast<std::size_t>(i)].dot(w);
            H(i, j) = hij;
            w -= hij * V[static_cast<std::size_t>(i)];
        }
        H(j + 1, j) = w.norm();
        if (std::abs(H(j + 1, j)) > 0.0) V.push_back(w / H(j + 1, j));

        // apply accumulated Givens rotations, then form the new one
        for (int i = 0; i < j; ++i) {
            complexd t = cs[static_cast<std::size_t>(i)] * H(i, j) +
                         sn[static_cast<std::size_t>(i)] * H(i + 1, j);
            H(i + 1, j) = -std::conj(sn[static_cast<std::size_t>(i)]) * H(i, j) +
                          std::conj(cs[static_cast<std::size_t>(i)]) * H(i + 1, j);
            H(i, j) = t;
        }
        double denom = std::sqrt(std::norm(H(j, j)) + std::norm(H(j + 1, j)));
        if (denom == 0.0) {
            cs[static_cast<std::size_t>(j)] = 1.0;
            sn[static_cast<std::size_t>(j)] = 0.0;
        } else {
            cs[static_cast<std::size_t>(j)] = std::conj(H(j, j)) / denom;
            sn[static_cast<std::size_t>(j)] = std::conj(H(j + 1, j)) / denom;
        }
        H(j, j) = cs[static_cast<std::size_t>(j)] * H(j, j) +
                  sn[static_cast<std::size_t>(j)] * H(j + 1, j);
        H(j + 1, j) = 0.0;
        g[j + 1] = -std::conj(sn[static_cast<std::size_t>(j)]) * g[j];
        g[j] = cs[static_cast<std::size_t>(j)] * g[j];

        iters = j + 1;
        if (std::abs(g[j + 1]) <= tol * bnorm) break;
        if (static_cast<int>(V.size()) <= j + 1) break; // breakdown: exact solve reached
    }

    VectorXc y = H.topLeftCorner(iters, iters)
                     .triangularView<Eigen::Upper>()
                     .solve(g.head(iters));
    VectorXc x = VectorXc::Zero(n);
    for (int i = 0; i < iters; ++i) x += y[i] * V[static_cast<std::size_t>(i)];
    if (precond) {
        precond(x, pw);
        x = pw;
    }
    return x;
}

} // namespace detail

// k eigenvalues nearest sigma via Arnoldi on the shift-inverted operator;
// inner solves are GMRES. Residuals are certified against the original
// operator.
inline SpectrumResult shift_invert_eigenvalues(const ApplyFn& apply, Eigen::Index n,
                                               complexd sigma, int k,
                                               const ShiftInvertOptions& opts = {}) {
    if (k < 1) throw validation_error("eigenvalue count k must be positive");
    if (n < 1) throw validation_error("operator dimension must be positive");
    k = std::min<int>(k, static_cast<int>(n));

    ApplyFn shifted = [&](const VectorXc& x, VectorXc& y) {
        apply(x, y);
        y -= sigma * x;
    };
    auto solve_shifted = [&](const VectorXc& rhs) {
        VectorXc x = detail::gmres(shifted, rhs, opts.preconditioner, opts.gmres_max_iter,
                                   opts.gmres_tol);
        VectorXc check(n);
        shifted(x, check);
        double rel = (check - rhs).norm() / rhs.norm();
        if (rel > 1e-8)
            throw numerical_error("inner solve did not converge (relative residual " +
                                  std::to_string(rel) + "); shift may be singular");
        return x;
    };

    const int m = static_cast<int>(
        std::min<Eigen::Index>(std::max(opts.krylov_dim, 2 * k + 10), n));
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    VectorXc v0(n);
    for (Eigen::Index i = 0; i < n; ++i) v0[i] = complexd(unit(rng), unit(rng));
    v0.normalize();

    SpectrumResult out;
    out.method = SolverMethod::shift_invert;

    double best_residual = std::numeric_limits<double>::infinity();
    for (int restart = 0; restart <= opts.max_restarts; ++restart) {
        std::vector<VectorXc> V;
        V.reserve(static_cast<std::size_t>(m) + 1);
        V.push_back(v0);
        Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(m + 1, m);
        int built = 0;
        bool invariant = false;
        for (int j = 0; j < m; ++j) {
            VectorXc w = solve_shifted(V[static_cast<std::size_t>(j)]);
            for (int i = 0; i <= j; ++i) {
                complexd hij = V[static_cast<std::size_t>(i)].dot(w);
                H(i, j) = hij;
                w -= hij * V[static_cast<std::size_t>(i)];
            }
            // one re-orthogonalization pass
            for (int i = 0; i <= j; ++i) {
                complexd corr = V[static_cast<std::size_t>(i)].dot(w);
                H(i, j) += corr;
                w -= corr * V[static_cast<std::size_t>(i)];
            }
            H(j + 1, j) = w.norm();
            built = j + 1;
            if (std::abs(H(j + 1, j)) < 1e-14) {
                invariant = true;
                break;
            }
            V.push_back(w / H(j + 1, j));
        }

        Eigen::MatrixXcd Hm = H.topLeftCorner(built, built);
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(Hm, true);
        if (es.info() != Eigen::Success)
            throw numerical_error("Arnoldi projection eigensolve failed");

        // largest |theta| in the transformed spectrum <=> nearest sigma
        std::vector<int> order(static_cast<std::size_t>(built));
        for (int i = 0; i < built; ++i) order[static_cast<std::size_t>(i)] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return std::abs(es.eigenvalues()[a]) > std::abs(es.eigenvalues()[b]);
        });

        int wanted = std::min(k, built);
        out.eigenvalues.clear();
        out.residuals.clear();
        double worst = 0.0;
        VectorXc restart_dir = VectorXc::Zero(n);
        for (int t = 0; t < wanted; ++t) {
            int idx = order[static_cast<std::size_t>(t)];
            complexd theta = es.eigenvalues()[idx];
            if (std::abs(theta) == 0.0)
                throw numerical_error("vanishing Ritz value in shift-invert transform");
            complexd lambda = sigma + 1.0 / theta;
            VectorXc x = VectorXc::Zero(n);
            for (int i = 0; i < built; ++i)
                x += es.eigenvectors()(i, idx) * V[static_cast<std::size_t>(i)];
            x.normalize();
            VectorXc Ax(n);
            apply(x, Ax);
            double residual = (Ax - lambda * x).norm();
            worst = std::max(worst, residual);
            out.eigenvalues.push_back(lambda);
            out.residuals.push_back(residual);
            restart_dir += x;
        }
        best_residual = std::min(best_residual, worst);
        if (worst <= opts.residual_tol || invariant) {
            if (worst > opts.residual_tol)
                throw numerical_error(
                    "Krylov space exhausted with achieved residual " + std::to_string(worst));
            return out;
        }
        double rn = restart_dir.norm();
        if (rn > 0.0) {
            v0 = restart_dir / rn;
        } else {
            for (Eigen::Index i = 0; i < n; ++i) v0[i] = complexd(unit(rng), unit(rng));
            v0.normalize();
        }
    }
    throw numerical_error("shift-invert Arnoldi stagnated; achieved residual " +
                          std::to_string(best_residual));
}

struct OffAxisOptions {
    DenseSolveOptions dense;
    // Used when the grid exceeds the dense limit; each shift contributes
    // k_per_shift candidates.
    std::vector<complexd> shifts;
    int k_per_shift = 4;
    ShiftInvertOptions shift_invert;
};

// Eigenvalues of the discretized H = -Laplacian + V at distance > axis_margin
// from [0, inf). Closer eigenvalues approximate the continuous spectrum and
// are recorded separately.
inline SpectrumResult discrete_eigenvalues_offaxis(const GridFunction& V, double axis_margin,
                                                   const OffAxisOptions& opts = {}) {
    const Grid& g = V.grid();
    SpectrumResult raw;
    if (g.size() <= opts.dense.dense_limit) {
        raw = dense_eigenvalues(dense_hamiltonian(V), opts.dense);
    } else {
        if (opts.shifts.empty())
            throw validation_error(
                "grid exceeds the dense limit; supply shift-invert shifts", "solver.shifts");
        raw.method = SolverMethod::shift_invert;
        ApplyFn apply = [&V, &g](const VectorXc& x, VectorXc& y) {
            GridFunction u(g, std::vector<complexd>(x.data(), x.data() + x.size()));
            GridFunction hu = apply_hamiltonian(V, u);
            y = Eigen::Map<const VectorXc>(hu.values().data(),
                                           static_cast<Eigen::Index>(hu.size()));
        };
        for (complexd sigma : opts.shifts) {
            ShiftInvertOptions si = opts.shift_invert;
            if (!si.preconditioner) {
                si.preconditioner = [&g, sigma](const VectorXc& x, VectorXc& y) {
                    GridFunction u(g, std::vector<complexd>(x.data(), x.data() + x.size()));
                    GridFunction ru = apply_free_resolvent(sigma, u);
                    y = Eigen::Map<const VectorXc>(ru.values().data(),
                                                   static_cast<Eigen::Index>(ru.size()));
                };
            }
            SpectrumResult part = shift_invert_eigenvalues(
                apply, static_cast<Eigen::Index>(g.size()), sigma, opts.k_per_shift, si);
            for (std::size_t i = 0; i < part.eigenvalues.size(); ++i) {
                bool duplicate = false;
                for (complexd seen : raw.eigenvalues)
                    if (std::abs(seen - part.eigenvalues[i]) < 1e-7) duplicate = true;
                if (!duplicate) {
                    raw.eigenvalues.push_back(part.eigenvalues[i]);
                    raw.residuals.push_back(part.residuals[i]);
                }
            }
        }
    }

    SpectrumResult out;
    out.method = raw.method;
    for (std::size_t i = 0; i < raw.eigenvalues.size(); ++i) {
        if (dist_to_positive_axis(raw.eigenvalues[i]) > axis_margin) {
            out.eigenvalues.push_back(raw.eigenvalues[i]);
            out.residuals.push_back(raw.residuals[i]);
        } else {
            out.discarded_near_axis.push_back(raw.eigenvalues[i]);
        }
    }
    return out;
}

// Default R+-proximity margin: a fixed fraction of the kinetic energy scale.
inline double default_axis_margin(const Grid& g) { return 1e-2 * g.max_multiplier(); }

} // namespace speclab
