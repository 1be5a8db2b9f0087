#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <vector>

#include "speclab/errors.hpp"
#include "speclab/fft.hpp"

namespace speclab {

using complexd = std::complex<double>;

// Symbol of the discrete Laplacian. `spectral` uses the exact multiplier
// |xi|^2 on the retained frequencies; `finite_difference` uses the
// second-order dispersion 2(1-cos(xi h))/h^2, kept as an option for
// convergence studies.
enum class LaplacianSymbol { spectral, finite_difference };

// Periodic box [-R, R)^d sampled with n points per axis. Frequencies are
// xi = pi m / R with integer m in [-n/2, n/2). Flat indices are row-major
// with axis 0 slowest (FFTW layout).
class Grid {
public:
    Grid(int dimension, int points_per_axis, double half_length,
         LaplacianSymbol symbol = LaplacianSymbol::spectral)
        : d_(dimension), n_(points_per_axis), R_(half_length), symbol_(symbol) {
        if (d_ < 1 || d_ > 3)
            throw validation_error("grid dimension must be 1, 2 or 3", "grid.d");
        if (n_ < 2 || n_ % 2 != 0)
            throw validation_error("points_per_axis must be a positive even integer", "grid.n");
        if (!(R_ > 0.0))
            throw validation_error("half_length must be positive", "grid.R");
        h_ = 2.0 * R_ / n_;
        size_ = 1;
        for (int a = 0; a < d_; ++a) size_ *= static_cast<std::size_t>(n_);
        plan_ = std::make_shared<FftPlan>(std::vector<int>(d_, n_));
        build_frequency_tables();
    }

    int dimension() const noexcept { return d_; }
    int points_per_axis() const noexcept { return n_; }
    double half_length() const noexcept { return R_; }
    double spacing() const noexcept { return h_; }
    std::size_t size() const noexcept { return size_; }
    LaplacianSymbol symbol() const noexcept { return symbol_; }
    double cell_volume() const noexcept { return std::pow(h_, d_); }
    double nyquist_frequency() const noexcept { return std::numbers::pi / h_; }

    bool compatible(const Grid& other) const noexcept {
        return d_ == other.d_ && n_ == other.n_ && R_ == other.R_ &&
               symbol_ == other.symbol_;
    }

    // Spatial coordinate of flat index j.
    std::array<double, 3> point(std::size_t j) const {
        std::array<double, 3> x{0.0, 0.0, 0.0};
        for (int a = d_ - 1; a >= 0; --a) {
            int idx = static_cast<int>(j % static_cast<std::size_t>(n_));
            j /= static_cast<std::size_t>(n_);
            x[static_cast<std::size_t>(a)] = -R_ + idx * h_;
        }
        return x;
    }

    double radius2(std::size_t j) const {
        auto x = point(j);
        return x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    }

    // Laplacian symbol per FFT-layout flat frequency index.
    const std::vector<double>& multipliers() const noexcept { return mu_fft_; }

    // Lexicographic frequency order over integer vectors m (axis 0 most
    // significant, m ascending from -n/2). Fixed so serialized operators are
    // reproducible bit for bit.
    std::size_t lex_to_fft(std::size_t lex) const { return lex_to_fft_[lex]; }
    double multiplier_lex(std::size_t lex) const { return mu_fft_[lex_to_fft_[lex]]; }

    // Frequency vector of a lexicographic index.
    std::array<double, 3> frequency_lex(std::size_t lex) const {
        std::array<double, 3> xi{0.0, 0.0, 0.0};
        double dxi = std::numbers::pi / R_;
        for (int a = d_ - 1; a >= 0; --a) {
            int m = static_cast<int>(lex % static_cast<std::size_t>(n_)) - n_ / 2;
            lex /= static_cast<std::size_t>(n_);
            xi[static_cast<std::size_t>(a)] = dxi * m;
        }
        return xi;
    }

    // Distance from lambda to the multiplier set (the discrete Laplacian
    // spectrum).
    double resolvent_distance(complexd lambda) const {
        double best = std::abs(lambda - mu_fft_[0]);
        for (double m : mu_fft_) best = std::min(best, std::abs(lambda - m));
        return best;
    }

    double max_multiplier() const noexcept { return mu_max_; }

    void forward(const std::vector<complexd>& in, std::vector<complexd>& out) const {
        out.resize(size_);
        plan_->forward(in.data(), out.data());
    }

    void inverse(const std::vector<complexd>& in, std::vector<complexd>& out) const {
        out.resize(size_);
        plan_->inverse(in.data(), out.data());
    }

private:
    void build_frequency_tables() {
        mu_fft_.assign(size_, 0.0);
        lex_to_fft_.assign(size_, 0);
        double dxi = std::numbers::pi / R_;
        // Per-axis symbol indexed by the FFT bin k (m = k for k < n/2, k - n
        // otherwise).
        std::vector<double> axis_mu(static_cast<std::size_t>(n_));
        for (int k = 0; k < n_; ++k) {
            int m = (k < n_ / 2) ? k : k - n_;
            double xi = dxi * m;
            if (symbol_ == LaplacianSymbol::spectral) {
                axis_mu[static_cast<std::size_t>(k)] = xi * xi;
            } else {
                axis_mu[static_cast<std::size_t>(k)] =
                    2.0 * (1.0 - std::cos(xi * h_)) / (h_ * h_);
            }
        }
        for (std::size_t f = 0; f < size_; ++f) {
            std::size_t rest = f;
            double mu = 0.0;
            for (int a = d_ - 1; a >= 0; --a) {
                std::size_t k = rest % static_cast<std::size_t>(n_);
                rest /= static_cast<std::size_t>(n_);
                mu += axis_mu[k];
            }
            mu_fft_[f] = mu;
        }
        mu_max_ = 0.0;
        for (double m : mu_fft_) mu_max_ = std::max(mu_max_, m);
        // lex index -> fft index: per axis, lex digit q = m + n/2, fft bin
        // k = m mod n.
        for (std::size_t lex = 0; lex < size_; ++lex) {
            std::size_t rest = lex;
            std::size_t fft = 0;
            std::size_t stride = 1;
            for (int a = d_ - 1; a >= 0; --a) {
                int q = static_cast<int>(rest % static_cast<std::size_t>(n_));
                rest /= static_cast<std::size_t>(n_);
                int m = q - n_ / 2;
                int k = m < 0 ? m + n_ : m;
                fft += static_cast<std::size_t>(k) * stride;
                stride *= static_cast<std::size_t>(n_);
            }
            lex_to_fft_[lex] = fft;
        }
    }

    int d_;
    int n_;
    double R_;
    LaplacianSymbol symbol_;
    double h_ = 0.0;
    std::size_t size_ = 0;
    double mu_max_ = 0.0;
    std::shared_ptr<FftPlan> plan_;
    std::vector<double> mu_fft_;
    std::vector<std::size_t> lex_to_fft_;
};

} // namespace speclab
