#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "speclab/errors.hpp"
#include "speclab/grid.hpp"

namespace speclab {

// Complex samples on a grid. The L2 inner product carries the cell volume
// h^d so that sums approximate integrals.
class GridFunction {
public:
    GridFunction(Grid grid, std::vector<complexd> values)
        : grid_(std::move(grid)), values_(std::move(values)) {
        if (values_.size() != grid_.size())
            throw validation_error("value array length must equal the grid size");
    }

    explicit GridFunction(Grid grid)
        : grid_(std::move(grid)), values_(grid_.size(), complexd{0.0, 0.0}) {}

    const Grid& grid() const noexcept { return grid_; }
    const std::vector<complexd>& values() const noexcept { return values_; }
    std::vector<complexd>& values() noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    complexd operator[](std::size_t i) const { return values_[i]; }
    complexd& operator[](std::size_t i) { return values_[i]; }

    double norm() const {
        double s = 0.0;
        for (const auto& v : values_) s += std::norm(v);
        return std::sqrt(s * grid_.cell_volume());
    }

    complexd dot(const GridFunction& other) const {
        require_same_grid(other);
        complexd s{0.0, 0.0};
        for (std::size_t i = 0; i < values_.size(); ++i)
            s += std::conj(values_[i]) * other.values_[i];
        return s * grid_.cell_volume();
    }

    double sup_norm() const {
        double m = 0.0;
        for (const auto& v : values_) m = std::max(m, std::abs(v));
        return m;
    }

    // Grid quadrature of |u|: h^d sum |u_j|.
    double integral_abs() const {
        double s = 0.0;
        for (const auto& v : values_) s += std::abs(v);
        return s * grid_.cell_volume();
    }

    // Grid quadrature of |u|^q.
    double integral_abs_pow(double q) const {
        double s = 0.0;
        for (const auto& v : values_) {
            double a = std::abs(v);
            if (a > 0.0) s += std::pow(a, q);
        }
        return s * grid_.cell_volume();
    }

    void require_same_grid(const GridFunction& other) const {
        if (!grid_.compatible(other.grid_))
            throw validation_error("grid mismatch between operands");
    }

    GridFunction& operator+=(const GridFunction& other) {
        require_same_grid(other);
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
        return *this;
    }

    GridFunction& operator-=(const GridFunction& other) {
        require_same_grid(other);
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
        return *this;
    }

    GridFunction& operator*=(complexd c) {
        for (auto& v : values_) v *= c;
        return *this;
    }

    friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
    friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
    friend GridFunction operator*(complexd c, GridFunction a) { return a *= c; }

    // Pointwise product.
    friend GridFunction hadamard(const GridFunction& a, const GridFunction& b) {
        a.require_same_grid(b);
        GridFunction out(a.grid_);
        for (std::size_t i = 0; i < a.values_.size(); ++i)
            out.values_[i] = a.values_[i] * b.values_[i];
        return out;
    }

    // Kronecker delta at flat index j.
    static GridFunction delta(const Grid& grid, std::size_t j) {
        GridFunction out(grid);
        out[j] = complexd{1.0, 0.0};
        return out;
    }

    // Plane wave e^{i xi x} for the frequency with the given lexicographic
    // index.
    static GridFunction fourier_mode(const Grid& grid, std::size_t lex) {
        GridFunction out(grid);
        auto xi = grid.frequency_lex(lex);
        for (std::size_t j = 0; j < grid.size(); ++j) {
            auto x = grid.point(j);
            double phase = xi[0] * x[0] + xi[1] * x[1] + xi[2] * x[2];
            out[j] = std::polar(1.0, phase);
        }
        return out;
    }

private:
    Grid grid_;
    std::vector<complexd> values_;
};

} // namespace speclab
