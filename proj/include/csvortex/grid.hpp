#pragma once

#include "csvortex/kernels.hpp"

#include <stdexcept>
#include <vector>

namespace csvortex {

// Uniform doubly periodic grid: node (i, j) sits at (i*hx, j*hy),
// i = 0..nx-1, j = 0..ny-1. Even node counts keep the real transforms clean.
struct TorusGrid {
    double Lx = 0.0;
    double Ly = 0.0;
    int nx = 0;
    int ny = 0;

    TorusGrid() = default;
    TorusGrid(double lx, double ly, int nx_, int ny_) : Lx(lx), Ly(ly), nx(nx_), ny(ny_) {
        if (!(Lx > 0.0) || !(Ly > 0.0)) throw std::invalid_argument("periods must be positive");
        if (nx < 16 || ny < 16 || nx % 2 != 0 || ny % 2 != 0)
            throw std::invalid_argument("nx, ny must be even and >= 16");
    }

    double hx() const { return Lx / nx; }
    double hy() const { return Ly / ny; }
    double area() const { return Lx * Ly; }
    std::size_t count() const { return static_cast<std::size_t>(nx) * ny; }
    double x(int i) const { return i * hx(); }
    double y(int j) const { return j * hy(); }

    bool operator==(const TorusGrid& o) const {
        return Lx == o.Lx && Ly == o.Ly && nx == o.nx && ny == o.ny;
    }
};

struct TorusField {
    TorusGrid grid;
    std::vector<double> values;  // row-major, index i*ny + j

    TorusField() = default;
    explicit TorusField(const TorusGrid& g, double fill = 0.0)
        : grid(g), values(g.count(), fill) {}

    double& at(int i, int j) { return values[static_cast<std::size_t>(i) * grid.ny + j]; }
    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * grid.ny + j]; }

    double mean() const { return kernels::sum(values) / static_cast<double>(values.size()); }
    double min() const { return kernels::min_val(values); }
    double max() const { return kernels::max_val(values); }
};

} // namespace csvortex
