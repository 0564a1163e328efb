#pragma once

#include "csvortex/grid.hpp"

#include <memory>
#include <vector>

namespace csvortex {

// Which discrete Laplacian the torus solver diagonalizes. Both share the
// Fourier eigenbasis; they differ only in the eigenvalue table.
//   Spectral:         -|k|^2
//   FiniteDifference: -(4/hx^2) sin^2(pi i/nx) - (4/hy^2) sin^2(pi j/ny)
// The finite-difference mode matches the 5-point stencil exactly, which makes
// maximum-principle based monotonicity hold to roundoff.
enum class TorusOperator { Spectral, FiniteDifference };

// FFT-backed constant-coefficient solves on the torus. One instance per
// solve; instances own their FFTW plans and scratch buffers.
class TorusSpectral {
public:
    TorusSpectral(const TorusGrid& grid, TorusOperator op);
    ~TorusSpectral();
    TorusSpectral(const TorusSpectral&) = delete;
    TorusSpectral& operator=(const TorusSpectral&) = delete;

    const TorusGrid& grid() const;
    TorusOperator op() const;

    // Unique periodic solution of Lap(v) = rhs with mean(v) = 0; the rhs zero
    // mode is dropped (caller guarantees it is mean-free up to roundoff).
    void solve_poisson_zero_mean(const std::vector<double>& rhs, std::vector<double>& out);

    // Unique periodic solution of (Lap - K) v = rhs, K > 0.
    void solve_helmholtz(double K, const std::vector<double>& rhs, std::vector<double>& out);

    // Lap(v) through the operator's eigenvalue table.
    void laplacian(const std::vector<double>& v, std::vector<double>& out);

    // Spectral gradient (exact for the trigonometric interpolant).
    void gradient(const std::vector<double>& v, std::vector<double>& gx,
                  std::vector<double>& gy);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace csvortex
