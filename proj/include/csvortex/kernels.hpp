#pragma once

#include <cstddef>
#include <vector>

namespace csvortex::kernels {

// The grid solvers run their pointwise inner loops through this layer.
// Every kernel has a serial reference implementation and an OpenMP one;
// the active backend is a process-wide switch (tests pin it, the bench
// target times both). Both variants produce identical results for a fixed
// thread count: reductions combine fixed-size per-thread partials in order.
enum class Backend { Serial, OpenMP };

Backend& backend();

// out[i] = lambda * f(u0[i] + v[i]) - K * v[i] + c   (iteration right side)
void iteration_rhs(const double* u0, const double* v, std::size_t n,
                   double lambda, double K, double c, double* out);

// Same with the quadratic nonlinearity e^w (e^w - 1).
void iteration_rhs_quadratic(const double* u0, const double* v, std::size_t n,
                             double mu, double K, double c, double* out);

// out[i] = e^{u[i]} (1 - e^{u[i]})^5 evaluated without truncation sign games:
// this is -f(u), the magnetic-flux integrand.
void flux_density(const double* u, std::size_t n, double* out);

double sum(const double* a, std::size_t n);
double min_val(const double* a, std::size_t n);
double max_val(const double* a, std::size_t n);
double max_abs(const double* a, std::size_t n);
// max over i of (a[i] - b[i]); the monotonicity check.
double max_diff(const double* a, const double* b, std::size_t n);
// max over i of |a[i] - b[i]|
double max_abs_diff(const double* a, const double* b, std::size_t n);

// 5-point Laplacian of a periodic field (row-major, nx rows of ny values).
void laplacian_periodic_5pt(const double* v, int nx, int ny,
                            double hx, double hy, double* out);

// 5-point Laplacian on interior nodes of a Dirichlet square (n x n row-major)
// with boundary closure values: west[j], east[j] at i = -1, n and
// south[i], north[i] at j = -1, n.
void laplacian_dirichlet_5pt(const double* v, int n, double h,
                             const double* west, const double* east,
                             const double* south, const double* north,
                             double* out);

inline double sum(const std::vector<double>& a) { return sum(a.data(), a.size()); }
inline double min_val(const std::vector<double>& a) { return min_val(a.data(), a.size()); }
inline double max_val(const std::vector<double>& a) { return max_val(a.data(), a.size()); }
inline double max_abs(const std::vector<double>& a) { return max_abs(a.data(), a.size()); }

} // namespace csvortex::kernels
