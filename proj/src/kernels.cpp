#include "csvortex/kernels.hpp"

#include "csvortex/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace csvortex::kernels {

Backend& backend() {
#ifdef _OPENMP
    static Backend b = Backend::OpenMP;
#else
    static Backend b = Backend::Serial;
#endif
    return b;
}

namespace {

bool use_omp() {
#ifdef _OPENMP
    return backend() == Backend::OpenMP;
#else
    return false;
#endif
}

// Ordered combination of per-thread partial reductions keeps results
// independent of scheduling for a fixed thread count.
template <class Fold>
double reduce(const double* a, std::size_t n, double init, Fold fold) {
    if (!use_omp()) {
        double acc = init;
        for (std::size_t i = 0; i < n; ++i) acc = fold(acc, a[i]);
        return acc;
    }
#ifdef _OPENMP
    const int nt = omp_get_max_threads();
    std::vector<double> partial(static_cast<std::size_t>(nt), init);
#pragma omp parallel num_threads(nt)
    {
        const int t = omp_get_thread_num();
        const std::size_t lo = n * static_cast<std::size_t>(t) / nt;
        const std::size_t hi = n * static_cast<std::size_t>(t + 1) / nt;
        double acc = init;
        for (std::size_t i = lo; i < hi; ++i) acc = fold(acc, a[i]);
        partial[static_cast<std::size_t>(t)] = acc;
    }
    double acc = init;
    for (double p : partial) acc = fold(acc, p);
    return acc;
#else
    return init;
#endif
}

} // namespace

void iteration_rhs(const double* u0, const double* v, std::size_t n,
                   double lambda, double K, double c, double* out) {
    if (use_omp()) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
            out[i] = lambda * nonlinearity::f(u0[i] + v[i]) - K * v[i] + c;
    } else {
        for (std::size_t i = 0; i < n; ++i)
            out[i] = lambda * nonlinearity::f(u0[i] + v[i]) - K * v[i] + c;
    }
}

void iteration_rhs_quadratic(const double* u0, const double* v, std::size_t n,
                             double mu, double K, double c, double* out) {
    if (use_omp()) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
            out[i] = mu * nonlinearity::f_quadratic(u0[i] + v[i]) - K * v[i] + c;
    } else {
        for (std::size_t i = 0; i < n; ++i)
            out[i] = mu * nonlinearity::f_quadratic(u0[i] + v[i]) - K * v[i] + c;
    }
}

void flux_density(const double* u, std::size_t n, double* out) {
    if (use_omp()) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
            out[i] = -nonlinearity::f(u[i]);
    } else {
        for (std::size_t i = 0; i < n; ++i) out[i] = -nonlinearity::f(u[i]);
    }
}

double sum(const double* a, std::size_t n) {
    return reduce(a, n, 0.0, [](double x, double y) { return x + y; });
}

double min_val(const double* a, std::size_t n) {
    return reduce(a, n, std::numeric_limits<double>::infinity(),
                  [](double x, double y) { return std::min(x, y); });
}

double max_val(const double* a, std::size_t n) {
    return reduce(a, n, -std::numeric_limits<double>::infinity(),
                  [](double x, double y) { return std::max(x, y); });
}

double max_abs(const double* a, std::size_t n) {
    return reduce(a, n, 0.0,
                  [](double x, double y) { return std::max(x, std::fabs(y)); });
}

namespace {

template <class Map>
double reduce_pair(const double* a, const double* b, std::size_t n, Map map) {
    if (!use_omp()) {
        double acc = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) acc = std::max(acc, map(a[i], b[i]));
        return acc;
    }
#ifdef _OPENMP
    const int nt = omp_get_max_threads();
    std::vector<double> partial(static_cast<std::size_t>(nt),
                                -std::numeric_limits<double>::infinity());
#pragma omp parallel num_threads(nt)
    {
        const int t = omp_get_thread_num();
        const std::size_t lo = n * static_cast<std::size_t>(t) / nt;
        const std::size_t hi = n * static_cast<std::size_t>(t + 1) / nt;
        double acc = -std::numeric_limits<double>::infinity();
        for (std::size_t i = lo; i < hi; ++i) acc = std::max(acc, map(a[i], b[i]));
        partial[static_cast<std::size_t>(t)] = acc;
    }
    double acc = -std::numeric_limits<double>::infinity();
    for (double p : partial) acc = std::max(acc, p);
    return acc;
#else
    return 0.0;
#endif
}

} // namespace

double max_diff(const double* a, const double* b, std::size_t n) {
    return reduce_pair(a, b, n, [](double x, double y) { return x - y; });
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
    return reduce_pair(a, b, n, [](double x, double y) { return std::fabs(x - y); });
}

void laplacian_periodic_5pt(const double* v, int nx, int ny,
                            double hx, double hy, double* out) {
    const double ax = 1.0 / (hx * hx);
    const double ay = 1.0 / (hy * hy);
    auto row = [&](int i) {
        const int im = (i + nx - 1) % nx;
        const int ip = (i + 1) % nx;
        for (int j = 0; j < ny; ++j) {
            const int jm = (j + ny - 1) % ny;
            const int jp = (j + 1) % ny;
            const double c = v[i * ny + j];
            out[i * ny + j] = ax * (v[im * ny + j] + v[ip * ny + j] - 2.0 * c) +
                              ay * (v[i * ny + jm] + v[i * ny + jp] - 2.0 * c);
        }
    };
    if (use_omp()) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < nx; ++i) row(i);
    } else {
        for (int i = 0; i < nx; ++i) row(i);
    }
}

void laplacian_dirichlet_5pt(const double* v, int n, double h,
                             const double* west, const double* east,
                             const double* south, const double* north,
                             double* out) {
    const double a = 1.0 / (h * h);
    auto row = [&](int i) {
        for (int j = 0; j < n; ++j) {
            const double c = v[i * n + j];
            const double w = (i > 0) ? v[(i - 1) * n + j] : west[j];
            const double e = (i < n - 1) ? v[(i + 1) * n + j] : east[j];
            const double s = (j > 0) ? v[i * n + j - 1] : south[i];
            const double t = (j < n - 1) ? v[i * n + j + 1] : north[i];
            out[i * n + j] = a * (w + e + s + t - 4.0 * c);
        }
    };
    if (use_omp()) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) row(i);
    } else {
        for (int i = 0; i < n; ++i) row(i);
    }
}

} // namespace csvortex::kernels
