#include "csvortex/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <array>
#include <mutex>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace csvortex {

namespace {

// FFTW plan creation is not thread safe; execution of distinct plans is.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

void init_fftw_threads() {
#ifdef CSVORTEX_FFTW_OMP
    static std::once_flag once;
    std::call_once(once, [] {
        fftw_init_threads();
        fftw_plan_with_nthreads(omp_get_max_threads());
    });
#endif
}

} // namespace

struct TorusSpectral::Impl {
    TorusGrid grid;
    TorusOperator op;
    int nx, ny, nyh;
    double* real = nullptr;
    fftw_complex* spec = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    std::vector<double> eig;  // eigenvalue of Lap per retained mode (i, jh)

    Impl(const TorusGrid& g, TorusOperator o) : grid(g), op(o), nx(g.nx), ny(g.ny) {
        nyh = ny / 2 + 1;
        init_fftw_threads();
        real = fftw_alloc_real(static_cast<std::size_t>(nx) * ny);
        spec = fftw_alloc_complex(static_cast<std::size_t>(nx) * nyh);
        {
            std::lock_guard<std::mutex> lock(plan_mutex());
            fwd = fftw_plan_dft_r2c_2d(nx, ny, real, spec, FFTW_MEASURE);
            bwd = fftw_plan_dft_c2r_2d(nx, ny, spec, real, FFTW_MEASURE);
        }
        eig.resize(static_cast<std::size_t>(nx) * nyh);
        const double pi = std::numbers::pi;
        const double hx = g.hx(), hy = g.hy();
        for (int i = 0; i < nx; ++i) {
            const int ki = (i <= nx / 2) ? i : i - nx;
            const double fx = 2.0 * pi * ki / g.Lx;
            for (int jh = 0; jh < nyh; ++jh) {
                const double fy = 2.0 * pi * jh / g.Ly;
                double e;
                if (op == TorusOperator::Spectral) {
                    e = -(fx * fx + fy * fy);
                } else {
                    const double sx = std::sin(pi * i / nx);
                    const double sy = std::sin(pi * jh / ny);
                    e = -4.0 * (sx * sx / (hx * hx) + sy * sy / (hy * hy));
                }
                eig[static_cast<std::size_t>(i) * nyh + jh] = e;
            }
        }
    }

    ~Impl() {
        std::lock_guard<std::mutex> lock(plan_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        fftw_free(real);
        fftw_free(spec);
    }

    // out_hat[m] = in_hat[m] * factor(eig[m]); handles normalization.
    template <class Factor>
    void filter(const std::vector<double>& in, std::vector<double>& out, Factor factor) {
        const std::size_t nn = static_cast<std::size_t>(nx) * ny;
        std::copy(in.begin(), in.end(), real);
        fftw_execute(fwd);
        const double norm = 1.0 / static_cast<double>(nn);
        const std::size_t nm = static_cast<std::size_t>(nx) * nyh;
        for (std::size_t m = 0; m < nm; ++m) {
            const double fac = factor(eig[m], m == 0) * norm;
            spec[m][0] *= fac;
            spec[m][1] *= fac;
        }
        fftw_execute(bwd);
        out.assign(real, real + nn);
    }
};

TorusSpectral::TorusSpectral(const TorusGrid& grid, TorusOperator op)
    : impl_(std::make_unique<Impl>(grid, op)) {}

TorusSpectral::~TorusSpectral() = default;

const TorusGrid& TorusSpectral::grid() const { return impl_->grid; }
TorusOperator TorusSpectral::op() const { return impl_->op; }

void TorusSpectral::solve_poisson_zero_mean(const std::vector<double>& rhs,
                                            std::vector<double>& out) {
    impl_->filter(rhs, out, [](double e, bool zero_mode) {
        return zero_mode ? 0.0 : 1.0 / e;
    });
}

void TorusSpectral::solve_helmholtz(double K, const std::vector<double>& rhs,
                                    std::vector<double>& out) {
    impl_->filter(rhs, out, [K](double e, bool) { return 1.0 / (e - K); });
}

void TorusSpectral::laplacian(const std::vector<double>& v, std::vector<double>& out) {
    impl_->filter(v, out, [](double e, bool) { return e; });
}

void TorusSpectral::gradient(const std::vector<double>& v, std::vector<double>& gx,
                             std::vector<double>& gy) {
    auto& im = *impl_;
    const std::size_t nn = static_cast<std::size_t>(im.nx) * im.ny;
    const double norm = 1.0 / static_cast<double>(nn);
    const double pi = std::numbers::pi;

    // d/dx: multiply mode (ki, kj) by i*fx; the Nyquist mode ki = nx/2 has no
    // well-defined odd derivative and is zeroed.
    std::copy(v.begin(), v.end(), im.real);
    fftw_execute(im.fwd);
    std::vector<std::array<double, 2>> saved(static_cast<std::size_t>(im.nx) * im.nyh);
    for (std::size_t m = 0; m < saved.size(); ++m) {
        saved[m][0] = im.spec[m][0];
        saved[m][1] = im.spec[m][1];
    }

    for (int i = 0; i < im.nx; ++i) {
        const int ki = (i <= im.nx / 2) ? i : i - im.nx;
        const double fx = (i == im.nx / 2) ? 0.0 : 2.0 * pi * ki / im.grid.Lx;
        for (int jh = 0; jh < im.nyh; ++jh) {
            const std::size_t m = static_cast<std::size_t>(i) * im.nyh + jh;
            const double re = saved[m][0], imv = saved[m][1];
            im.spec[m][0] = -fx * imv * norm;
            im.spec[m][1] = fx * re * norm;
        }
    }
    fftw_execute(im.bwd);
    gx.assign(im.real, im.real + nn);

    for (int i = 0; i < im.nx; ++i) {
        for (int jh = 0; jh < im.nyh; ++jh) {
            const double fy = (jh == im.ny / 2) ? 0.0 : 2.0 * pi * jh / im.grid.Ly;
            const std::size_t m = static_cast<std::size_t>(i) * im.nyh + jh;
            const double re = saved[m][0], imv = saved[m][1];
            im.spec[m][0] = -fy * imv * norm;
            im.spec[m][1] = fy * re * norm;
        }
    }
    fftw_execute(im.bwd);
    gy.assign(im.real, im.real + nn);
}

} // namespace csvortex
