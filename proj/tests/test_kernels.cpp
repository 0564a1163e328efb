#include "csvortex/kernels.hpp"

#include "csvortex/model.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace csvortex;
namespace kn = csvortex::kernels;

namespace {

std::vector<double> random_field(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-3.0, 0.5);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
}

struct BackendGuard {
    kn::Backend saved;
    BackendGuard() : saved(kn::backend()) {}
    ~BackendGuard() { kn::backend() = saved; }
};

} // namespace

TEST_CASE("serial and OpenMP kernels agree") {
    BackendGuard guard;
    const std::size_t n = 64 * 64 + 17;  // deliberately not thread-aligned
    const auto u0 = random_field(n, 1);
    const auto v = random_field(n, 2);
    std::vector<double> a(n), b(n);

    kn::backend() = kn::Backend::Serial;
    kn::iteration_rhs(u0.data(), v.data(), n, 7.0, 42.0, 0.318, a.data());
    const double s_sum = kn::sum(v);
    const double s_min = kn::min_val(v);
    const double s_max = kn::max_val(v);
    const double s_maxabs = kn::max_abs(v);
    const double s_maxdiff = kn::max_diff(u0.data(), v.data(), n);

    kn::backend() = kn::Backend::OpenMP;
    kn::iteration_rhs(u0.data(), v.data(), n, 7.0, 42.0, 0.318, b.data());
    for (std::size_t i = 0; i < n; ++i) CHECK(a[i] == b[i]);
    CHECK(kn::min_val(v) == s_min);
    CHECK(kn::max_val(v) == s_max);
    CHECK(kn::max_abs(v) == s_maxabs);
    CHECK(kn::max_diff(u0.data(), v.data(), n) == s_maxdiff);
    CHECK(std::fabs(kn::sum(v) - s_sum) <= 1e-12 * std::fabs(s_sum));
}

TEST_CASE("periodic 5-point laplacian on an eigenmode") {
    BackendGuard guard;
    const int nx = 32, ny = 24;
    const double Lx = 2.0, Ly = 3.0;
    const double hx = Lx / nx, hy = Ly / ny;
    std::vector<double> v(static_cast<std::size_t>(nx) * ny), lap(v.size());
    const double kx = 2.0 * M_PI * 3 / Lx;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            v[static_cast<std::size_t>(i) * ny + j] = std::cos(kx * i * hx);
    for (auto mode : {kn::Backend::Serial, kn::Backend::OpenMP}) {
        kn::backend() = mode;
        kn::laplacian_periodic_5pt(v.data(), nx, ny, hx, hy, lap.data());
        const double eig = -4.0 / (hx * hx) * std::pow(std::sin(kx * hx / 2.0), 2);
        for (std::size_t m = 0; m < v.size(); ++m)
            CHECK(lap[m] == doctest::Approx(eig * v[m]).epsilon(1e-10));
    }
}

TEST_CASE("dirichlet 5-point laplacian exact on bilinear-quadratic data") {
    const int n = 16;
    const double h = 0.25;
    std::vector<double> v(static_cast<std::size_t>(n) * n);
    std::vector<double> west(n), east(n), south(n), north(n);
    auto f = [](double x, double y) { return x * x - 2.0 * y * y + 3.0 * x * y + x; };
    auto coord = [&](int k) { return (k + 1) * h; };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            v[static_cast<std::size_t>(i) * n + j] = f(coord(i), coord(j));
    for (int k = 0; k < n; ++k) {
        west[k] = f(0.0, coord(k));
        east[k] = f(coord(n), coord(k));
        south[k] = f(coord(k), 0.0);
        north[k] = f(coord(k), coord(n));
    }
    std::vector<double> lap(v.size());
    kn::laplacian_dirichlet_5pt(v.data(), n, h, west.data(), east.data(), south.data(),
                                north.data(), lap.data());
    for (std::size_t m = 0; m < lap.size(); ++m)
        CHECK(lap[m] == doctest::Approx(2.0 - 4.0).epsilon(1e-10));
}
