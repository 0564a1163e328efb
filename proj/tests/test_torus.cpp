#include "csvortex/torus.hpp"

#include "csvortex/diagnostics.hpp"
#include "csvortex/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace csvortex;
using namespace csvortex::torus;

namespace {

constexpr double pi = std::numbers::pi;

TorusGrid square_torus(int n) { return TorusGrid(2.0 * pi, 2.0 * pi, n, n); }

VortexSet center_vortex(int mult) {
    return VortexSet(std::vector<Vortex>{{pi, pi, mult}});
}

std::vector<double> total_u(const IterationOutcome& out) {
    std::vector<double> u(out.v.values.size());
    for (std::size_t m = 0; m < u.size(); ++m)
        u[m] = out.u0.values[m] + out.v.values[m];
    return u;
}

} // namespace

TEST_CASE("lambda_lower_bound pinned values") {
    CHECK(lambda_lower_bound(0, 1.0) == 0.0);
    CHECK(lambda_lower_bound(1, 1.0) == doctest::Approx(187.61490796273330).epsilon(1e-13));
    CHECK(lambda_lower_bound(1, 4.0 * pi * pi) ==
          doctest::Approx(4.7523411359331000).epsilon(1e-13));
}

TEST_CASE("kappa_c relations") {
    CHECK(kappa_c_from_lambda_c(12.0) == doctest::Approx(1.0).epsilon(1e-15));
    // lambda_c at the necessary bound maps exactly to the critical-coupling
    // upper bound sqrt(5^5 |O| / (6^5 2 pi N))
    const double kc = kappa_c_from_lambda_c(lambda_lower_bound(1, 1.0));
    CHECK(kc == doctest::Approx(0.25290472930372200707).epsilon(1e-13));
    const double kc2 = std::sqrt(3125.0 * 1.0 / (7776.0 * 2.0 * pi));
    CHECK(kc == doctest::Approx(kc2).epsilon(1e-14));
}

TEST_CASE("monotone iteration") {
    const auto grid = square_torus(32);
    const auto vs = center_vortex(1);
    const double bound = lambda_lower_bound(1, grid.area());

    SUBCASE("N = 0 converges immediately to the trivial solution") {
        const auto out = monotone_iterate(grid, VortexSet{}, 5.0);
        CHECK(out.tag == IterationTag::Converged);
        CHECK(out.iterations <= 2);
        CHECK(kernels::max_abs(out.v.values) < 1e-12);
    }

    SUBCASE("well above the bound: converged, u < 0, quantized discrete flux") {
        const double lambda = 2.0 * bound;
        const auto out = monotone_iterate(grid, vs, lambda);
        REQUIRE(out.tag == IterationTag::Converged);
        CHECK(out.final_residual < 10.0 * SolverOptions{}.tol);
        const auto u = total_u(out);
        CHECK(kernels::max_val(u) < 0.0);
        const double flux = diagnostics::flux_grid(u, lambda, grid.hx() * grid.hy());
        CHECK(std::fabs(flux - 2.0 * pi) / (2.0 * pi) < 1e-8);
    }

    SUBCASE("spectral cross-check: delta ring breaks strict monotonicity, flux agrees") {
        const double lambda = 2.0 * bound;
        SolverOptions strict;
        strict.op = TorusOperator::Spectral;
        CHECK_THROWS_AS(monotone_iterate(grid, vs, lambda, strict), MonotonicityViolation);

        // with the first-ring artifact admitted, the spectral fixed point
        // carries the same quantized flux
        SolverOptions lax = strict;
        lax.monotone_slack = 0.02;
        const auto out = monotone_iterate(grid, vs, lambda, lax);
        REQUIRE(out.tag == IterationTag::Converged);
        const auto u = total_u(out);
        const double flux = diagnostics::flux_grid(u, lambda, grid.hx() * grid.hy());
        CHECK(std::fabs(flux - 2.0 * pi) / (2.0 * pi) < 1e-8);
        const auto fd = monotone_iterate(grid, vs, lambda);
        // far from the vortex the two discretizations agree closely
        CHECK(std::fabs(out.v.at(0, 0) - fd.v.at(0, 0)) < 5e-3);
    }

    SUBCASE("below the necessary bound: diverged") {
        SolverOptions opts;
        opts.divergence_drop = 25.0;
        const auto out = monotone_iterate(grid, vs, 0.9 * bound, opts);
        CHECK(out.tag == IterationTag::Diverged);
    }

    SUBCASE("maximal solutions are monotone in lambda") {
        const auto o3 = monotone_iterate(grid, vs, 3.0 * bound);
        const auto o2 = monotone_iterate(grid, vs, 2.0 * bound);
        REQUIRE(o3.tag == IterationTag::Converged);
        REQUIRE(o2.tag == IterationTag::Converged);
        const double worst =
            kernels::max_diff(o2.v.values.data(), o3.v.values.data(), o2.v.values.size());
        CHECK(worst <= 1e-10);  // v_{3b} >= v_{2b} pointwise
    }

    SUBCASE("K below 6 lambda is rejected") {
        SolverOptions opts;
        opts.K = 5.0 * 2.0 * bound;
        CHECK_THROWS_AS(monotone_iterate(grid, vs, 2.0 * bound, opts),
                        std::invalid_argument);
    }
}

TEST_CASE("estimate_lambda_c") {
    SUBCASE("N = 0 degenerates to zero") {
        const auto est = estimate_lambda_c(square_torus(16), VortexSet{});
        CHECK(est.lambda_c == 0.0);
    }
    SUBCASE("single vortex estimate sits above the necessary bound") {
        const auto grid = square_torus(32);
        LambdaCOptions opts;
        opts.solver.tol = 1e-8;
        opts.solver.max_iter = 3000;
        opts.solver.divergence_drop = 25.0;
        const auto est = estimate_lambda_c(grid, center_vortex(1), opts);
        CHECK(est.lambda_c >= lambda_lower_bound(1, grid.area()));
        CHECK(est.bracket_width / est.lambda_c <= 2e-3);
        // converged probes exist on the high side, diverged on the low side
        bool any_conv = false, any_div = false;
        for (auto& [l, ok] : est.scan) (ok ? any_conv : any_div) = true;
        CHECK(any_conv);
        CHECK(any_div);
    }
}

TEST_CASE("construct_subsolution") {
    SUBCASE("N = 0 trivial") {
        const auto sub = construct_subsolution(square_torus(16), VortexSet{}, 0.1);
        CHECK(sub.valid_for_lambda_ge == 0.0);
        CHECK(kernels::max_abs(sub.w0.values) == 0.0);
    }
    SUBCASE("single vortex: certificate holds and the iteration converges") {
        const auto grid = square_torus(32);
        const auto vs = center_vortex(1);
        const auto sub = construct_subsolution(grid, vs, 0.8);
        CHECK(sub.valid_for_lambda_ge > 0.0);
        // exp(u0 + w0) <= 1 everywhere
        const auto u0 = build_background_u0(grid, vs);
        double mx = -1e300;
        for (std::size_t m = 0; m < u0.values.size(); ++m)
            mx = std::max(mx, u0.values[m] + sub.w0.values[m]);
        CHECK(mx <= 1e-12);
        // the mean of the cutoff obeys the disc-area bound
        CHECK(sub.mean_cutoff <= 4.0 * pi * 1 * 0.8 * 0.8 / grid.area());

        SolverOptions opts;
        opts.tol = 1e-8;
        opts.max_iter = 30000;
        const auto out = monotone_iterate(grid, vs, 1.1 * sub.valid_for_lambda_ge, opts);
        CHECK(out.tag == IterationTag::Converged);
    }
    SUBCASE("eps too large is rejected") {
        CHECK_THROWS_AS(construct_subsolution(square_torus(16), center_vortex(1), 3.0),
                        EpsTooLarge);
    }
}

TEST_CASE("action functional") {
    SUBCASE("constant field, trivial background") {
        const auto grid = square_torus(16);
        TorusField v(grid, 0.7), u0(grid, 0.0);
        const double lambda = 3.0;
        const double expect =
            lambda / 6.0 * std::pow(std::exp(0.7) - 1.0, 6.0) * grid.area();
        CHECK(action(v, u0, lambda, 0) == doctest::Approx(expect).epsilon(1e-12));
        TorusField z(grid, 0.0);
        CHECK(action(z, u0, lambda, 1) == 0.0);
    }

    SUBCASE("directional derivative matches the weak-form residual") {
        const auto grid = square_torus(32);
        const auto vs = center_vortex(1);
        const double lambda = 2.0 * lambda_lower_bound(1, grid.area());
        const auto out = monotone_iterate(grid, vs, lambda);
        REQUIRE(out.tag == IterationTag::Converged);
        const double c = 4.0 * pi / grid.area();

        TorusSpectral sp(grid, TorusOperator::Spectral);
        std::mt19937 rng(99);
        std::uniform_real_distribution<double> amp(-1.0, 1.0);
        for (int trial = 0; trial < 5; ++trial) {
            // smooth random direction from a few low Fourier modes
            TorusField phi(grid);
            const double a1 = amp(rng), a2 = amp(rng), a3 = amp(rng);
            for (int i = 0; i < grid.nx; ++i)
                for (int j = 0; j < grid.ny; ++j)
                    phi.at(i, j) = a1 * std::cos(grid.x(i)) + a2 * std::sin(grid.y(j)) +
                                   a3 * std::cos(grid.x(i) + 2.0 * grid.y(j));

            const double h = 1e-5;
            TorusField vp = out.v, vm = out.v;
            for (std::size_t m = 0; m < vp.values.size(); ++m) {
                vp.values[m] += h * phi.values[m];
                vm.values[m] -= h * phi.values[m];
            }
            const double fd = (action(vp, out.u0, lambda, 1) -
                               action(vm, out.u0, lambda, 1)) /
                              (2.0 * h);
            std::vector<double> gx, gy, px, py;
            sp.gradient(out.v.values, gx, gy);
            sp.gradient(phi.values, px, py);
            double weak = 0.0;
            for (std::size_t m = 0; m < gx.size(); ++m) {
                weak += gx[m] * px[m] + gy[m] * py[m];
                weak += (lambda * nonlinearity::f(out.u0.values[m] + out.v.values[m]) + c) *
                        phi.values[m];
            }
            weak *= grid.hx() * grid.hy();
            CHECK(std::fabs(fd - weak) < 1e-5 * (1.0 + std::fabs(fd)));
            // near-critical up to the spectral-vs-stencil discretization skew
            CHECK(std::fabs(fd) < 0.05);
        }
    }
}
