#include "csvortex/torus.hpp"

#include "csvortex/errors.hpp"
#include "csvortex/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace csvortex::torus {

namespace {

constexpr double pow6_6 = 46656.0;  // 6^6
constexpr double pow5_5 = 3125.0;   // 5^5

double min_plus(const std::vector<double>& a, const std::vector<double>& b) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) m = std::min(m, a[i] + b[i]);
    return m;
}

// periodic distance on the torus
double torus_dist(const TorusGrid& g, double x0, double y0, double x1, double y1) {
    double dx = std::fabs(x0 - x1);
    double dy = std::fabs(y0 - y1);
    dx = std::min(dx, g.Lx - dx);
    dy = std::min(dy, g.Ly - dy);
    return std::hypot(dx, dy);
}

} // namespace

TorusField build_background_u0(const TorusGrid& grid, const VortexSet& vortices,
                               TorusOperator op) {
    const double c = -4.0 * std::numbers::pi * vortices.total_winding() / grid.area();
    TorusField rhs(grid, c);
    std::vector<std::pair<int, int>> used;
    for (const auto& v : vortices) {
        if (!(v.x >= 0.0 && v.x < grid.Lx && v.y >= 0.0 && v.y < grid.Ly))
            throw std::invalid_argument("vortex point outside [0,Lx)x[0,Ly)");
        const int i = static_cast<int>(std::lround(v.x / grid.hx())) % grid.nx;
        const int j = static_cast<int>(std::lround(v.y / grid.hy())) % grid.ny;
        for (const auto& [pi_, pj_] : used)
            if (pi_ == i && pj_ == j)
                throw VortexOnSharedNode("two vortices round to grid node (" +
                                         std::to_string(i) + "," + std::to_string(j) + ")");
        used.emplace_back(i, j);
        rhs.at(i, j) += 4.0 * std::numbers::pi * v.multiplicity / (grid.hx() * grid.hy());
    }
    TorusSpectral solver(grid, op);
    TorusField u0(grid);
    solver.solve_poisson_zero_mean(rhs.values, u0.values);
    return u0;
}

TorusField helmholtz_solve(const TorusGrid& grid, double K, const TorusField& rhs,
                           TorusOperator op) {
    if (!(K > 0.0)) throw std::invalid_argument("K must be positive");
    TorusSpectral solver(grid, op);
    TorusField v(grid);
    solver.solve_helmholtz(K, rhs.values, v.values);
    return v;
}

double equation_residual(const TorusField& v, const TorusField& u0, double lambda,
                         int N, TorusOperator op) {
    const auto& g = v.grid;
    TorusSpectral solver(g, op);
    std::vector<double> lap(g.count());
    solver.laplacian(v.values, lap);
    const double c = 4.0 * std::numbers::pi * N / g.area();
    double sup = 0.0;
    for (std::size_t m = 0; m < lap.size(); ++m) {
        const double r = lap[m] - lambda * nonlinearity::f(u0.values[m] + v.values[m]) - c;
        sup = std::max(sup, std::fabs(r));
    }
    return sup;
}

IterationOutcome monotone_iterate(const TorusGrid& grid, const VortexSet& vortices,
                                  double lambda, const SolverOptions& opts) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    const double K = opts.effective_K(lambda);
    if (K < 6.0 * lambda * (1.0 - 1e-12))
        throw std::invalid_argument("iteration constant K must be >= 6*lambda");

    const int N = vortices.total_winding();
    const double c = 4.0 * std::numbers::pi * N / grid.area();
    const std::size_t nn = grid.count();

    IterationOutcome out;
    out.u0 = build_background_u0(grid, vortices, opts.op);
    TorusSpectral solver(grid, opts.op);

    std::vector<double> v(out.u0.values);
    for (auto& x : v) x = -x;  // v0 = -u0
    std::vector<double> rhs(nn), rhs_new(nn), v_new(nn);
    kernels::iteration_rhs(out.u0.values.data(), v.data(), nn, lambda, K, c, rhs.data());

    const double min_u_start = min_plus(out.u0.values, v);  // = 0 at v0
    const int stall_window = 50;

    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        solver.solve_helmholtz(K, rhs, v_new);

        const double rise = kernels::max_diff(v_new.data(), v.data(), nn);
        if (rise > opts.monotone_slack)
            throw MonotonicityViolation("iterate " + std::to_string(iter) +
                                        " rose by " + std::to_string(rise));

        kernels::iteration_rhs(out.u0.values.data(), v_new.data(), nn, lambda, K, c,
                               rhs_new.data());
        // (Lap - K) v_new = rhs holds exactly, so the equation residual at
        // v_new reduces to rhs - rhs_new pointwise.
        const double res = kernels::max_abs_diff(rhs.data(), rhs_new.data(), nn);
        out.residual_history.push_back(res);
        v.swap(v_new);
        rhs.swap(rhs_new);
        out.iterations = iter;

        if (res < opts.tol) {
            out.tag = IterationTag::Converged;
            out.v = TorusField(grid);
            out.v.values = v;
            out.final_residual = equation_residual(out.v, out.u0, lambda, N, opts.op);
            return out;
        }

        const bool res_stuck =
            iter > stall_window &&
            res >= 0.999 * out.residual_history[static_cast<std::size_t>(iter - stall_window) - 1];
        if (res_stuck && min_plus(out.u0.values, v) < min_u_start - opts.divergence_drop) {
            out.tag = IterationTag::Diverged;
            out.reason = "drop";
            break;
        }
        if (iter == opts.max_iter) {
            out.tag = IterationTag::Diverged;
            out.reason = res_stuck ? "stalled" : "max_iter";
        }
    }

    out.v = TorusField(grid);
    out.v.values = v;
    out.final_residual = equation_residual(out.v, out.u0, lambda, N, opts.op);
    return out;
}

double lambda_lower_bound(int N, double area) {
    if (N < 0 || !(area > 0.0)) throw std::invalid_argument("need N >= 0, area > 0");
    return (pow6_6 / pow5_5) * 4.0 * std::numbers::pi * N / area;
}

LambdaCEstimate estimate_lambda_c(const TorusGrid& grid, const VortexSet& vortices,
                                  const LambdaCOptions& opts) {
    LambdaCEstimate est;
    const int N = vortices.total_winding();
    if (N == 0) return est;  // every lambda > 0 admits the trivial solution

    const double lower = lambda_lower_bound(N, grid.area());
    const double pi = std::numbers::pi;
    const double mu1 = std::min(std::pow(2.0 * pi / grid.Lx, 2),
                                std::pow(2.0 * pi / grid.Ly, 2));
    auto converges = [&](double lambda) {
        SolverOptions probe = opts.solver;
        // the scheme contracts slow modes at ~ 1 - mu1/K per sweep, so the
        // budget has to scale with K = 6 lambda
        const double K = probe.effective_K(lambda);
        const double need =
            3.0 * (K / mu1) * std::log(std::max(1e3, 100.0 * lambda) / probe.tol) + 500.0;
        probe.max_iter = std::max(probe.max_iter, static_cast<int>(std::min(need, 2e5)));
        const bool ok =
            monotone_iterate(grid, vortices, lambda, probe).tag == IterationTag::Converged;
        est.scan.emplace_back(lambda, ok);
        return ok;
    };

    double hi = lower;
    bool found = false;
    for (int k = 0; k < opts.max_doublings; ++k) {
        hi *= 2.0;
        if (converges(hi)) {
            found = true;
            break;
        }
    }
    if (!found)
        throw UpperSeedFailure("no converging lambda found after doubling " +
                               std::to_string(opts.max_doublings) + " times");

    double lo = std::max(lower, hi / 2.0);
    while ((hi - lo) / hi > opts.rel_bracket_tol) {
        const double mid = 0.5 * (lo + hi);
        if (converges(mid))
            hi = mid;
        else
            lo = mid;
    }
    est.lambda_c = 0.5 * (lo + hi);
    est.bracket_width = hi - lo;
    return est;
}

double kappa_c_from_lambda_c(double lambda_c) {
    if (!(lambda_c > 0.0)) throw std::invalid_argument("lambda_c must be positive");
    return std::sqrt(12.0 / lambda_c);
}

Subsolution construct_subsolution(const TorusGrid& grid, const VortexSet& vortices,
                                  double eps, TorusOperator op) {
    Subsolution sub;
    sub.eps = eps;
    const int N = vortices.total_winding();
    if (N == 0) {
        sub.w0 = TorusField(grid);
        return sub;
    }
    if (!(eps > 0.0)) throw EpsTooLarge("eps must be positive");
    const double pi = std::numbers::pi;
    if (!(2.0 - 8.0 * pi * N * eps * eps / grid.area() > 1.0))
        throw EpsTooLarge("condition 2 - 8*pi*N*eps^2/area > 1 fails");
    for (std::size_t i = 0; i < vortices.size(); ++i)
        for (std::size_t j = i + 1; j < vortices.size(); ++j)
            if (torus_dist(grid, vortices[i].x, vortices[i].y, vortices[j].x,
                           vortices[j].y) < 4.0 * eps)
                throw EpsTooLarge("2*eps balls around vortices are not disjoint");

    // cutoff: 1 on B(p, eps), 0 outside B(p, 2 eps), quintic bridge between
    TorusField f_eps(grid);
    for (int i = 0; i < grid.nx; ++i) {
        for (int j = 0; j < grid.ny; ++j) {
            double val = 0.0;
            for (const auto& vx : vortices) {
                const double r = torus_dist(grid, grid.x(i), grid.y(j), vx.x, vx.y);
                if (r <= eps) {
                    val = 1.0;
                } else if (r < 2.0 * eps) {
                    const double s = (r - eps) / eps;
                    val = std::max(val, 1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s)));
                }
            }
            f_eps.at(i, j) = val;
        }
    }
    sub.mean_cutoff = f_eps.mean();

    const double amp = 8.0 * pi * N / grid.area();
    std::vector<double> g_eps(grid.count());
    for (std::size_t m = 0; m < g_eps.size(); ++m)
        g_eps[m] = amp * (f_eps.values[m] - sub.mean_cutoff);

    TorusSpectral solver(grid, op);
    TorusField w(grid);
    solver.solve_poisson_zero_mean(g_eps, w.values);
    TorusField u0 = build_background_u0(grid, vortices, op);

    // shift so exp(u0+w0) <= 1, placing the max outside the eps-balls at 1/6
    // (the value minimizing the admissible lambda)
    double global_max = -std::numeric_limits<double>::infinity();
    double out_max = -std::numeric_limits<double>::infinity();
    double out_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid.nx; ++i) {
        for (int j = 0; j < grid.ny; ++j) {
            const double s = u0.at(i, j) + w.at(i, j);
            global_max = std::max(global_max, s);
            double rmin = std::numeric_limits<double>::infinity();
            for (const auto& vx : vortices)
                rmin = std::min(rmin, torus_dist(grid, grid.x(i), grid.y(j), vx.x, vx.y));
            if (rmin > eps) {
                out_max = std::max(out_max, s);
                out_min = std::min(out_min, s);
            }
        }
    }
    const double shift = std::max(global_max, out_max + std::log(6.0));
    sub.w0 = TorusField(grid);
    for (std::size_t m = 0; m < w.values.size(); ++m) sub.w0.values[m] = w.values[m] - shift;

    const double mu0 = std::exp(out_min - shift);
    const double mu1 = std::exp(out_max - shift);
    const double C0 = mu0 * std::pow(1.0 - mu1, 5.0);
    const double c = 4.0 * pi * N / grid.area();
    sub.valid_for_lambda_ge = (c + amp * sub.mean_cutoff) / C0;

    // pointwise verification of Lap(w0) >= lambda f(u0+w0) + 4 pi N/|O|
    std::vector<double> lap(grid.count());
    solver.laplacian(sub.w0.values, lap);
    const double slack = 1e-9 * (1.0 + std::fabs(sub.valid_for_lambda_ge));
    for (std::size_t m = 0; m < lap.size(); ++m) {
        const double rhs_m =
            sub.valid_for_lambda_ge * nonlinearity::f(u0.values[m] + sub.w0.values[m]) + c;
        if (lap[m] < rhs_m - slack)
            throw SolverError("sub-solution inequality failed at node " + std::to_string(m));
    }
    return sub;
}

double action(const TorusField& v, const TorusField& u0, double lambda, int N) {
    const auto& g = v.grid;
    if (!(u0.grid == g)) throw std::invalid_argument("fields on different grids");
    TorusSpectral solver(g, TorusOperator::Spectral);
    std::vector<double> gx, gy;
    solver.gradient(v.values, gx, gy);
    const double c = 4.0 * std::numbers::pi * N / g.area();
    double acc = 0.0;
    for (std::size_t m = 0; m < v.values.size(); ++m) {
        acc += 0.5 * (gx[m] * gx[m] + gy[m] * gy[m]) +
               lambda * nonlinearity::antiderivative_F(u0.values[m] + v.values[m]) +
               c * v.values[m];
    }
    return acc * g.hx() * g.hy();
}

} // namespace csvortex::torus
