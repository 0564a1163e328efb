#include "csvortex/plane.hpp"

#include "csvortex/errors.hpp"
#include "csvortex/kernels.hpp"
#include "csvortex/radial.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>

namespace csvortex::plane {

namespace {

std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

} // namespace

SquareDomain::SquareDomain(double R_, int n_) : R(R_), n(n_) {
    if (!(R > 0.0) || n < 8) throw std::invalid_argument("need R > 0 and n >= 8");
}

double background_u0_at(double x, double y, const VortexSet& vortices, double r_min) {
    double acc = 0.0;
    const double floor2 = r_min * r_min;
    for (const auto& p : vortices) {
        const double dx = x - p.x, dy = y - p.y;
        const double r2 = std::max(dx * dx + dy * dy, floor2);
        acc -= p.multiplicity * std::log1p(1.0 / r2);
    }
    return acc;
}

double source_g_at(double x, double y, const VortexSet& vortices) {
    double acc = 0.0;
    for (const auto& p : vortices) {
        const double dx = x - p.x, dy = y - p.y;
        const double q = 1.0 + dx * dx + dy * dy;
        acc += 4.0 * p.multiplicity / (q * q);
    }
    return acc;
}

std::vector<double> background_u0_interior(const SquareDomain& dom, const VortexSet& vs) {
    const double rm = dom.h() / 4.0;
    std::vector<double> out(dom.count());
    for (int i = 0; i < dom.n; ++i)
        for (int j = 0; j < dom.n; ++j)
            out[static_cast<std::size_t>(i) * dom.n + j] =
                background_u0_at(dom.coord(i), dom.coord(j), vs, rm);
    return out;
}

std::vector<double> source_g_interior(const SquareDomain& dom, const VortexSet& vs) {
    std::vector<double> out(dom.count());
    for (int i = 0; i < dom.n; ++i)
        for (int j = 0; j < dom.n; ++j)
            out[static_cast<std::size_t>(i) * dom.n + j] =
                source_g_at(dom.coord(i), dom.coord(j), vs);
    return out;
}

struct DirichletSolver::Impl {
    SquareDomain dom;
    int n;
    double* buf = nullptr;
    fftw_plan plan = nullptr;
    std::vector<double> eig;  // Lap_h eigenvalue per 1D sine mode

    explicit Impl(const SquareDomain& d) : dom(d), n(d.n) {
        buf = fftw_alloc_real(static_cast<std::size_t>(n) * n);
        {
            std::lock_guard<std::mutex> lock(plan_mutex());
            plan = fftw_plan_r2r_2d(n, n, buf, buf, FFTW_RODFT00, FFTW_RODFT00,
                                    FFTW_MEASURE);
        }
        eig.resize(static_cast<std::size_t>(n));
        const double h = d.h();
        for (int k = 0; k < n; ++k) {
            const double s = std::sin((k + 1) * std::numbers::pi / (2.0 * (n + 1)));
            eig[static_cast<std::size_t>(k)] = -4.0 * s * s / (h * h);
        }
    }
    ~Impl() {
        std::lock_guard<std::mutex> lock(plan_mutex());
        if (plan) fftw_destroy_plan(plan);
        fftw_free(buf);
    }
};

DirichletSolver::DirichletSolver(const SquareDomain& dom)
    : impl_(std::make_unique<Impl>(dom)) {}
DirichletSolver::~DirichletSolver() = default;

void DirichletSolver::solve(double K, const std::vector<double>& rhs,
                            std::vector<double>& out) {
    auto& im = *impl_;
    const int n = im.n;
    const std::size_t nn = static_cast<std::size_t>(n) * n;
    std::copy(rhs.begin(), rhs.end(), im.buf);
    fftw_execute(im.plan);
    const double norm = 1.0 / (4.0 * (n + 1.0) * (n + 1.0));  // RODFT00 round trip scale
    for (int i = 0; i < n; ++i) {
        const double ei = im.eig[static_cast<std::size_t>(i)];
        for (int j = 0; j < n; ++j) {
            im.buf[static_cast<std::size_t>(i) * n + j] *=
                norm / (ei + im.eig[static_cast<std::size_t>(j)] - K);
        }
    }
    fftw_execute(im.plan);
    out.assign(im.buf, im.buf + nn);
}

namespace {

struct Closure {
    std::vector<double> west, east, south, north;
};

Closure minus_u0_closure(const SquareDomain& dom, const VortexSet& vs) {
    const double rm = dom.h() / 4.0;
    Closure b;
    b.west.resize(dom.n);
    b.east.resize(dom.n);
    b.south.resize(dom.n);
    b.north.resize(dom.n);
    for (int k = 0; k < dom.n; ++k) {
        const double c = dom.coord(k);
        b.west[k] = -background_u0_at(-dom.R, c, vs, rm);
        b.east[k] = -background_u0_at(dom.R, c, vs, rm);
        b.south[k] = -background_u0_at(c, -dom.R, vs, rm);
        b.north[k] = -background_u0_at(c, dom.R, vs, rm);
    }
    return b;
}

// rhs_eff = rhs - (boundary values)/h^2 on the near-boundary ring
void fold_boundary(const SquareDomain& dom, const Closure& b, std::vector<double>& rhs) {
    const int n = dom.n;
    const double a = 1.0 / (dom.h() * dom.h());
    for (int j = 0; j < n; ++j) {
        rhs[j] -= a * b.west[j];
        rhs[static_cast<std::size_t>(n - 1) * n + j] -= a * b.east[j];
    }
    for (int i = 0; i < n; ++i) {
        rhs[static_cast<std::size_t>(i) * n] -= a * b.south[i];
        rhs[static_cast<std::size_t>(i) * n + n - 1] -= a * b.north[i];
    }
}

std::vector<double> zeros(std::size_t n) { return std::vector<double>(n, 0.0); }

// explicit residual of Lap v = lambda f(u0+v) + g with the given closure
double explicit_residual(const SquareDomain& dom, const std::vector<double>& v,
                         const Closure& b, const std::vector<double>& u0,
                         const std::vector<double>& g, double lambda,
                         std::vector<double>* out_vec = nullptr) {
    const std::size_t nn = dom.count();
    std::vector<double> lap(nn);
    kernels::laplacian_dirichlet_5pt(v.data(), dom.n, dom.h(), b.west.data(),
                                     b.east.data(), b.south.data(), b.north.data(),
                                     lap.data());
    double sup = 0.0;
    if (out_vec) out_vec->resize(nn);
    for (std::size_t m = 0; m < nn; ++m) {
        const double r = lap[m] - lambda * nonlinearity::f(u0[m] + v[m]) - g[m];
        if (out_vec) (*out_vec)[m] = r;
        sup = std::max(sup, std::fabs(r));
    }
    return sup;
}

// Newton correction solved by preconditioned CG on -Lap_h + lambda f'(u0+v);
// returns false when the operator turns indefinite or progress stalls.
bool newton_correction(const SquareDomain& dom, DirichletSolver& fast,
                       const std::vector<double>& u0, std::vector<double>& v,
                       const std::vector<double>& resid, double lambda) {
    const std::size_t nn = dom.count();
    const int n = dom.n;
    const double h = dom.h();
    std::vector<double> pot(nn);
    for (std::size_t m = 0; m < nn; ++m)
        pot[m] = lambda * nonlinearity::f_prime(u0[m] + v[m]);

    const auto zero_line = zeros(static_cast<std::size_t>(n));
    auto apply_A = [&](const std::vector<double>& x, std::vector<double>& out) {
        kernels::laplacian_dirichlet_5pt(x.data(), n, h, zero_line.data(), zero_line.data(),
                                         zero_line.data(), zero_line.data(), out.data());
        for (std::size_t m = 0; m < nn; ++m) out[m] = -out[m] + pot[m] * x[m];
    };
    const double K_pc = std::max(1e-8, 0.02 * lambda);
    auto apply_M = [&](const std::vector<double>& r, std::vector<double>& z) {
        fast.solve(K_pc, r, z);          // (Lap - K) z = r
        for (auto& x : z) x = -x;        // => (-Lap + K)^{-1} r
    };

    // solve A d = resid, then v += d
    std::vector<double> d(nn, 0.0), r(resid), z(nn), p(nn), Ap(nn);
    apply_M(r, z);
    p = z;
    double rz = 0.0;
    for (std::size_t m = 0; m < nn; ++m) rz += r[m] * z[m];
    const double r0 = kernels::max_abs(r);
    for (int it = 0; it < 400; ++it) {
        apply_A(p, Ap);
        double pAp = 0.0;
        for (std::size_t m = 0; m < nn; ++m) pAp += p[m] * Ap[m];
        if (!(pAp > 0.0)) return false;  // indefinite direction
        const double alpha = rz / pAp;
        for (std::size_t m = 0; m < nn; ++m) {
            d[m] += alpha * p[m];
            r[m] -= alpha * Ap[m];
        }
        if (kernels::max_abs(r) < 1e-6 * r0) break;
        apply_M(r, z);
        double rz_new = 0.0;
        for (std::size_t m = 0; m < nn; ++m) rz_new += r[m] * z[m];
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t m = 0; m < nn; ++m) p[m] = z[m] + beta * p[m];
    }
    for (std::size_t m = 0; m < nn; ++m) v[m] += d[m];
    return true;
}

} // namespace

PlaneField PlaneOutcome::field() const {
    PlaneField f;
    f.dom = dom;
    f.v = v;
    // closure is not stored here; monotone_iterate_plane rebuilds it when needed
    return f;
}

std::vector<double> PlaneOutcome::u() const {
    std::vector<double> out(v.size());
    for (std::size_t m = 0; m < v.size(); ++m) out[m] = u0[m] + v[m];
    return out;
}

PlaneOutcome monotone_iterate_plane(const SquareDomain& dom, const VortexSet& vortices,
                                    double lambda, const PlaneSolverOptions& opts) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    const double K = opts.effective_K(lambda);
    if (K < 6.0 * lambda * (1.0 - 1e-12))
        throw std::invalid_argument("iteration constant K must be >= 6*lambda");
    for (const auto& p : vortices)
        if (!(std::fabs(p.x) < dom.R && std::fabs(p.y) < dom.R))
            throw std::invalid_argument("vortex point outside the open square");

    const std::size_t nn = dom.count();
    PlaneOutcome out;
    out.dom = dom;
    out.u0 = background_u0_interior(dom, vortices);
    const std::vector<double> g = source_g_interior(dom, vortices);
    const Closure bc = minus_u0_closure(dom, vortices);
    DirichletSolver fast(dom);

    std::vector<double> v(nn);
    if (opts.initial_v) {
        if (opts.initial_v->size() != nn) throw std::invalid_argument("initial_v size");
        v = *opts.initial_v;
    } else {
        for (std::size_t m = 0; m < nn; ++m) v[m] = -out.u0[m];  // v0 = v* = -u0
    }

    std::vector<double> rhs(nn), rhs_new(nn), v_new(nn), resid_vec;
    auto assemble = [&](const std::vector<double>& vv, std::vector<double>& r) {
        kernels::iteration_rhs(out.u0.data(), vv.data(), nn, lambda, K, 0.0, r.data());
        for (std::size_t m = 0; m < nn; ++m) r[m] += g[m];
    };
    assemble(v, rhs);

    // The first comparison v1 < v0 holds in the continuum through the blow-up
    // of -u0 at the vortex points. On the grid, the sampled analytic u0
    // satisfies Lap_h u0 = -g only to truncation near the cores, so the first
    // iterate may rise by that residue divided by K; afterwards the M-matrix
    // ordering is exact.
    double first_step_allowance = 0.0;
    {
        std::vector<double> u0b_w(static_cast<std::size_t>(dom.n)),
            u0b_e(u0b_w.size()), u0b_s(u0b_w.size()), u0b_n(u0b_w.size());
        for (int k = 0; k < dom.n; ++k) {
            u0b_w[static_cast<std::size_t>(k)] = -bc.west[k];
            u0b_e[static_cast<std::size_t>(k)] = -bc.east[k];
            u0b_s[static_cast<std::size_t>(k)] = -bc.south[k];
            u0b_n[static_cast<std::size_t>(k)] = -bc.north[k];
        }
        std::vector<double> lap_u0(nn);
        kernels::laplacian_dirichlet_5pt(out.u0.data(), dom.n, dom.h(), u0b_w.data(),
                                         u0b_e.data(), u0b_s.data(), u0b_n.data(),
                                         lap_u0.data());
        for (std::size_t m = 0; m < nn; ++m)
            first_step_allowance = std::max(first_step_allowance, (g[m] + lap_u0[m]) / K);
    }

    int newton_cooldown = 0;
    int newton_failures = 0;
    const int stall_window = 25;

    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        std::vector<double> folded(rhs);
        fold_boundary(dom, bc, folded);
        fast.solve(K, folded, v_new);

        if (opts.check_monotone && !opts.initial_v) {
            // the sampled-background core noise washes out like ~ 1/iter
            const double allow = opts.monotone_slack +
                                 first_step_allowance * std::min(1.0, 4.0 / iter);
            const double rise = kernels::max_diff(v_new.data(), v.data(), nn);
            if (rise > allow)
                throw MonotonicityViolation("plane iterate " + std::to_string(iter) +
                                            " rose by " + std::to_string(rise));
        }

        assemble(v_new, rhs_new);
        const double res = kernels::max_abs_diff(rhs.data(), rhs_new.data(), nn);
        out.residual_history.push_back(res);
        v.swap(v_new);
        rhs.swap(rhs_new);
        out.iterations = iter;

        if (res < opts.tol) {
            out.tag = PlaneTag::Converged;
            break;
        }

        const auto& hist = out.residual_history;
        const bool crawling =
            iter > stall_window &&
            res > 0.97 * hist[static_cast<std::size_t>(iter - stall_window) - 1];
        const bool engage = opts.newton_endgame && newton_cooldown == 0 &&
                            newton_failures < 5 &&
                            (res < opts.endgame_switch_tol || (crawling && iter >= 40));
        if (engage) {
            bool ok = true;
            double res_now = explicit_residual(dom, v, bc, out.u0, g, lambda, &resid_vec);
            for (int ns = 0; ns < 40 && res_now >= opts.tol; ++ns) {
                std::vector<double> v_try(v);
                if (!newton_correction(dom, fast, out.u0, v_try, resid_vec, lambda)) {
                    ok = false;
                    break;
                }
                // damped acceptance: explicit residual must shrink and the
                // super-solution bound v <= -u0 must keep holding
                bool accepted = false;
                for (int damp = 0; damp < 7; ++damp) {
                    double res_try = explicit_residual(dom, v_try, bc, out.u0, g, lambda);
                    double over = -std::numeric_limits<double>::infinity();
                    for (std::size_t m = 0; m < nn; ++m)
                        over = std::max(over, v_try[m] + out.u0[m]);
                    if (res_try < res_now && over <= 1e-10) {
                        v = v_try;
                        res_now = explicit_residual(dom, v, bc, out.u0, g, lambda, &resid_vec);
                        out.newton_steps++;
                        accepted = true;
                        break;
                    }
                    for (std::size_t m = 0; m < nn; ++m)
                        v_try[m] = 0.5 * (v_try[m] + v[m]);
                }
                if (!accepted) {
                    ok = false;
                    break;
                }
            }
            if (ok && res_now < opts.tol) {
                out.tag = PlaneTag::Converged;
                assemble(v, rhs);
                break;
            }
            // fall back to plain sweeps for a while
            assemble(v, rhs);
            newton_cooldown = 200;
            ++newton_failures;
        }
        if (newton_cooldown > 0) --newton_cooldown;

        if (iter == opts.max_iter) {
            out.tag = PlaneTag::Diverged;
            out.reason = "max_iter";
        }
    }

    out.v = v;
    out.final_residual = explicit_residual(dom, v, bc, out.u0, g, lambda);
    if (out.tag == PlaneTag::Converged && out.final_residual > 10.0 * opts.tol) {
        out.tag = PlaneTag::Diverged;
        out.reason = "residual recheck failed";
    }
    return out;
}

double sample_u(const PlaneOutcome& sol, double x, double y) {
    const auto& d = sol.dom;
    const double h = d.h();
    // augmented index space: node k at -R + k h, k = 0..n+1, u = 0 on the ring
    auto u_node = [&](int ki, int kj) -> double {
        if (ki <= 0 || kj <= 0 || ki >= d.n + 1 || kj >= d.n + 1) return 0.0;
        return sol.u0[static_cast<std::size_t>(ki - 1) * d.n + (kj - 1)] +
               sol.v[static_cast<std::size_t>(ki - 1) * d.n + (kj - 1)];
    };
    const double fx = std::clamp((x + d.R) / h, 0.0, d.n + 1.0);
    const double fy = std::clamp((y + d.R) / h, 0.0, d.n + 1.0);
    const int i0 = std::min(static_cast<int>(fx), d.n);
    const int j0 = std::min(static_cast<int>(fy), d.n);
    const double wx = fx - i0, wy = fy - j0;
    return (1 - wx) * (1 - wy) * u_node(i0, j0) + wx * (1 - wy) * u_node(i0 + 1, j0) +
           (1 - wx) * wy * u_node(i0, j0 + 1) + wx * wy * u_node(i0 + 1, j0 + 1);
}

double flux_plane(const PlaneOutcome& sol, double lambda) {
    const std::size_t nn = sol.dom.count();
    double acc = 0.0;
    for (std::size_t m = 0; m < nn; ++m)
        acc -= nonlinearity::f(sol.u0[m] + sol.v[m]);
    return 0.5 * lambda * acc * sol.dom.h() * sol.dom.h();
}

PlaneScheduleResult solve_topological_plane(const VortexSet& vortices, double lambda,
                                            const std::vector<double>& R_schedule, int n,
                                            const PlaneSolverOptions& opts) {
    if (R_schedule.empty()) throw std::invalid_argument("empty R schedule");
    for (std::size_t k = 1; k < R_schedule.size(); ++k)
        if (!(R_schedule[k] > R_schedule[k - 1]))
            throw std::invalid_argument("R schedule must increase");

    PlaneScheduleResult result;
    PlaneOutcome prev;
    bool have_prev = false;
    for (double R : R_schedule) {
        const SquareDomain dom(R, n);
        PlaneOutcome cur = monotone_iterate_plane(dom, vortices, lambda, opts);
        PlaneStageReport rep;
        rep.R = R;
        rep.iterations = cur.iterations;
        rep.flux = flux_plane(cur, lambda);
        rep.residual = cur.final_residual;
        if (have_prev) {
            // compare u on the current nodes that lie inside the previous
            // domain, away from the vortex cores where the u0 guard differs
            const double hmax = std::max(dom.h(), prev.dom.h());
            double dec = -std::numeric_limits<double>::infinity();
            double gap = 0.0;
            for (int i = 0; i < dom.n; ++i) {
                const double x = dom.coord(i);
                if (std::fabs(x) > prev.dom.R - 2.0 * prev.dom.h()) continue;
                for (int j = 0; j < dom.n; ++j) {
                    const double y = dom.coord(j);
                    if (std::fabs(y) > prev.dom.R - 2.0 * prev.dom.h()) continue;
                    bool near_core = false;
                    for (const auto& p : vortices)
                        if (std::hypot(x - p.x, y - p.y) < 5.0 * hmax) near_core = true;
                    if (near_core) continue;
                    const double unew =
                        cur.u0[static_cast<std::size_t>(i) * dom.n + j] +
                        cur.v[static_cast<std::size_t>(i) * dom.n + j];
                    const double uprev = sample_u(prev, x, y);
                    dec = std::max(dec, unew - uprev);
                    gap = std::max(gap, std::fabs(unew - uprev));
                }
            }
            rep.decrease_vs_prev = dec;
            rep.gap_vs_prev = gap;
            result.cauchy_gap = gap;
        }
        result.stages.push_back(rep);
        prev = std::move(cur);
        have_prev = true;
    }
    result.final_outcome = std::move(prev);
    return result;
}

ShallowSubsolution shallow_subsolution(const SquareDomain& dom, const VortexSet& vortices,
                                       double lambda, double a,
                                       const PlaneSolverOptions& opts) {
    if (!(a > 0.0)) throw std::invalid_argument("shift a must be positive");
    ShallowSubsolution sub;
    const double ea = std::exp(-a);
    const double q = ea - 1.0;
    sub.mu = lambda * ea * q * q * q * q;

    const std::size_t nn = dom.count();
    const int n = dom.n;
    const double h = dom.h();
    const double rm = h / 4.0;
    const std::vector<double> u0 = background_u0_interior(dom, vortices);
    const std::vector<double> g = source_g_interior(dom, vortices);
    const int N = vortices.total_winding();

    sub.v_star.dom = dom;
    sub.v_star.v.resize(nn);
    sub.v_star.west.resize(n);
    sub.v_star.east.resize(n);
    sub.v_star.south.resize(n);
    sub.v_star.north.resize(n);
    sub.u_star.resize(nn);

    if (vortices.size() <= 1) {
        // coincident vortices: u_* from radial shooting of the auxiliary
        // equation u'' + mu e^{2t} g2(u) = 0
        radial::ShootingParams rp;
        rp.N = N;
        rp.lambda = sub.mu;
        rp.nl = radial::Nonlinearity::Quadratic;
        rp.report_dt = 0.005;
        const double a0q = radial::find_a0(N, sub.mu, rp, 1e-12);
        auto [prof, cls] = radial::integrate(rp.with_a(a0q));
        const double px = vortices.empty() ? 0.0 : vortices[0].x;
        const double py = vortices.empty() ? 0.0 : vortices[0].y;

        // v_* = u_* - a - u0 through its regular parts: the 2N ln r
        // singularities cancel exactly, leaving rho(ln r) + N ln(1+r^2) - a
        // with rho = u_* - 2Nt flat at the core. Evaluating the cancelled
        // form avoids the r-guard bias at on-node vortices.
        auto v_star_at = [&](double x, double y) {
            const double r = std::hypot(x - px, y - py);
            const double rg = std::max(r, rm);
            const double rho = prof.u_at(std::log(rg)) - 2.0 * N * std::log(rg);
            return rho + N * std::log1p(r * r) - a;
        };
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const double x = dom.coord(i), y = dom.coord(j);
                const double r = std::max(std::hypot(x - px, y - py), rm);
                sub.u_star[static_cast<std::size_t>(i) * n + j] = prof.u_at(std::log(r));
                sub.v_star.at(i, j) = v_star_at(x, y);
            }
        }
        for (int k = 0; k < n; ++k) {
            const double c = dom.coord(k);
            sub.v_star.west[k] = v_star_at(-dom.R, c);
            sub.v_star.east[k] = v_star_at(dom.R, c);
            sub.v_star.south[k] = v_star_at(c, -dom.R);
            sub.v_star.north[k] = v_star_at(c, dom.R);
        }
    } else {
        // distinct vortices: quadratic-nonlinearity variant of the iteration
        const double K2 = 2.0 * sub.mu;
        const Closure bc = minus_u0_closure(dom, vortices);
        DirichletSolver fast(dom);
        std::vector<double> v2(nn), rhs(nn), v_new(nn);
        for (std::size_t m = 0; m < nn; ++m) v2[m] = -u0[m];
        auto assemble = [&](const std::vector<double>& vv, std::vector<double>& r) {
            kernels::iteration_rhs_quadratic(u0.data(), vv.data(), nn, sub.mu, K2, 0.0,
                                             r.data());
            for (std::size_t m = 0; m < nn; ++m) r[m] += g[m];
        };
        assemble(v2, rhs);
        double res = std::numeric_limits<double>::infinity();
        for (int iter = 0; iter < opts.max_iter && res >= 1e-10; ++iter) {
            std::vector<double> folded(rhs);
            fold_boundary(dom, bc, folded);
            fast.solve(K2, folded, v_new);
            std::vector<double> rhs_new(nn);
            assemble(v_new, rhs_new);
            res = kernels::max_abs_diff(rhs.data(), rhs_new.data(), nn);
            v2.swap(v_new);
            rhs.swap(rhs_new);
        }
        for (std::size_t m = 0; m < nn; ++m) {
            sub.u_star[m] = u0[m] + v2[m];
            sub.v_star.v[m] = v2[m] - a;
        }
        for (int k = 0; k < n; ++k) {
            sub.v_star.west[k] = bc.west[k] - a;
            sub.v_star.east[k] = bc.east[k] - a;
            sub.v_star.south[k] = bc.south[k] - a;
            sub.v_star.north[k] = bc.north[k] - a;
        }
    }
    sub.far_field = sub.v_star.at(0, 0);

    // discrete check of Lap v_* >= lambda f(u0+v_*) + g, slack O(h^2)
    std::vector<double> lap(nn);
    kernels::laplacian_dirichlet_5pt(sub.v_star.v.data(), n, h, sub.v_star.west.data(),
                                     sub.v_star.east.data(), sub.v_star.south.data(),
                                     sub.v_star.north.data(), lap.data());
    const double slack = 10.0 * h * h * (1.0 + lambda);
    double worst = std::numeric_limits<double>::infinity();
    std::size_t worst_at = 0;
    for (std::size_t m = 0; m < nn; ++m) {
        const double margin =
            lap[m] - lambda * nonlinearity::f(u0[m] + sub.v_star.v[m]) - g[m];
        if (margin < worst) {
            worst = margin;
            worst_at = m;
        }
    }
    sub.min_margin = worst;
    if (worst < -slack) {
        const int wi = static_cast<int>(worst_at) / n;
        const int wj = static_cast<int>(worst_at) % n;
        throw InequalityViolation(
            "sub-solution inequality fails by " + std::to_string(-worst) + " at (" +
            std::to_string(dom.coord(wi)) + ", " + std::to_string(dom.coord(wj)) + ")");
    }
    return sub;
}

} // namespace csvortex::plane
