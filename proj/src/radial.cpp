#include "csvortex/radial.hpp"

#include "csvortex/errors.hpp"
#include "csvortex/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace csvortex::radial {

namespace {

constexpr double quintic_gmax = 3125.0 / 46656.0;  // sup g = 5^5/6^6
constexpr double quadratic_gmax = 0.25;

double g_of(Nonlinearity nl, double u) {
    return nl == Nonlinearity::Quintic ? nonlinearity::g(u) : nonlinearity::g_quadratic(u);
}

double gmax_of(Nonlinearity nl) {
    return nl == Nonlinearity::Quintic ? quintic_gmax : quadratic_gmax;
}

struct State {
    double u, up;
};

State rhs(const ShootingParams& p, double t, const State& y) {
    return {y.up, -p.lambda * std::exp(2.0 * t) * g_of(p.nl, y.u)};
}

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

struct StepResult {
    State y1;
    State k1, k7;      // FSAL pair
    double err = 0.0;  // scaled error estimate
    DenseStep dense;
};

StepResult attempt_step(const ShootingParams& p, double t, const State& y,
                        const State& k1, double h) {
    State k2, k3, k4, k5, k6, k7;
    State yt;

    yt = {y.u + h * a21 * k1.u, y.up + h * a21 * k1.up};
    k2 = rhs(p, t + c2 * h, yt);
    yt = {y.u + h * (a31 * k1.u + a32 * k2.u), y.up + h * (a31 * k1.up + a32 * k2.up)};
    k3 = rhs(p, t + c3 * h, yt);
    yt = {y.u + h * (a41 * k1.u + a42 * k2.u + a43 * k3.u),
          y.up + h * (a41 * k1.up + a42 * k2.up + a43 * k3.up)};
    k4 = rhs(p, t + c4 * h, yt);
    yt = {y.u + h * (a51 * k1.u + a52 * k2.u + a53 * k3.u + a54 * k4.u),
          y.up + h * (a51 * k1.up + a52 * k2.up + a53 * k3.up + a54 * k4.up)};
    k5 = rhs(p, t + c5 * h, yt);
    yt = {y.u + h * (a61 * k1.u + a62 * k2.u + a63 * k3.u + a64 * k4.u + a65 * k5.u),
          y.up + h * (a61 * k1.up + a62 * k2.up + a63 * k3.up + a64 * k4.up + a65 * k5.up)};
    k6 = rhs(p, t + h, yt);

    State y1 = {y.u + h * (b1 * k1.u + b3 * k3.u + b4 * k4.u + b5 * k5.u + b6 * k6.u),
                y.up + h * (b1 * k1.up + b3 * k3.up + b4 * k4.up + b5 * k5.up + b6 * k6.up)};
    k7 = rhs(p, t + h, y1);

    const double eu =
        h * (e1 * k1.u + e3 * k3.u + e4 * k4.u + e5 * k5.u + e6 * k6.u + e7 * k7.u);
    const double eup =
        h * (e1 * k1.up + e3 * k3.up + e4 * k4.up + e5 * k5.up + e6 * k6.up + e7 * k7.up);
    const double scu = p.abs_tol + p.rel_tol * std::max(std::fabs(y.u), std::fabs(y1.u));
    const double scup = p.abs_tol + p.rel_tol * std::max(std::fabs(y.up), std::fabs(y1.up));
    const double err = std::sqrt(0.5 * ((eu / scu) * (eu / scu) + (eup / scup) * (eup / scup)));

    StepResult r;
    r.y1 = y1;
    r.k1 = k1;
    r.k7 = k7;
    r.err = err;

    // dense output coefficients (Hairer's contd5)
    r.dense.t0 = t;
    r.dense.h = h;
    auto set = [&](int comp, double y0c, double y1c, double k1c, double k3c, double k4c,
                   double k5c, double k6c, double k7c) {
        const double dy = y1c - y0c;
        const double bspl = h * k1c - dy;
        r.dense.r1[comp] = y0c;
        r.dense.r2[comp] = dy;
        r.dense.r3[comp] = bspl;
        r.dense.r4[comp] = dy - h * k7c - bspl;
        r.dense.r5[comp] =
            h * (d1 * k1c + d3 * k3c + d4 * k4c + d5 * k5c + d6 * k6c + d7 * k7c);
    };
    set(0, y.u, y1.u, k1.u, k3.u, k4.u, k5.u, k6.u, k7.u);
    set(1, y.up, y1.up, k1.up, k3.up, k4.up, k5.up, k6.up, k7.up);
    return r;
}

} // namespace

double DenseStep::eval(double t, int comp) const {
    const double s = (t - t0) / h;
    const double s1 = 1.0 - s;
    return r1[comp] +
           s * (r2[comp] + s1 * (r3[comp] + s * (r4[comp] + s1 * r5[comp])));
}

void ShootingParams::validate() const {
    if (N < 0) throw std::invalid_argument("winding N must be >= 0");
    if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
    if (!(t_start < 0.0 && 0.0 < t_max)) throw std::invalid_argument("need t_start < 0 < t_max");
    if (!(abs_tol > 0.0 && rel_tol > 0.0)) throw std::invalid_argument("tolerances must be positive");
    if (!(classify_eps > 0.0)) throw std::invalid_argument("classify_eps must be positive");
    if (lambda * std::exp(2.0 * t_start) >= abs_tol)
        throw std::invalid_argument(
            "t_start not deep enough in the linear regime: lambda*e^{2 t_start} >= abs_tol");
    if (!(report_dt > 0.0)) throw std::invalid_argument("report_dt must be positive");
}

double RadialProfile::forcing_at_node(std::size_t k) const {
    return meta.lambda * std::exp(2.0 * node_t[k]) * g_of(meta.nl, node_u[k]);
}

double RadialProfile::u_at(double tq) const {
    if (t.empty()) throw std::invalid_argument("empty profile");
    if (tq <= t.front()) return u.front() + (tq - t.front()) * up.front();
    if (tq >= t.back()) return u.back() + (tq - t.back()) * up.back();
    const auto it = std::upper_bound(t.begin(), t.end(), tq);
    const std::size_t k = static_cast<std::size_t>(it - t.begin());
    const double w = (tq - t[k - 1]) / (t[k] - t[k - 1]);
    return (1.0 - w) * u[k - 1] + w * u[k];
}

std::pair<double, double> init_condition(const ShootingParams& p) {
    p.validate();
    double u0 = 2.0 * p.N * p.t_start + p.a;
    double up0 = 2.0 * p.N;
    if (!p.picard_refine || p.lambda == 0.0) return {u0, up0};

    if (p.t_start >= -std::log(2.0))
        throw std::invalid_argument("Picard refinement requires t_start < -ln 2");

    // fixed-point iteration of u(t) = 2Nt + a - lambda Int (t-s) e^{2s} g(u) ds
    // on a quadrature grid reaching far enough back that the truncated tail
    // is below roundoff
    const int m = 1600;
    const double s0 = p.t_start - 30.0;
    const double ds = (p.t_start - s0) / m;
    std::vector<double> s(m + 1), u(m + 1), w(m + 1);
    for (int i = 0; i <= m; ++i) {
        s[i] = s0 + i * ds;
        u[i] = 2.0 * p.N * s[i] + p.a;
    }
    std::vector<double> c0(m + 1), c1(m + 1);  // cumulative trapezoids
    for (int it = 0; it < 50; ++it) {
        for (int i = 0; i <= m; ++i) w[i] = std::exp(2.0 * s[i]) * g_of(p.nl, u[i]);
        c0[0] = 0.0;
        c1[0] = 0.0;
        for (int i = 1; i <= m; ++i) {
            c0[i] = c0[i - 1] + 0.5 * ds * (w[i] + w[i - 1]);
            c1[i] = c1[i - 1] + 0.5 * ds * (s[i] * w[i] + s[i - 1] * w[i - 1]);
        }
        double delta = 0.0;
        for (int i = 0; i <= m; ++i) {
            const double integral = s[i] * c0[i] - c1[i];
            const double nu = 2.0 * p.N * s[i] + p.a - p.lambda * integral;
            delta = std::max(delta, std::fabs(nu - u[i]));
            u[i] = nu;
        }
        if (delta < 1e-17) break;
    }
    u0 = u[m];
    up0 = 2.0 * p.N - p.lambda * c0[m];
    return {u0, up0};
}

std::pair<RadialProfile, Classification> integrate(const ShootingParams& p) {
    p.validate();
    RadialProfile prof;
    prof.meta = p;
    Classification cls;

    auto [u0, up0] = init_condition(p);
    State y{u0, up0};
    double t = p.t_start;

    const double t_hard =
        std::max(p.t_max, (std::fabs(std::min(p.a, 0.0)) + 60.0) / (2.0 * p.N + 2.0) + 60.0);
    double t_end = p.t_max;

    double next_report = p.t_start;
    auto report_initial = [&] {
        prof.t.push_back(t);
        prof.u.push_back(y.u);
        prof.up.push_back(y.up);
        next_report = t + p.report_dt;
    };
    report_initial();
    prof.node_t.push_back(t);
    prof.node_u.push_back(y.u);
    prof.node_up.push_back(y.up);

    if (y.u > 0.0) {  // N = 0 with a > 0 starts already positive
        cls.tag = ClassTag::Positive;
        cls.event_time = t;
        return {prof, cls};
    }

    State k1 = rhs(p, t, y);
    double h = 0.01;
    const double h_max = 5.0;
    bool negative_seen = false;
    double negative_time = 0.0;

    while (t < t_end) {
        h = std::min(h, t_end - t);
        StepResult st = attempt_step(p, t, y, k1, h);
        if (st.err > 1.0) {
            const double shrink = std::max(0.2, 0.9 * std::pow(st.err, -0.2));
            h *= shrink;
            if (h < 1e-12 * std::max(1.0, std::fabs(t)))
                throw StepFailure("step size underflow at t = " + std::to_string(t));
            continue;
        }

        const double t1 = t + h;
        prof.steps.push_back(st.dense);

        // dense output on the uniform reporting grid
        while (next_report <= t1 + 1e-14) {
            const double tq = std::min(next_report, t1);
            prof.t.push_back(tq);
            prof.u.push_back(st.dense.eval(tq, 0));
            prof.up.push_back(st.dense.eval(tq, 1));
            next_report += p.report_dt;
        }

        t = t1;
        y = st.y1;
        k1 = st.k7;  // FSAL
        prof.node_t.push_back(t);
        prof.node_u.push_back(y.u);
        prof.node_up.push_back(y.up);

        if (st.err > 1e-30) h = std::min(h * std::min(5.0, 0.9 * std::pow(st.err, -0.2)), h_max);
        else h = std::min(h * 5.0, h_max);

        // events
        if (y.u > 0.0) {
            cls.tag = ClassTag::Positive;
            cls.event_time = t;
            break;
        }
        if (!negative_seen && y.up < 0.0 && y.u < -p.classify_eps) {
            negative_seen = true;
            negative_time = t;
            // refine the u' = 0 crossing inside the recent history for tests
            const auto& dsf = prof.steps;
            for (std::size_t k = dsf.size(); k-- > 0;) {
                const auto& D = dsf[k];
                if (D.eval(D.t0, 1) >= 0.0 && D.eval(D.t0 + D.h, 1) <= 0.0) {
                    double lo = D.t0, hi = D.t0 + D.h;
                    for (int it = 0; it < 60; ++it) {
                        const double mid = 0.5 * (lo + hi);
                        (D.eval(mid, 1) >= 0.0 ? lo : hi) = mid;
                    }
                    prof.first_uprime_zero = 0.5 * (lo + hi);
                    prof.has_uprime_zero = true;
                    break;
                }
            }
            if (p.stop_at_negative_event) {
                cls.tag = ClassTag::Negative;
                cls.event_time = t;
                return {prof, cls};
            }
        }
        if (negative_seen) {
            const double forcing = p.lambda * std::exp(2.0 * t) * g_of(p.nl, y.u);
            if (t >= negative_time + 10.0 && forcing < 1e-3 * p.beta_tail_tol) break;
            // keep integrating past t_end until the decay tail settles
            if (t >= t_end - 1e-12 && t_end < negative_time + 300.0)
                t_end = std::min(negative_time + 300.0, t_end + 25.0);
        } else if (t >= t_end - 1e-12 && y.u < -0.5 && y.up > 0.0 && t_end < t_hard) {
            // pre-event horizon extension: far-negative shooting parameters
            // cross u' = 0 only around t ~ |a| / (2N+2), beyond any fixed t_max
            t_end = std::min(t_hard, t_end + 25.0);
        }
    }

    if (cls.tag == ClassTag::Positive) {
        // already set
    } else if (negative_seen) {
        cls.tag = ClassTag::Negative;
        cls.event_time = negative_time;
    } else {
        cls.tag = ClassTag::Undetermined;
        cls.event_time = t;
    }
    return {prof, cls};
}

Classification classify(int N, double lambda, double a, const ShootingParams& opts) {
    ShootingParams p = opts;
    p.N = N;
    p.lambda = lambda;
    p.a = a;
    p.stop_at_negative_event = true;
    return integrate(p).second;
}

Classification classify_with_tiebreak(int N, double lambda, double a,
                                      const ShootingParams& opts) {
    ShootingParams p = opts;
    p.N = N;
    p.lambda = lambda;
    p.a = a;
    p.stop_at_negative_event = true;
    auto [prof, cls] = integrate(p);
    if (cls.tag == ClassTag::Undetermined) {
        cls.tag = (prof.u.back() > -p.classify_eps) ? ClassTag::Positive : ClassTag::Negative;
    }
    return cls;
}

double find_a0(int N, double lambda, const ShootingParams& opts, double a_tol) {
    if (N < 0) throw std::invalid_argument("N must be >= 0");
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    if (N == 0) return 0.0;  // u == 0 is the unique topological solution

    const double thr = gmax_of(opts.nl) * lambda / 4.0;
    double a_hi = thr + std::max(0.1, 0.1 * thr);
    double a_lo;
    if (opts.nl == Nonlinearity::Quintic) {
        const double em1 = std::exp(-1.0);
        const double denom = lambda * em1 * std::pow(1.0 - em1, 5.0) *
                             (std::exp(1.0 / N) - 1.0);
        const double T = std::max(1.0, 0.5 * std::log(2.0 * (2.0 * N + 1.0) / denom));
        a_lo = -thr - 2.0 - 2.0 * N * T - 1.0;
    } else {
        a_lo = -thr - 2.0 - 4.0 * N;
    }

    auto side = [&](double a) { return classify_with_tiebreak(N, lambda, a, opts).tag; };

    if (side(a_hi) != ClassTag::Positive || side(a_lo) != ClassTag::Negative)
        throw BracketFailure("initial bracket endpoints classify identically; check t_start/t_max");

    while (a_hi - a_lo > a_tol) {
        const double mid = 0.5 * (a_lo + a_hi);
        if (side(mid) == ClassTag::Positive)
            a_hi = mid;
        else
            a_lo = mid;
    }
    return 0.5 * (a_lo + a_hi);
}

RadialProfile topological_profile(int N, double lambda, const ShootingParams& opts,
                                  double a_tol) {
    const double a0 = find_a0(N, lambda, opts, a_tol);
    ShootingParams p = opts;
    p.N = N;
    p.lambda = lambda;
    p.a = a0;
    auto [prof, cls] = integrate(p);
    if (N == 0) {
        prof.topo_tail = true;
        prof.topo_C = 0.0;
        prof.topo_T = prof.node_t.back();
        return prof;
    }

    // closest approach to u = 0 over the step-end nodes
    std::size_t k_min = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < prof.node_t.size(); ++k) {
        const double d = std::fabs(prof.node_u[k]);
        if (d < best && prof.node_u[k] <= 0.0) {
            best = d;
            k_min = k;
        }
    }
    if (best == std::numeric_limits<double>::infinity())
        throw SolverError("topological trajectory never approached u = 0");

    // cut shortly before the apex: at the apex itself the finite-precision
    // departing mode (growing ~ e^{1.118 t} for the quintic tail) is
    // comparable to the hug. The quadratic variant decays exponentially in r
    // and departs abruptly, so it is cut at the apex itself.
    const double t_apex = prof.node_t[k_min];
    const double offset = (p.nl == Nonlinearity::Quintic) ? 2.0 : 0.0;
    const double T = std::max(t_apex - offset, 0.75 * t_apex);
    RadialProfile cut;
    cut.meta = prof.meta;
    cut.topo_tail = true;
    cut.topo_T = T;
    // amplitude of u ~ -C e^{-t/2} fitted over a band where the departing
    // mode is still a sub-percent effect
    {
        double acc = 0.0;
        int cnt = 0;
        for (std::size_t k = 0; k < prof.t.size(); ++k) {
            if (prof.t[k] < T - 4.0 || prof.t[k] > T - 1.0) continue;
            if (prof.u[k] >= 0.0) continue;
            acc += std::log(-prof.u[k]) + 0.5 * prof.t[k];
            ++cnt;
        }
        if (cnt >= 3) {
            cut.topo_C = std::exp(acc / cnt);
        } else {
            cut.topo_C = -prof.u_at(T) * std::exp(0.5 * T);
        }
        if (p.nl != Nonlinearity::Quintic) cut.topo_C = 0.0;
    }
    for (std::size_t k = 0; k < prof.node_t.size() && prof.node_t[k] <= T + 1e-14; ++k) {
        cut.node_t.push_back(prof.node_t[k]);
        cut.node_u.push_back(prof.node_u[k]);
        cut.node_up.push_back(prof.node_up[k]);
    }
    for (const auto& D : prof.steps) {
        if (D.t0 + D.h > T + 1e-14) break;
        cut.steps.push_back(D);
    }
    for (std::size_t k = 0; k < prof.t.size() && prof.t[k] <= T + 1e-14; ++k) {
        cut.t.push_back(prof.t[k]);
        cut.u.push_back(prof.u[k]);
        cut.up.push_back(prof.up[k]);
    }
    return cut;
}

double compute_beta(const RadialProfile& prof) {
    if (prof.node_t.size() < 4) throw std::invalid_argument("profile too short");
    if (!(prof.node_up.back() < 0.0))
        throw std::invalid_argument("compute_beta requires a Negative-classified profile");

    const double tol = prof.meta.beta_tail_tol;
    // first node index from which the forcing stays below tol
    std::size_t k_end = prof.node_t.size();
    for (std::size_t k = prof.node_t.size(); k-- > 0;) {
        if (prof.forcing_at_node(k) >= tol) break;
        k_end = k;
    }
    if (k_end >= prof.node_t.size())
        throw TailNotConverged("forcing never settled below beta_tail_tol before the final time");
    const double beta = -prof.node_up[k_end];
    if (!(beta > 0.0)) throw TailNotConverged("u' not negative after forcing decay");
    return beta;
}

namespace {

// least-squares line u ~ slope * t + c over the tail: the last decade of t,
// widened to hold at least 6 nodes when the integrator strode through it
void fit_tail_line(const RadialProfile& prof, double window, double& slope, double& c) {
    const std::size_t n = prof.node_t.size();
    if (n < 6) throw WindowTooShort("trajectory holds fewer than 6 nodes");
    const double t_last = prof.node_t.back();
    std::size_t k0 = n;
    for (std::size_t k = n; k-- > 0;) {
        if (prof.node_t[k] < t_last - window && n - k >= 6) break;
        k0 = k;
    }
    double sw = 0, st = 0, su = 0, stt = 0, stu = 0;
    for (std::size_t k = k0; k < n; ++k) {
        sw += 1.0;
        st += prof.node_t[k];
        su += prof.node_u[k];
        stt += prof.node_t[k] * prof.node_t[k];
        stu += prof.node_t[k] * prof.node_u[k];
    }
    const double det = sw * stt - st * st;
    slope = (sw * stu - st * su) / det;
    c = (su * stt - st * stu) / det;
}

double one_minus_pow6(double u) {
    // 1 - (1 - e^u)^6 evaluated stably for very negative u
    if (u > -1e-3) {
        const double x = -std::expm1(u);  // 1 - e^u
        return 1.0 - std::pow(x, 6.0);
    }
    const double q = 6.0 * std::log1p(-std::exp(u));
    return -std::expm1(q);
}

} // namespace

std::pair<double, double> check_identities(const RadialProfile& prof, double beta) {
    const auto& p = prof.meta;
    auto integrand1 = [&](double t, double u) {
        return std::exp(2.0 * t) * g_of(p.nl, u);
    };
    auto integrand2 = [&](double t, double u) {
        return std::exp(2.0 * t) * one_minus_pow6(u);
    };

    // composite Simpson on the dense output, 4 panels per accepted step
    double I1 = 0.0, I2 = 0.0;
    for (const auto& D : prof.steps) {
        double f1[5], f2[5];
        for (int q = 0; q <= 4; ++q) {
            const double tq = D.t0 + D.h * q / 4.0;
            const double uq = D.eval(tq, 0);
            f1[q] = integrand1(tq, uq);
            f2[q] = integrand2(tq, uq);
        }
        I1 += D.h / 12.0 * (f1[0] + 4.0 * f1[1] + 2.0 * f1[2] + 4.0 * f1[3] + f1[4]);
        I2 += D.h / 12.0 * (f2[0] + 4.0 * f2[1] + 2.0 * f2[2] + 4.0 * f2[3] + f2[4]);
    }

    // left tail: u ~ u(T) + 2N (t - T) below the start point
    {
        const double T = prof.node_t.front();
        const double uT = prof.node_u.front();
        const double e2T = std::exp(2.0 * T);
        if (p.N > 0) {
            I1 += e2T * std::exp(uT) / (2.0 * p.N + 2.0);
            I2 += 6.0 * e2T * std::exp(uT) / (2.0 * p.N + 2.0);
        } else {
            I1 += e2T * g_of(p.nl, uT) / 2.0;
            I2 += e2T * one_minus_pow6(uT) / 2.0;
        }
    }

    // right tail: u ~ -beta_fit t + c fitted over the last decade (ln 10)
    {
        double slope, c;
        fit_tail_line(prof, std::log(10.0), slope, c);
        const double bf = -slope;
        if (bf > 2.0) {
            const double T = prof.node_t.back();
            const double amp = std::exp((2.0 - bf) * T + c);
            I1 += amp / (bf - 2.0);
            I2 += 6.0 * amp / (bf - 2.0);
        }
    }

    const int N = p.N;
    const double lhs1 = beta + 2.0 * N;
    const double lhs2 = beta * beta / 2.0 - 2.0 * N * N;
    const double res1 = std::fabs(p.lambda * I1 - lhs1) / std::fabs(lhs1);
    const double res2 = std::fabs(p.lambda / 3.0 * I2 - lhs2) / std::fabs(lhs2);
    return {res1, res2};
}

BetaSearchResult find_a_for_beta(int N, double lambda, double beta_target,
                                 const ShootingParams& opts, double beta_tol) {
    if (!(beta_target > 2.0 * N + 4.0))
        throw OutOfRange("beta_target must exceed 2N + 4 = " + std::to_string(2 * N + 4));

    const double a0 = find_a0(N, lambda, opts);
    auto beta_at = [&](double a) {
        auto [prof, cls] = integrate(opts.with_a(a));
        if (cls.tag != ClassTag::Negative)
            throw SolverError("scan point a = " + std::to_string(a) + " is not in A^-");
        return compute_beta(prof);
    };

    // geometric scan of offsets below a0
    std::vector<double> offs;
    for (double s = 0.25; s < 600.0; s *= 1.4) offs.push_back(s);

    BetaSearchResult result;
    double prev_a = 0.0, prev_h = 0.0;
    bool have_prev = false;
    bool have_hit = false;
    for (double s : offs) {
        const double a = a0 - s;
        const double h = beta_at(a) - beta_target;
        if (have_prev && ((prev_h <= 0.0) != (h <= 0.0))) {
            ++result.sign_changes;
            if (!have_hit) {
                // bisect this bracket (the one nearest a0, since the scan
                // walks away from it)
                double lo = a, hi = prev_a;  // lo < hi
                double h_lo = h;
                for (int it = 0; it < 200; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double hm = beta_at(mid) - beta_target;
                    if (std::fabs(hm) < beta_tol) {
                        result.a = mid;
                        result.beta = hm + beta_target;
                        have_hit = true;
                        break;
                    }
                    if ((hm <= 0.0) == (h_lo <= 0.0)) {
                        lo = mid;
                        h_lo = hm;
                    } else {
                        hi = mid;
                    }
                }
                if (!have_hit)
                    throw SolverError("beta bisection failed to reach beta_tol");
            }
        }
        prev_a = a;
        prev_h = h;
        have_prev = true;
    }
    if (!have_hit)
        throw NoBracket("no sign change of beta(a) - target over the scan range");
    return result;
}

PhysicalProfile to_physical(const RadialProfile& prof) {
    PhysicalProfile phys;
    const double lambda = prof.meta.lambda;
    const std::size_t n = prof.t.size();
    phys.r.resize(n);
    phys.phisq.resize(n);
    phys.F12.resize(n);
    phys.energy_density.resize(n);
    phys.djphi_sq.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double r = std::exp(prof.t[k]);
        const double x = std::exp(prof.u[k]);
        const double omx = -std::expm1(prof.u[k]);  // 1 - e^u (may be < 0 if u > 0)
        const double om5 = omx * omx * omx * omx * omx;
        const double ur = prof.up[k] / r;
        phys.r[k] = r;
        phys.phisq[k] = x;
        phys.F12[k] = 0.5 * lambda * x * om5;
        phys.djphi_sq[k] = 0.5 * ur * ur * x;
        const double om2 = omx * omx;
        const double om8 = om2 * om2 * om2 * om2;
        phys.energy_density[k] =
            0.75 * lambda * x * om8 + 1.5 * x * om2 * ur * ur;
    }
    return phys;
}

} // namespace csvortex::radial
