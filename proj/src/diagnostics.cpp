#include "csvortex/diagnostics.hpp"

#include "csvortex/errors.hpp"
#include "csvortex/kernels.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <limits>
#include <numbers>

namespace csvortex::diagnostics {

double flux_grid(const std::vector<double>& u, double lambda, double cell_area) {
    std::vector<double> dens(u.size());
    kernels::flux_density(u.data(), u.size(), dens.data());
    return 0.5 * lambda * kernels::sum(dens) * cell_area;
}

double flux_radial(const radial::RadialProfile& profile) {
    // Phi = (lambda/2) Int e^u (1-e^u)^5 dx = pi lambda Int e^{2t} g(u) dt,
    // reusing the identity quadrature with its tail corrections: the first
    // identity reads lambda I1 = beta + 2N, so Phi = pi lambda I1.
    const auto& p = profile.meta;
    double I1 = 0.0;
    for (const auto& D : profile.steps) {
        double f[5];
        for (int q = 0; q <= 4; ++q) {
            const double tq = D.t0 + D.h * q / 4.0;
            f[q] = std::exp(2.0 * tq) * nonlinearity::g(D.eval(tq, 0));
        }
        I1 += D.h / 12.0 * (f[0] + 4.0 * f[1] + 2.0 * f[2] + 4.0 * f[3] + f[4]);
    }
    const double T = profile.node_t.front();
    const double uT = profile.node_u.front();
    if (p.N > 0)
        I1 += std::exp(2.0 * T) * std::exp(uT) / (2.0 * p.N + 2.0);
    else
        I1 += std::exp(2.0 * T) * nonlinearity::g(uT) / 2.0;
    if (profile.topo_tail) {
        // hug tail u ~ -C e^{-t/2}: Int_T^inf e^{2t} g(u) dt with
        // g ~ (-u)^5 (1 + 3.5 u) to next order
        const double C = profile.topo_C;
        const double C5 = C * C * C * C * C;
        const double eT = std::exp(-0.5 * profile.topo_T);
        I1 += C5 * (2.0 * eT - 3.5 * C * eT * eT);
    }
    return std::numbers::pi * p.lambda * I1;
}

std::pair<double, double> energy_and_charge(double flux, double kappa) {
    return {flux, kappa * flux};
}

double decay_fit(const radial::RadialProfile& profile) {
    // window: last 25% of the trajectory after the forcing has decayed
    const auto& t = profile.node_t;
    std::size_t k_dec = t.size();
    for (std::size_t k = t.size(); k-- > 0;) {
        if (profile.forcing_at_node(k) >= profile.meta.beta_tail_tol) break;
        k_dec = k;
    }
    const double t_lo = std::max(t[std::min(k_dec, t.size() - 1)],
                                 t.back() - 0.25 * (t.back() - t.front()));
    double sw = 0, st = 0, su = 0, stt = 0, stu = 0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (t[k] < t_lo) continue;
        sw += 1;
        st += t[k];
        su += profile.node_u[k];
        stt += t[k] * t[k];
        stu += t[k] * profile.node_u[k];
    }
    if (sw < 8.0) throw WindowTooShort("decay-fit window holds fewer than 8 nodes");
    const double det = sw * stt - st * st;
    const double slope = (sw * stu - st * su) / det;
    return -slope;
}

HiggsGauge reconstruct_higgs_gauge(const std::vector<double>& u, int nx, int ny,
                                   double x0, double y0, double hx, double hy,
                                   const VortexSet& vortices, bool periodic) {
    HiggsGauge hg;
    hg.nx = nx;
    hg.ny = ny;
    const std::size_t nn = static_cast<std::size_t>(nx) * ny;
    hg.phi_abs.resize(nn);
    hg.A1.resize(nn);
    hg.A2.resize(nn);
    hg.mask.assign(nn, 0);

    auto val = [&](int i, int j) -> double {
        if (periodic) {
            i = (i % nx + nx) % nx;
            j = (j % ny + ny) % ny;
        } else {
            i = std::clamp(i, 0, nx - 1);
            j = std::clamp(j, 0, ny - 1);
        }
        return u[static_cast<std::size_t>(i) * ny + j];
    };

    const double Lx = nx * hx, Ly = ny * hy;
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            const std::size_t m = static_cast<std::size_t>(i) * ny + j;
            const double x = x0 + i * hx, y = y0 + j * hy;
            hg.phi_abs[m] = std::exp(0.5 * u[m]);

            // centered differences of u
            const double ux = (val(i + 1, j) - val(i - 1, j)) / (2.0 * hx);
            const double uy = (val(i, j + 1) - val(i, j - 1)) / (2.0 * hy);

            // grad theta = sum n_s (-(y-py), (x-px)) / r^2, single valued
            double tx = 0.0, ty = 0.0;
            for (const auto& p : vortices) {
                double dx = x - p.x, dy = y - p.y;
                if (periodic) {  // nearest periodic image
                    if (dx > 0.5 * Lx) dx -= Lx;
                    if (dx < -0.5 * Lx) dx += Lx;
                    if (dy > 0.5 * Ly) dy -= Ly;
                    if (dy < -0.5 * Ly) dy += Ly;
                }
                const double r2 = dx * dx + dy * dy;
                if (r2 < 1.5 * 1.5 * (hx * hx + hy * hy)) hg.mask[m] = 1;
                if (r2 > 0.0) {
                    tx += -p.multiplicity * dy / r2;
                    ty += p.multiplicity * dx / r2;
                }
            }
            // A1 = d1(theta) + 1/2 d2(u), A2 = d2(theta) - 1/2 d1(u)
            hg.A1[m] = tx + 0.5 * uy;
            hg.A2[m] = ty - 0.5 * ux;
        }
    }
    return hg;
}

double loop_integral_A(const HiggsGauge& hg, double hx, double hy, int i0, int i1,
                       int j0, int j1) {
    auto A1 = [&](int i, int j) { return hg.A1[static_cast<std::size_t>(i) * hg.ny + j]; };
    auto A2 = [&](int i, int j) { return hg.A2[static_cast<std::size_t>(i) * hg.ny + j]; };
    double acc = 0.0;
    for (int i = i0; i < i1; ++i)  // bottom, +x
        acc += 0.5 * (A1(i, j0) + A1(i + 1, j0)) * hx;
    for (int j = j0; j < j1; ++j)  // right, +y
        acc += 0.5 * (A2(i1, j) + A2(i1, j + 1)) * hy;
    for (int i = i1; i > i0; --i)  // top, -x
        acc -= 0.5 * (A1(i, j1) + A1(i - 1, j1)) * hx;
    for (int j = j1; j > j0; --j)  // left, -y
        acc -= 0.5 * (A2(i0, j) + A2(i0, j - 1)) * hy;
    return acc;
}

double flux_in_rectangle(const std::vector<double>& u, int nx, int ny, double lambda,
                         double hx, double hy, int i0, int i1, int j0, int j1) {
    // midpoint-in-cells sum of F12 = (lambda/2) e^u (1-e^u)^5 over the
    // rectangle, cell value from the 4-node average of u
    double acc = 0.0;
    for (int i = i0; i < i1; ++i) {
        for (int j = j0; j < j1; ++j) {
            const double uc = 0.25 * (u[static_cast<std::size_t>(i) * ny + j] +
                                      u[static_cast<std::size_t>(i + 1) * ny + j] +
                                      u[static_cast<std::size_t>(i) * ny + j + 1] +
                                      u[static_cast<std::size_t>(i + 1) * ny + j + 1]);
            acc += -nonlinearity::f(uc);
        }
    }
    return 0.5 * lambda * acc * hx * hy;
}

double f12_consistency(const std::vector<double>& u, int nx, int ny, double lambda,
                       double hx, double hy, const VortexSet& vortices, bool periodic) {
    std::vector<double> lap(u.size());
    if (periodic) {
        kernels::laplacian_periodic_5pt(u.data(), nx, ny, hx, hy, lap.data());
    } else {
        std::vector<double> zero(static_cast<std::size_t>(std::max(nx, ny)), 0.0);
        kernels::laplacian_dirichlet_5pt(u.data(), nx, hx, zero.data(), zero.data(),
                                         zero.data(), zero.data(), lap.data());
    }
    double worst = 0.0;
    double scale = 0.0;
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            const std::size_t m = static_cast<std::size_t>(i) * ny + j;
            bool near = false;
            for (const auto& p : vortices) {
                double dx = i * hx - p.x, dy = j * hy - p.y;
                if (periodic) {
                    const double Lx = nx * hx, Ly = ny * hy;
                    if (dx > 0.5 * Lx) dx -= Lx;
                    if (dx < -0.5 * Lx) dx += Lx;
                    if (dy > 0.5 * Ly) dy -= Ly;
                    if (dy < -0.5 * Ly) dy += Ly;
                }
                if (dx * dx + dy * dy < 16.0 * (hx * hx + hy * hy)) near = true;
            }
            if (near || (!periodic && (i < 2 || j < 2 || i >= nx - 2 || j >= ny - 2)))
                continue;
            const double from_nl = -0.5 * lambda * nonlinearity::f(u[m]);
            const double from_lap = -0.5 * lap[m];
            worst = std::max(worst, std::fabs(from_nl - from_lap));
            scale = std::max(scale, std::fabs(from_nl));
        }
    }
    return scale > 0.0 ? worst / scale : 0.0;
}

namespace {

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace

std::string SolveReport::to_json() const {
    std::string s;
    s += "{\n";
    s += "  \"solver\": \"" + solver + "\",\n";
    s += "  \"N\": " + std::to_string(N) + ",\n";
    s += "  \"lambda\": " + fmt17(lambda) + ",\n";
    s += "  \"kappa\": " + fmt17(kappa) + ",\n";
    s += "  \"flux\": " + fmt17(flux) + ",\n";
    s += "  \"energy\": " + fmt17(energy) + ",\n";
    s += "  \"charge\": " + fmt17(charge) + ",\n";
    if (beta) s += "  \"beta\": " + fmt17(*beta) + ",\n";
    if (a) s += "  \"a\": " + fmt17(*a) + ",\n";
    if (identity_residuals)
        s += "  \"identity_residuals\": [" + fmt17(identity_residuals->first) + ", " +
             fmt17(identity_residuals->second) + "],\n";
    if (decay_slope) s += "  \"decay_slope\": " + fmt17(*decay_slope) + ",\n";
    if (lambda_c) s += "  \"lambda_c\": " + fmt17(*lambda_c) + ",\n";
    if (lambda_c_bracket) s += "  \"lambda_c_bracket\": " + fmt17(*lambda_c_bracket) + ",\n";
    if (kappa_c) s += "  \"kappa_c\": " + fmt17(*kappa_c) + ",\n";
    if (!stages.empty()) {
        s += "  \"stages\": [\n";
        for (std::size_t k = 0; k < stages.size(); ++k) {
            const auto& st = stages[k];
            s += "    {\"R\": " + fmt17(st.R) +
                 ", \"iterations\": " + std::to_string(st.iterations) +
                 ", \"flux\": " + fmt17(st.flux) + ", \"residual\": " + fmt17(st.residual) +
                 ", \"gap\": " + fmt17(st.gap) + "}";
            s += (k + 1 < stages.size()) ? ",\n" : "\n";
        }
        s += "  ],\n";
    }
    s += "  \"convergence\": {\"status\": \"" + status +
         "\", \"iterations\": " + std::to_string(iterations) +
         ", \"final_residual\": " + fmt17(final_residual) + "},\n";
    s += "  \"provenance\": {\"config_hash\": \"" + config_hash + "\", \"created_at\": \"" +
         created_at + "\"}\n";
    s += "}\n";
    return s;
}

std::string fnv1a_hash(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

std::string iso_timestamp_now() {
    std::time_t now = std::time(nullptr);
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

} // namespace csvortex::diagnostics
