#pragma once

#include "csvortex/grid.hpp"
#include "csvortex/model.hpp"
#include "csvortex/radial.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace csvortex::diagnostics {

// Magnetic flux (lambda/2) Int e^u (1-e^u)^5 over the given geometry. Always
// computed from the nonlinearity, never from second differences of u.
double flux_grid(const std::vector<double>& u, double lambda, double cell_area);
double flux_radial(const radial::RadialProfile& profile);

// Self-dual saturation: E = flux, Q = kappa * flux.
std::pair<double, double> energy_and_charge(double flux, double kappa);

// Least-squares decay slope of u over the post-decay tail; returns the
// positive beta estimate.
double decay_fit(const radial::RadialProfile& profile);

// |phi|, A_1, A_2 on a uniform grid from u and the explicit vortex phase.
// Nodes within one cell of a vortex are masked (mask = true).
struct HiggsGauge {
    int nx = 0, ny = 0;
    std::vector<double> phi_abs, A1, A2;
    std::vector<unsigned char> mask;
};

// periodic = true wraps the centered differences; otherwise one-sided at the
// box edge. x0/y0 and hx/hy place the nodes: (x0 + i hx, y0 + j hy).
HiggsGauge reconstruct_higgs_gauge(const std::vector<double>& u, int nx, int ny,
                                   double x0, double y0, double hx, double hy,
                                   const VortexSet& vortices, bool periodic);

// Trapezoid line integral of A along the grid-aligned rectangle
// [i0, i1] x [j0, j1] (node indices), counterclockwise.
double loop_integral_A(const HiggsGauge& hg, double hx, double hy, int i0, int i1,
                       int j0, int j1);

// Flux through the same rectangle from the nonlinearity form of F_12.
double flux_in_rectangle(const std::vector<double>& u, int nx, int ny, double lambda,
                         double hx, double hy, int i0, int i1, int j0, int j1);

// One-shot probe of F_12 = -1/2 Lap ln|phi|^2 against the nonlinearity form,
// relative sup deviation away from the masked vortex cells.
double f12_consistency(const std::vector<double>& u, int nx, int ny, double lambda,
                       double hx, double hy, const VortexSet& vortices, bool periodic);

struct StageRow {
    double R = 0.0;
    int iterations = 0;
    double flux = 0.0;
    double residual = 0.0;
    double gap = 0.0;
};

struct SolveReport {
    std::string solver;  // "radial" | "torus" | "plane"
    int N = 0;
    double lambda = 0.0;
    double kappa = 0.0;
    double flux = 0.0;
    double energy = 0.0;
    double charge = 0.0;
    std::optional<double> beta;
    std::optional<double> a;
    std::optional<std::pair<double, double>> identity_residuals;
    std::optional<double> decay_slope;
    std::optional<double> lambda_c;
    std::optional<double> lambda_c_bracket;
    std::optional<double> kappa_c;
    std::vector<StageRow> stages;  // plane schedule only
    std::string status = "converged";
    int iterations = 0;
    double final_residual = 0.0;
    std::string config_hash;
    std::string created_at;

    // Fixed field order, floats at 17 significant digits; bit-identical for
    // identical configs apart from created_at.
    std::string to_json() const;
};

std::string fnv1a_hash(const std::string& text);
std::string iso_timestamp_now();

} // namespace csvortex::diagnostics
