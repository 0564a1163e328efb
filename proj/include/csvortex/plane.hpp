#pragma once

#include "csvortex/model.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace csvortex::plane {

// Square exhaustion domain (-R, R)^2 with n interior nodes per side,
// h = 2R/(n+1); node (i, j) at (-R + (i+1)h, -R + (j+1)h).
struct SquareDomain {
    double R = 0.0;
    int n = 0;

    SquareDomain() = default;
    SquareDomain(double R_, int n_);

    double h() const { return 2.0 * R / (n + 1); }
    double coord(int i) const { return -R + (i + 1) * h(); }
    std::size_t count() const { return static_cast<std::size_t>(n) * n; }
};

// Interior values plus the four boundary closure lines (x = -R, +R, y = -R, +R).
struct PlaneField {
    SquareDomain dom;
    std::vector<double> v;  // interior, row-major v[i*n + j]
    std::vector<double> west, east, south, north;

    double& at(int i, int j) { return v[static_cast<std::size_t>(i) * dom.n + j]; }
    double at(int i, int j) const { return v[static_cast<std::size_t>(i) * dom.n + j]; }
};

// background u0(x) = -sum n_s ln(1 + |x-p_s|^-2), with |x-p_s|^2 clamped to
// (h/4)^2 so the float stays finite on vortex nodes
double background_u0_at(double x, double y, const VortexSet& vortices, double r_min);

// g = 4 sum n_s (1 + |x-p_s|^2)^-2; integrates to 4 pi N over the plane
double source_g_at(double x, double y, const VortexSet& vortices);

std::vector<double> background_u0_interior(const SquareDomain& dom, const VortexSet& vs);
std::vector<double> source_g_interior(const SquareDomain& dom, const VortexSet& vs);

// Fast solver for (Lap_h - K) v = rhs on the square with homogeneous
// Dirichlet data, by full diagonalization in the sine basis (DST-I per
// direction). Inhomogeneous data is folded into the rhs by the callers.
class DirichletSolver {
public:
    explicit DirichletSolver(const SquareDomain& dom);
    ~DirichletSolver();
    DirichletSolver(const DirichletSolver&) = delete;
    DirichletSolver& operator=(const DirichletSolver&) = delete;

    void solve(double K, const std::vector<double>& rhs, std::vector<double>& out);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct PlaneSolverOptions {
    double K = 0.0;              // 0 = 6*lambda
    double tol = 1e-10;          // residual sup-norm
    int max_iter = 100000;
    double monotone_slack = 1e-13;
    bool check_monotone = true;
    // Newton/PCG endgame: engaged once the plain sweeps reach their slow
    // phase, every candidate verified against the explicit residual and the
    // super-solution bound before acceptance. Turn off to run the plain
    // scheme only.
    bool newton_endgame = true;
    double endgame_switch_tol = 1e-3;
    std::optional<std::vector<double>> initial_v;  // test hook (perturbed restarts)

    double effective_K(double lambda) const { return K > 0.0 ? K : 6.0 * lambda; }
};

enum class PlaneTag { Converged, Diverged };

struct PlaneOutcome {
    PlaneTag tag = PlaneTag::Diverged;
    SquareDomain dom;
    std::vector<double> v;   // interior remainder
    std::vector<double> u0;  // interior background
    PlaneField field() const;  // v with the -u0 boundary closure attached
    std::vector<double> u() const;  // interior u = u0 + v
    int iterations = 0;
    int newton_steps = 0;
    std::vector<double> residual_history;
    double final_residual = 0.0;
    std::string reason;
};

PlaneOutcome monotone_iterate_plane(const SquareDomain& dom, const VortexSet& vortices,
                                    double lambda, const PlaneSolverOptions& opts = {});

// u sampled anywhere in the closed square (bilinear; u = 0 on the boundary).
double sample_u(const PlaneOutcome& sol, double x, double y);

double flux_plane(const PlaneOutcome& sol, double lambda);

struct PlaneStageReport {
    double R = 0.0;
    int iterations = 0;
    double flux = 0.0;
    double residual = 0.0;
    double decrease_vs_prev = 0.0;  // max over common nodes of u_new - u_prev
    double gap_vs_prev = 0.0;       // max |u_new - u_prev| over common nodes
};

struct PlaneScheduleResult {
    std::vector<PlaneStageReport> stages;
    PlaneOutcome final_outcome;
    double cauchy_gap = 0.0;
};

PlaneScheduleResult solve_topological_plane(const VortexSet& vortices, double lambda,
                                            const std::vector<double>& R_schedule, int n,
                                            const PlaneSolverOptions& opts = {});

struct ShallowSubsolution {
    double mu = 0.0;        // coupling of the auxiliary equation
    PlaneField v_star;      // sub-solution remainder, with boundary closure
    double min_margin = 0.0;  // min over nodes of Lap v_* - lambda f(u0+v_*) - g
    double far_field = 0.0;   // v_* at the domain corner (tends to -a)
    std::vector<double> u_star;  // interior solution of the auxiliary equation
};

// Sub-solution v_* = u_* - a - u0 from the shallow auxiliary equation with
// mu = lambda e^{-a} (e^{-a}-1)^4; solved by radial shooting when all
// vortices coincide, by the quadratic-nonlinearity iteration otherwise.
// Throws InequalityViolation when the discrete inequality fails beyond
// the O(h^2) slack.
ShallowSubsolution shallow_subsolution(const SquareDomain& dom, const VortexSet& vortices,
                                       double lambda, double a,
                                       const PlaneSolverOptions& opts = {});

} // namespace csvortex::plane
