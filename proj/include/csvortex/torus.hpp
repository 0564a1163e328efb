#pragma once

#include "csvortex/grid.hpp"
#include "csvortex/model.hpp"
#include "csvortex/spectral.hpp"

#include <string>
#include <vector>

namespace csvortex::torus {

struct SolverOptions {
    double K = 0.0;                  // 0 = use the default 6*lambda; must be >= 6*lambda
    double tol = 1e-10;              // residual sup-norm declaring convergence
    int max_iter = 5000;
    double divergence_drop = 50.0;   // min(u) drop below its start that flags divergence
    double monotone_slack = 1e-13;   // allowed uphill move per iteration
    TorusOperator op = TorusOperator::FiniteDifference;

    double effective_K(double lambda) const { return K > 0.0 ? K : 6.0 * lambda; }
};

enum class IterationTag { Converged, Diverged };

struct IterationOutcome {
    IterationTag tag = IterationTag::Diverged;
    TorusField v;                        // last iterate
    TorusField u0;                       // background used by the run
    int iterations = 0;
    std::vector<double> residual_history;
    double final_residual = 0.0;         // recomputed with an explicit Laplacian apply
    std::string reason;                  // for Diverged: "drop" | "stalled" | "max_iter"
};

// Background u0 with mean zero solving Lap(u0) = -4*pi*N/|O| + point sources
// of weight 4*pi*n_j at the node nearest each vortex.
TorusField build_background_u0(const TorusGrid& grid, const VortexSet& vortices,
                               TorusOperator op = TorusOperator::FiniteDifference);

// (Lap - K) v = rhs, K > 0, solved in the operator's eigenbasis.
TorusField helmholtz_solve(const TorusGrid& grid, double K, const TorusField& rhs,
                           TorusOperator op = TorusOperator::FiniteDifference);

// The monotone scheme from v0 = -u0. Converged iterates satisfy u = u0+v < 0
// and a sup-norm residual below tol; the sequence is checked to be pointwise
// non-increasing each iteration.
IterationOutcome monotone_iterate(const TorusGrid& grid, const VortexSet& vortices,
                                  double lambda, const SolverOptions& opts = {});

// Necessary existence bound (6^6/5^5) * 4*pi*N / area.
double lambda_lower_bound(int N, double area);

struct LambdaCEstimate {
    double lambda_c = 0.0;
    double bracket_width = 0.0;
    // every oracle call made during seeding + bisection, in order
    std::vector<std::pair<double, bool>> scan;  // (lambda, converged)
};

struct LambdaCOptions {
    SolverOptions solver;
    double rel_bracket_tol = 1e-3;
    int max_doublings = 40;
};

// Bisect the critical coupling between the necessary bound and a doubling
// upper seed, using monotone_iterate as the existence oracle.
LambdaCEstimate estimate_lambda_c(const TorusGrid& grid, const VortexSet& vortices,
                                  const LambdaCOptions& opts = {});

double kappa_c_from_lambda_c(double lambda_c);

struct Subsolution {
    TorusField w0;
    double valid_for_lambda_ge = 0.0;
    double eps = 0.0;
    double mean_cutoff = 0.0;  // average of the cutoff f_eps
};

// Cutoff-based sub-solution of Lemma-3.2 type: solves Lap(w) = g_eps and
// shifts so exp(u0+w0) <= 1; returns the smallest lambda for which the
// discrete inequality holds on the whole grid.
Subsolution construct_subsolution(const TorusGrid& grid, const VortexSet& vortices,
                                  double eps, TorusOperator op = TorusOperator::FiniteDifference);

// Discrete action functional with spectral gradient and uniform-grid
// (trapezoidal, here exact) quadrature.
double action(const TorusField& v, const TorusField& u0, double lambda, int N);

// Explicit sup-norm residual of the reduced equation at (u0, v).
double equation_residual(const TorusField& v, const TorusField& u0, double lambda,
                         int N, TorusOperator op);

} // namespace csvortex::torus
