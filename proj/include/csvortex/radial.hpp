#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

namespace csvortex::radial {

// Nonlinearity of the shooting ODE u'' + lambda e^{2t} g(u) = 0.
// Quintic is the model equation; Quadratic (e^u(1-e^u), truncated) backs the
// shallow auxiliary equation used by the plane sub-solution.
enum class Nonlinearity { Quintic, Quadratic };

struct ShootingParams {
    int N = 1;                     // winding (multiplicity at the origin)
    double lambda = 1.0;
    double a = 0.0;                // shooting parameter: u = 2Nt + a + o(1), t -> -inf
    double t_start = -12.0;
    double t_max = 40.0;
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double classify_eps = 1e-10;
    bool picard_refine = false;    // refine the start state by iterating (5.18)-type map
    double report_dt = 0.02;       // uniform dense-output grid spacing
    double beta_tail_tol = 1e-14;  // forcing threshold that ends the decay tail
    bool stop_at_negative_event = false;  // classification-only runs may stop early
    Nonlinearity nl = Nonlinearity::Quintic;

    void validate() const;
    ShootingParams with_a(double a_) const {
        ShootingParams p = *this;
        p.a = a_;
        return p;
    }
};

enum class ClassTag { Positive, Negative, Undetermined };

struct Classification {
    ClassTag tag = ClassTag::Undetermined;
    double event_time = 0.0;  // where the deciding event fired, or the final time
};

// One accepted integrator step with its dense-output coefficients
// (components: 0 = u, 1 = u').
struct DenseStep {
    double t0 = 0.0, h = 0.0;
    std::array<double, 2> r1{}, r2{}, r3{}, r4{}, r5{};
    double eval(double t, int comp) const;
};

struct RadialProfile {
    // uniform reporting grid
    std::vector<double> t, u, up;
    // integrator-chosen nodes (step ends) and dense steps, used by the
    // quadrature and tail analysis
    std::vector<double> node_t, node_u, node_up;
    std::vector<DenseStep> steps;
    ShootingParams meta;
    double first_uprime_zero = 0.0;  // refined u' = 0 crossing (Negative runs)
    bool has_uprime_zero = false;
    // set by topological_profile: trajectory truncated at the hug apex,
    // algebraic tail u ~ -C e^{-t/2} beyond topo_T
    bool topo_tail = false;
    double topo_C = 0.0;
    double topo_T = 0.0;

    double forcing_at_node(std::size_t k) const;
    // linear interpolation of u on the reporting grid
    double u_at(double t_query) const;
};

// State at t_start: zeroth order (2N t_start + a, 2N), optionally refined by
// Picard iterations of the integral equation on (-inf, t_start].
std::pair<double, double> init_condition(const ShootingParams& p);

std::pair<RadialProfile, Classification> integrate(const ShootingParams& p);

Classification classify(int N, double lambda, double a, const ShootingParams& opts);

// Classification with the bisection tie-break: Undetermined counts as
// Positive when u at the final time hugs zero closer than classify_eps.
Classification classify_with_tiebreak(int N, double lambda, double a,
                                      const ShootingParams& opts);

// The boundary parameter separating blow-up from decay, bisected to a_tol.
double find_a0(int N, double lambda, const ShootingParams& opts, double a_tol = 1e-12);

// The trajectory at the bisected a0, truncated at the point of closest
// approach to u = 0: past it the finite-precision shooting parameter departs
// from the critical solution at rate ~ e^{1.118 t}, so the drop-off is the
// precision horizon, not a solver artifact. The discarded tail is the
// algebraic hug u ~ -C e^{-t/2}, recorded for quadrature corrections.
RadialProfile topological_profile(int N, double lambda, const ShootingParams& opts,
                                  double a_tol = 1e-12);

// Decay exponent beta = -lim u'(t) of a Negative-classified profile.
double compute_beta(const RadialProfile& profile);

// Relative residuals of the two integral identities
//   beta + 2N        = lambda   Int e^{2t} e^u (1-e^u)^5 dt
//   beta^2/2 - 2N^2  = lambda/3 Int e^{2t} [1 - (1-e^u)^6] dt
// computed by per-step composite quadrature with analytic tail corrections.
std::pair<double, double> check_identities(const RadialProfile& profile, double beta);

struct BetaSearchResult {
    double a = 0.0;
    double beta = 0.0;
    int sign_changes = 0;  // brackets seen during the scan
};

BetaSearchResult find_a_for_beta(int N, double lambda, double beta_target,
                                 const ShootingParams& opts, double beta_tol = 1e-6);

struct PhysicalProfile {
    std::vector<double> r, phisq, F12, energy_density, djphi_sq;
};

// Physical radial fields over r = e^t: |phi|^2, magnetic field, energy
// density and kinetic density.
PhysicalProfile to_physical(const RadialProfile& profile);

} // namespace csvortex::radial
