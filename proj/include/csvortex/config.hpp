#pragma once

#include "csvortex/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace csvortex {

enum class RunMode {
    RadialTopological,
    RadialNontopological,
    RadialSweep,
    Torus,
    Plane,
    LambdaCritical,
};

std::string mode_name(RunMode m);
RunMode mode_from_name(const std::string& s);

struct RunConfig {
    RunMode mode = RunMode::RadialTopological;
    Coupling coupling{1.0, 12.0};
    bool coupling_given_as_kappa = true;
    std::vector<Vortex> vortices;

    // torus / lambda-critical domain
    double Lx = 0.0, Ly = 0.0;
    int nx = 0, ny = 0;
    std::string torus_operator = "fd";  // "fd" | "spectral"

    // plane domain
    std::vector<double> R_schedule;
    int plane_n = 0;

    // radial domain
    double t_start = -12.0;
    double t_max = 40.0;

    // solver block
    double K_factor = 6.0;
    double tol = 1e-10;
    int max_iter = 5000;

    // targets
    std::optional<double> beta_target;        // radial-nontopological
    std::optional<double> a_min, a_max;       // radial-sweep
    int sweep_samples = 20;
    bool sweep_relative_to_a0 = false;

    std::string output_dir = "out";

    int total_winding() const {
        int N = 0;
        for (const auto& v : vortices) N += v.multiplicity;
        return N;
    }
    VortexSet vortex_set() const { return VortexSet(vortices); }

    // canonical JSON form: parse(normalize(x)) == parse(x)
    std::string normalize() const;
};

// Parses and validates a JSON run configuration. Throws SchemaError with the
// offending field path on shape errors, ConstraintError on domain violations.
RunConfig parse_config(const std::string& json_text);

} // namespace csvortex
