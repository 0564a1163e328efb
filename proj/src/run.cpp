#include "csvortex/run.hpp"

#include "csvortex/csv.hpp"
#include "csvortex/diagnostics.hpp"
#include "csvortex/errors.hpp"
#include "csvortex/plane.hpp"
#include "csvortex/radial.hpp"
#include "csvortex/torus.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>

namespace csvortex {

namespace fs = std::filesystem;
using diagnostics::SolveReport;

namespace {

void write_report(const fs::path& dir, const SolveReport& rep) {
    std::ofstream f(dir / "report.json");
    f << rep.to_json();
}

SolveReport base_report(const RunConfig& cfg, const std::string& solver) {
    SolveReport rep;
    rep.solver = solver;
    rep.N = cfg.total_winding();
    rep.lambda = cfg.coupling.lambda;
    rep.kappa = cfg.coupling.kappa;
    rep.config_hash = diagnostics::fnv1a_hash(cfg.normalize());
    rep.created_at = diagnostics::iso_timestamp_now();
    return rep;
}

radial::ShootingParams radial_params(const RunConfig& cfg) {
    radial::ShootingParams p;
    p.N = cfg.total_winding();
    p.lambda = cfg.coupling.lambda;
    p.t_start = cfg.t_start;
    p.t_max = cfg.t_max;
    p.abs_tol = cfg.tol;
    p.rel_tol = cfg.tol;
    // the start point must sit deep in the linear regime relative to abs_tol;
    // deepen it when a large lambda would violate that
    const double need = -0.5 * std::log(p.abs_tol / (2.0 * p.lambda));
    if (p.t_start > -need) p.t_start = -(need + 1.0);
    return p;
}

void write_radial_artifacts(const fs::path& dir, const radial::RadialProfile& prof) {
    csv::write((dir / "profile.csv").string(), "t,u,up", {&prof.t, &prof.u, &prof.up});
    const auto phys = radial::to_physical(prof);
    csv::write((dir / "physical.csv").string(), "r,phisq,F12,energy_density",
               {&phys.r, &phys.phisq, &phys.F12, &phys.energy_density});
}

int run_radial_topological(const RunConfig& cfg, std::ostream& log) {
    auto p = radial_params(cfg);
    SolveReport rep = base_report(cfg, "radial");
    const double a0 = radial::find_a0(p.N, p.lambda, p);
    auto [prof, cls] = radial::integrate(p.with_a(a0));
    log << "radial-topological: a0 = " << a0 << ", classified "
        << (cls.tag == radial::ClassTag::Undetermined ? "Undetermined" : "event") << "\n";

    rep.a = a0;
    rep.flux = diagnostics::flux_radial(prof);
    std::tie(rep.energy, rep.charge) = diagnostics::energy_and_charge(rep.flux, rep.kappa);
    rep.iterations = static_cast<int>(prof.steps.size());
    rep.final_residual = std::fabs(prof.u.back());
    rep.status = "converged";

    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    write_radial_artifacts(dir, prof);
    write_report(dir, rep);
    return exit_ok;
}

int run_radial_nontopological(const RunConfig& cfg, std::ostream& log) {
    auto p = radial_params(cfg);
    SolveReport rep = base_report(cfg, "radial");
    const auto hit = radial::find_a_for_beta(p.N, p.lambda, *cfg.beta_target, p);
    auto [prof, cls] = radial::integrate(p.with_a(hit.a));
    if (cls.tag != radial::ClassTag::Negative)
        throw SolverError("selected shooting parameter left A^-");
    const double beta = radial::compute_beta(prof);
    const auto res = radial::check_identities(prof, beta);
    log << "radial-nontopological: a = " << hit.a << ", beta = " << beta
        << " (target " << *cfg.beta_target << ", " << hit.sign_changes
        << " scan brackets)\n";

    rep.a = hit.a;
    rep.beta = beta;
    rep.identity_residuals = res;
    rep.decay_slope = diagnostics::decay_fit(prof);
    rep.flux = diagnostics::flux_radial(prof);
    std::tie(rep.energy, rep.charge) = diagnostics::energy_and_charge(rep.flux, rep.kappa);
    rep.iterations = static_cast<int>(prof.steps.size());
    rep.final_residual = std::max(res.first, res.second);
    rep.status = "converged";

    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    write_radial_artifacts(dir, prof);
    write_report(dir, rep);
    return exit_ok;
}

int run_radial_sweep(const RunConfig& cfg, std::ostream& log) {
    auto p = radial_params(cfg);
    SolveReport rep = base_report(cfg, "radial");
    double lo = *cfg.a_min, hi = *cfg.a_max;
    if (cfg.sweep_relative_to_a0) {
        const double a0 = radial::find_a0(p.N, p.lambda, p);
        lo += a0;
        hi += a0;
        log << "radial-sweep: a0 = " << a0 << ", range [" << lo << ", " << hi << "]\n";
    }
    const int m = cfg.sweep_samples;
    std::vector<double> a_list(m), beta_list(m);
    std::vector<std::string> errors(m);
    // independent shooting runs fan out to the worker pool
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < m; ++k) {
        const double a = lo + (hi - lo) * k / (m - 1);
        a_list[k] = a;
        try {
            auto [prof, cls] = radial::integrate(p.with_a(a));
            if (cls.tag != radial::ClassTag::Negative)
                throw SolverError("a not in A^-");
            beta_list[k] = radial::compute_beta(prof);
        } catch (const std::exception& e) {
            errors[k] = e.what();
        }
    }
    for (int k = 0; k < m; ++k)
        if (!errors[k].empty())
            throw SolverError("sweep sample a = " + std::to_string(a_list[k]) + ": " +
                              errors[k]);

    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir / "plotdata");
    csv::write((dir / "plotdata" / "beta_vs_a.csv").string(), "a,beta",
               {&a_list, &beta_list});

    // run diagnostics for the sample nearest a0 (largest a)
    auto [prof, cls] = radial::integrate(p.with_a(a_list.back()));
    rep.a = a_list.back();
    rep.beta = beta_list.back();
    rep.flux = diagnostics::flux_radial(prof);
    std::tie(rep.energy, rep.charge) = diagnostics::energy_and_charge(rep.flux, rep.kappa);
    rep.iterations = m;
    rep.status = "converged";
    write_radial_artifacts(dir, prof);
    write_report(dir, rep);
    log << "radial-sweep: " << m << " samples written\n";
    return exit_ok;
}

void write_torus_field(const fs::path& dir, const TorusGrid& g,
                       const std::vector<double>& u) {
    std::vector<double> xs, ys, us;
    xs.reserve(g.count());
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            xs.push_back(g.x(i));
            ys.push_back(g.y(j));
            us.push_back(u[static_cast<std::size_t>(i) * g.ny + j]);
        }
    csv::write((dir / "field.csv").string(), "x,y,u", {&xs, &ys, &us});
}

int run_torus(const RunConfig& cfg, std::ostream& log) {
    const TorusGrid grid(cfg.Lx, cfg.Ly, cfg.nx, cfg.ny);
    torus::SolverOptions opts;
    opts.K = cfg.K_factor * cfg.coupling.lambda;
    opts.tol = cfg.tol;
    opts.max_iter = cfg.max_iter;
    opts.op = (cfg.torus_operator == "fd") ? TorusOperator::FiniteDifference
                                           : TorusOperator::Spectral;
    SolveReport rep = base_report(cfg, "torus");
    const auto outcome = torus::monotone_iterate(grid, cfg.vortex_set(),
                                                 cfg.coupling.lambda, opts);
    std::vector<double> u(grid.count());
    for (std::size_t m = 0; m < u.size(); ++m)
        u[m] = outcome.u0.values[m] + outcome.v.values[m];

    rep.flux = diagnostics::flux_grid(u, cfg.coupling.lambda, grid.hx() * grid.hy());
    std::tie(rep.energy, rep.charge) = diagnostics::energy_and_charge(rep.flux, rep.kappa);
    rep.iterations = outcome.iterations;
    rep.final_residual = outcome.final_residual;
    const bool ok = outcome.tag == torus::IterationTag::Converged;
    rep.status = ok ? "converged" : "diverged";

    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    write_torus_field(dir, grid, u);
    write_report(dir, rep);
    log << "torus: " << rep.status << " after " << outcome.iterations
        << " iterations, residual " << outcome.final_residual << ", flux " << rep.flux
        << "\n";
    return ok ? exit_ok : exit_no_solution;
}

int run_plane(const RunConfig& cfg, std::ostream& log) {
    plane::PlaneSolverOptions opts;
    opts.K = cfg.K_factor * cfg.coupling.lambda;
    opts.tol = cfg.tol;
    opts.max_iter = std::max(cfg.max_iter, 20000);
    SolveReport rep = base_report(cfg, "plane");
    const auto sched = plane::solve_topological_plane(
        cfg.vortex_set(), cfg.coupling.lambda, cfg.R_schedule, cfg.plane_n, opts);

    const auto& fin = sched.final_outcome;
    rep.flux = sched.stages.back().flux;
    std::tie(rep.energy, rep.charge) = diagnostics::energy_and_charge(rep.flux, rep.kappa);
    rep.iterations = fin.iterations;
    rep.final_residual = fin.final_residual;
    const bool ok = fin.tag == plane::PlaneTag::Converged;
    rep.status = ok ? "converged" : "diverged";
    for (const auto& st : sched.stages)
        rep.stages.push_back({st.R, st.iterations, st.flux, st.residual, st.gap_vs_prev});

    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    {
        std::vector<double> xs, ys, us;
        const auto u = fin.u();
        for (int i = 0; i < fin.dom.n; ++i)
            for (int j = 0; j < fin.dom.n; ++j) {
                xs.push_back(fin.dom.coord(i));
                ys.push_back(fin.dom.coord(j));
                us.push_back(u[static_cast<std::size_t>(i) * fin.dom.n + j]);
            }
        csv::write((dir / "field.csv").string(), "x,y,u", {&xs, &ys, &us});
    }
    write_report(dir, rep);
    log << "plane: " << rep.status << ", final flux " << rep.flux << " (2 pi N = "
        << 2.0 * std::numbers::pi * rep.N << "), cauchy gap " << sched.cauchy_gap << "\n";
    return ok ? exit_ok : exit_no_solution;
}

int run_lambda_critical(const RunConfig& cfg, std::ostream& log) {
    const TorusGrid grid(cfg.Lx, cfg.Ly, cfg.nx, cfg.ny);
    torus::LambdaCOptions opts;
    opts.solver.tol = cfg.tol;
    opts.solver.max_iter = cfg.max_iter;
    opts.solver.op = (cfg.torus_operator == "fd") ? TorusOperator::FiniteDifference
                                                  : TorusOperator::Spectral;
    // K tracks each probed lambda through its default 6*lambda unless the
    // config overrides the factor
    SolveReport rep = base_report(cfg, "torus");
    const auto est = torus::estimate_lambda_c(grid, cfg.vortex_set(), opts);
    rep.lambda_c = est.lambda_c;
    rep.lambda_c_bracket = est.bracket_width;
    if (est.lambda_c > 0.0) rep.kappa_c = torus::kappa_c_from_lambda_c(est.lambda_c);
    rep.status = "converged";
    rep.iterations = static_cast<int>(est.scan.size());

    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir / "plotdata");
    std::vector<double> ls, cs;
    for (const auto& [l, c] : est.scan) {
        ls.push_back(l);
        cs.push_back(c ? 1.0 : 0.0);
    }
    csv::write((dir / "plotdata" / "lambda_scan.csv").string(), "lambda,converged",
               {&ls, &cs});
    write_report(dir, rep);
    log << "lambda-critical: lambda_c = " << est.lambda_c << " +- "
        << est.bracket_width / 2.0 << " (bound "
        << torus::lambda_lower_bound(rep.N, grid.area()) << ")\n";
    return exit_ok;
}

} // namespace

int run(const RunConfig& cfg, std::ostream& log) {
    try {
        switch (cfg.mode) {
            case RunMode::RadialTopological: return run_radial_topological(cfg, log);
            case RunMode::RadialNontopological: return run_radial_nontopological(cfg, log);
            case RunMode::RadialSweep: return run_radial_sweep(cfg, log);
            case RunMode::Torus: return run_torus(cfg, log);
            case RunMode::Plane: return run_plane(cfg, log);
            case RunMode::LambdaCritical: return run_lambda_critical(cfg, log);
        }
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return exit_error;
    }
    return exit_error;
}

} // namespace csvortex
