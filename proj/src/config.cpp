#include "csvortex/config.hpp"

#include "csvortex/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <set>

namespace csvortex {

using nlohmann::json;

std::string mode_name(RunMode m) {
    switch (m) {
        case RunMode::RadialTopological: return "radial-topological";
        case RunMode::RadialNontopological: return "radial-nontopological";
        case RunMode::RadialSweep: return "radial-sweep";
        case RunMode::Torus: return "torus";
        case RunMode::Plane: return "plane";
        case RunMode::LambdaCritical: return "lambda-critical";
    }
    return "?";
}

RunMode mode_from_name(const std::string& s) {
    if (s == "radial-topological") return RunMode::RadialTopological;
    if (s == "radial-nontopological") return RunMode::RadialNontopological;
    if (s == "radial-sweep") return RunMode::RadialSweep;
    if (s == "torus") return RunMode::Torus;
    if (s == "plane") return RunMode::Plane;
    if (s == "lambda-critical") return RunMode::LambdaCritical;
    throw SchemaError("mode", "unknown mode '" + s + "'");
}

namespace {

const json* get(const json& j, const std::string& key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

double need_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw SchemaError(path, "expected a number");
    return j.get<double>();
}

int need_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
    return j.get<int>();
}

} // namespace

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError("$", std::string("not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw SchemaError("$", "top level must be an object");

    RunConfig cfg;

    const json* jm = get(j, "mode");
    if (!jm || !jm->is_string()) throw SchemaError("mode", "required string");
    cfg.mode = mode_from_name(jm->get<std::string>());

    const json* jc = get(j, "coupling");
    if (!jc || !jc->is_object()) throw SchemaError("coupling", "required object");
    const json* jk = get(*jc, "kappa");
    const json* jl = get(*jc, "lambda");
    if ((jk != nullptr) == (jl != nullptr))
        throw SchemaError("coupling", "exactly one of kappa/lambda must be present");
    if (jk) {
        const double kappa = need_number(*jk, "coupling.kappa");
        if (!(kappa > 0.0)) throw ConstraintError("coupling.kappa", "must be positive");
        cfg.coupling = Coupling::from_kappa(kappa);
        cfg.coupling_given_as_kappa = true;
    } else {
        const double lambda = need_number(*jl, "coupling.lambda");
        if (!(lambda > 0.0)) throw ConstraintError("coupling.lambda", "must be positive");
        cfg.coupling = Coupling::from_lambda(lambda);
        cfg.coupling_given_as_kappa = false;
    }

    const json* jv = get(j, "vortices");
    if (!jv || !jv->is_array()) throw SchemaError("vortices", "required array");
    for (std::size_t k = 0; k < jv->size(); ++k) {
        const json& e = (*jv)[k];
        const std::string path = "vortices[" + std::to_string(k) + "]";
        if (!e.is_object()) throw SchemaError(path, "expected an object {x, y, n}");
        Vortex v;
        const json* jx = get(e, "x");
        const json* jy = get(e, "y");
        const json* jn = get(e, "n");
        if (!jx || !jy || !jn) throw SchemaError(path, "needs fields x, y, n");
        v.x = need_number(*jx, path + ".x");
        v.y = need_number(*jy, path + ".y");
        v.multiplicity = need_int(*jn, path + ".n");
        if (v.multiplicity < 1) throw ConstraintError(path + ".n", "must be >= 1");
        cfg.vortices.push_back(v);
    }
    try {
        (void)cfg.vortex_set();
    } catch (const std::invalid_argument& e) {
        throw ConstraintError("vortices", e.what());
    }

    const bool is_radial = cfg.mode == RunMode::RadialTopological ||
                           cfg.mode == RunMode::RadialNontopological ||
                           cfg.mode == RunMode::RadialSweep;
    const bool is_torus = cfg.mode == RunMode::Torus || cfg.mode == RunMode::LambdaCritical;

    const json* jd = get(j, "domain");
    if (is_torus) {
        if (!jd || !jd->is_object()) throw SchemaError("domain", "required object for torus modes");
        const json* f;
        if (!(f = get(*jd, "Lx"))) throw SchemaError("domain.Lx", "required");
        cfg.Lx = need_number(*f, "domain.Lx");
        if (!(f = get(*jd, "Ly"))) throw SchemaError("domain.Ly", "required");
        cfg.Ly = need_number(*f, "domain.Ly");
        if (!(f = get(*jd, "nx"))) throw SchemaError("domain.nx", "required");
        cfg.nx = need_int(*f, "domain.nx");
        if (!(f = get(*jd, "ny"))) throw SchemaError("domain.ny", "required");
        cfg.ny = need_int(*f, "domain.ny");
        if ((f = get(*jd, "operator"))) {
            if (!f->is_string()) throw SchemaError("domain.operator", "expected a string");
            cfg.torus_operator = f->get<std::string>();
            if (cfg.torus_operator != "spectral" && cfg.torus_operator != "fd")
                throw SchemaError("domain.operator", "must be 'spectral' or 'fd'");
        }
        if (!(cfg.Lx > 0.0) || !(cfg.Ly > 0.0))
            throw ConstraintError("domain", "periods must be positive");
        if (cfg.nx < 16 || cfg.ny < 16 || cfg.nx % 2 || cfg.ny % 2)
            throw ConstraintError("domain", "nx, ny must be even and >= 16");
        for (std::size_t k = 0; k < cfg.vortices.size(); ++k)
            if (!(cfg.vortices[k].x >= 0.0 && cfg.vortices[k].x < cfg.Lx &&
                  cfg.vortices[k].y >= 0.0 && cfg.vortices[k].y < cfg.Ly))
                throw ConstraintError("vortices[" + std::to_string(k) + "]",
                                      "must lie in [0,Lx) x [0,Ly)");
    } else if (cfg.mode == RunMode::Plane) {
        if (!jd || !jd->is_object()) throw SchemaError("domain", "required object for plane mode");
        const json* f = get(*jd, "R_schedule");
        if (!f || !f->is_array() || f->empty())
            throw SchemaError("domain.R_schedule", "required non-empty array");
        for (std::size_t k = 0; k < f->size(); ++k)
            cfg.R_schedule.push_back(
                need_number((*f)[k], "domain.R_schedule[" + std::to_string(k) + "]"));
        for (std::size_t k = 1; k < cfg.R_schedule.size(); ++k)
            if (!(cfg.R_schedule[k] > cfg.R_schedule[k - 1]))
                throw ConstraintError("domain.R_schedule", "must be strictly increasing");
        if (!(f = get(*jd, "n"))) throw SchemaError("domain.n", "required");
        cfg.plane_n = need_int(*f, "domain.n");
        if (cfg.plane_n < 8) throw ConstraintError("domain.n", "must be >= 8");
        for (std::size_t k = 0; k < cfg.vortices.size(); ++k)
            if (!(std::fabs(cfg.vortices[k].x) < cfg.R_schedule.front() &&
                  std::fabs(cfg.vortices[k].y) < cfg.R_schedule.front()))
                throw ConstraintError("vortices[" + std::to_string(k) + "]",
                                      "must lie strictly inside the smallest domain");
    } else if (is_radial) {
        if (jd && jd->is_object()) {
            if (const json* f = get(*jd, "t_start")) cfg.t_start = need_number(*f, "domain.t_start");
            if (const json* f = get(*jd, "t_max")) cfg.t_max = need_number(*f, "domain.t_max");
        }
        if (!(cfg.t_start < 0.0 && cfg.t_max > 0.0))
            throw ConstraintError("domain", "need t_start < 0 < t_max");
        if (cfg.vortices.size() > 1)
            throw ConstraintError("vortices", "radial modes take at most one vortex entry");
    }

    if (const json* js = get(j, "solver")) {
        if (!js->is_object()) throw SchemaError("solver", "expected an object");
        if (const json* f = get(*js, "K_factor")) {
            cfg.K_factor = need_number(*f, "solver.K_factor");
            if (cfg.K_factor < 6.0) throw ConstraintError("solver.K_factor", "must be >= 6");
        }
        if (const json* f = get(*js, "tol")) {
            cfg.tol = need_number(*f, "solver.tol");
            if (!(cfg.tol > 0.0)) throw ConstraintError("solver.tol", "must be positive");
        }
        if (const json* f = get(*js, "max_iter")) {
            cfg.max_iter = need_int(*f, "solver.max_iter");
            if (cfg.max_iter < 1) throw ConstraintError("solver.max_iter", "must be >= 1");
        }
    }

    const json* jt = get(j, "targets");
    if (cfg.mode == RunMode::RadialNontopological) {
        if (!jt || !jt->is_object()) throw SchemaError("targets", "required for radial-nontopological");
        const json* f = get(*jt, "beta");
        if (!f) throw SchemaError("targets.beta", "required");
        cfg.beta_target = need_number(*f, "targets.beta");
        const int N = cfg.total_winding();
        if (!(*cfg.beta_target > 2.0 * N + 4.0))
            throw ConstraintError("targets.beta",
                                  "must exceed 2N + 4 = " + std::to_string(2 * N + 4));
    } else if (cfg.mode == RunMode::RadialSweep) {
        if (!jt || !jt->is_object()) throw SchemaError("targets", "required for radial-sweep");
        const json* fa = get(*jt, "a_min");
        const json* fb = get(*jt, "a_max");
        if (!fa || !fb) throw SchemaError("targets", "needs a_min and a_max");
        cfg.a_min = need_number(*fa, "targets.a_min");
        cfg.a_max = need_number(*fb, "targets.a_max");
        if (!(*cfg.a_min < *cfg.a_max))
            throw ConstraintError("targets", "need a_min < a_max");
        if (const json* f = get(*jt, "samples")) {
            cfg.sweep_samples = need_int(*f, "targets.samples");
            if (cfg.sweep_samples < 2) throw ConstraintError("targets.samples", "must be >= 2");
        }
        if (const json* f = get(*jt, "relative_to_a0")) {
            if (!f->is_boolean()) throw SchemaError("targets.relative_to_a0", "expected a bool");
            cfg.sweep_relative_to_a0 = f->get<bool>();
        }
    }

    if (const json* f = get(j, "output")) {
        if (!f->is_string()) throw SchemaError("output", "expected a string path");
        cfg.output_dir = f->get<std::string>();
    }

    static const std::set<std::string> known = {"mode",   "coupling", "vortices", "domain",
                                                "solver", "targets",  "output"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key())) throw SchemaError(it.key(), "unknown field");

    return cfg;
}

std::string RunConfig::normalize() const {
    json j;
    j["mode"] = mode_name(mode);
    if (coupling_given_as_kappa)
        j["coupling"] = {{"kappa", coupling.kappa}};
    else
        j["coupling"] = {{"lambda", coupling.lambda}};
    j["vortices"] = json::array();
    for (const auto& v : vortices)
        j["vortices"].push_back({{"x", v.x}, {"y", v.y}, {"n", v.multiplicity}});
    json d;
    switch (mode) {
        case RunMode::Torus:
        case RunMode::LambdaCritical:
            d = {{"Lx", Lx}, {"Ly", Ly}, {"nx", nx}, {"ny", ny}, {"operator", torus_operator}};
            break;
        case RunMode::Plane:
            d = {{"R_schedule", R_schedule}, {"n", plane_n}};
            break;
        default:
            d = {{"t_start", t_start}, {"t_max", t_max}};
    }
    j["domain"] = d;
    j["solver"] = {{"K_factor", K_factor}, {"tol", tol}, {"max_iter", max_iter}};
    if (beta_target) j["targets"] = {{"beta", *beta_target}};
    if (a_min)
        j["targets"] = {{"a_min", *a_min},
                        {"a_max", *a_max},
                        {"samples", sweep_samples},
                        {"relative_to_a0", sweep_relative_to_a0}};
    j["output"] = output_dir;
    return j.dump(2);
}

} // namespace csvortex
