#pragma once

// Scenario configuration (JSON, schema_version "1"). Rates are quoted as
// omega / 2 pi in kHz and times in microseconds; conversion to rad/s happens here.

#include "tmsq/models.hpp"
#include "tmsq/types.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace tmsq::cli {

using json = nlohmann::ordered_json;

inline constexpr const char* schema_version = "1";

enum class Task { steady, evolve, gap, sweep, verify, params };
enum class ModelKind { single_cavity_ideal, single_cavity_general, single_mode, cascaded, reduced };

inline Task parse_task(const std::string& s) {
    static const std::map<std::string, Task> table{{"steady", Task::steady}, {"evolve", Task::evolve}, {"gap", Task::gap},
                                                   {"sweep", Task::sweep},   {"verify", Task::verify}, {"params", Task::params}};
    const auto it = table.find(s);
    if (it == table.end()) throw ValidationError("task: unknown task '" + s + "' (expected steady, evolve, gap, sweep, verify or params)");
    return it->second;
}

inline std::string task_name(Task t) {
    switch (t) {
        case Task::steady: return "steady";
        case Task::evolve: return "evolve";
        case Task::gap: return "gap";
        case Task::sweep: return "sweep";
        case Task::verify: return "verify";
        case Task::params: return "params";
    }
    return "?";
}

inline ModelKind parse_model(const std::string& s) {
    static const std::map<std::string, ModelKind> table{{"single-cavity-ideal", ModelKind::single_cavity_ideal},
                                                        {"single-cavity-general", ModelKind::single_cavity_general},
                                                        {"single-mode", ModelKind::single_mode},
                                                        {"cascaded", ModelKind::cascaded},
                                                        {"reduced", ModelKind::reduced}};
    const auto it = table.find(s);
    if (it == table.end())
        throw ValidationError("model: unknown model '" + s +
                              "' (expected single-cavity-ideal, single-cavity-general, single-mode, cascaded or reduced)");
    return it->second;
}

inline std::string model_name(ModelKind m) {
    switch (m) {
        case ModelKind::single_cavity_ideal: return "single-cavity-ideal";
        case ModelKind::single_cavity_general: return "single-cavity-general";
        case ModelKind::single_mode: return "single-mode";
        case ModelKind::cascaded: return "cascaded";
        case ModelKind::reduced: return "reduced";
    }
    return "?";
}

/// Parameter keys per model. Rates (kHz/2pi) are marked; complex rates may be
/// given as a number or as [re, im].
struct ParamSpec {
    std::string key;
    bool rate;
    bool complex;
    bool required;
};

inline const std::vector<ParamSpec>& param_specs(ModelKind m) {
    static const std::vector<ParamSpec> ideal{{"beta", true, false, true},
                                              {"r", false, false, true},
                                              {"theta", false, false, false},
                                              {"kappa_a", true, false, true},
                                              {"kappa_b", true, false, true}};
    static const std::vector<ParamSpec> general{{"beta_r1", true, true, true},       {"beta_s1", true, true, true},
                                                {"beta_r2", true, true, true},       {"beta_s2", true, true, true},
                                                {"N1", false, false, true},          {"N2", false, false, true},
                                                {"delta_a_eff", true, false, false}, {"delta_b_eff", true, false, false},
                                                {"kappa_a", true, false, true},      {"kappa_b", true, false, true}};
    static const std::vector<ParamSpec> single{
        {"beta", true, false, true}, {"r", false, false, true}, {"theta", false, false, false}, {"kappa", true, false, true}};
    static const std::vector<ParamSpec> cascade{{"beta", true, false, true},
                                                {"r", false, false, true},
                                                {"theta", false, false, false},
                                                {"kappa", true, false, true},
                                                {"eta", false, false, false}};
    switch (m) {
        case ModelKind::single_cavity_ideal: return ideal;
        case ModelKind::single_cavity_general: return general;
        case ModelKind::single_mode:
        case ModelKind::reduced: return single;
        case ModelKind::cascaded: return cascade;
    }
    return ideal;
}

/// Parameters as given in the file (kHz/2pi for rates), by key.
using ParamValues = std::map<std::string, cplx>;

struct SweepSpec {
    std::string axis;
    double start = 0.0;
    double stop = 0.0;
    int steps = 0;

    std::vector<double> grid() const {
        std::vector<double> out;
        for (int k = 0; k < steps; ++k)
            out.push_back(steps == 1 ? start : start + (stop - start) * static_cast<double>(k) / static_cast<double>(steps - 1));
        return out;
    }
};

struct PhysicalSpec {
    double g_khz = 0.0;
    double Omega_khz = 0.0;
    double Delta_khz = 0.0;
    double N = 1.0;
    double gamma_khz = 0.0;
};

struct Options {
    std::optional<std::pair<std::string, std::string>> pair;  // mode labels for the EPR combinations
    double t_final_us = 0.0;
    int samples = 101;
    std::optional<SweepSpec> sweep;
    std::vector<int> oracle_cutoffs;
    double convergence_tol = 1e-3;
    std::size_t oracle_max_dimension = 20000;
    std::optional<PhysicalSpec> physical;
};

struct ScenarioConfig {
    ModelKind model = ModelKind::single_cavity_ideal;
    std::optional<Task> task;
    ParamValues params;
    Options options;
};

namespace detail {

inline void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) throw ValidationError(where + ": unknown key '" + it.key() + "'");
}

inline double number(const json& v, const std::string& where) {
    if (!v.is_number()) throw ValidationError(where + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ValidationError(where + ": must be finite");
    return x;
}

inline cplx complex_number(const json& v, const std::string& where) {
    if (v.is_number()) return number(v, where);
    if (v.is_array() && v.size() == 2) return {number(v[0], where + "[0]"), number(v[1], where + "[1]")};
    throw ValidationError(where + ": expected a number or [re, im]");
}

inline int integer(const json& v, const std::string& where) {
    if (!v.is_number_integer()) throw ValidationError(where + ": expected an integer");
    return v.get<int>();
}

}  // namespace detail

inline ScenarioConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ValidationError("config: top level must be a JSON object");
    detail::reject_unknown(doc, {"schema_version", "model", "task", "parameters", "options", "description"}, "config");
    if (!doc.contains("schema_version")) throw ValidationError("schema_version: missing (current version is \"1\")");
    if (!doc["schema_version"].is_string() || doc["schema_version"].get<std::string>() != schema_version)
        throw ValidationError("schema_version: unsupported value (current version is \"1\")");
    if (doc.contains("description") && !doc["description"].is_string()) throw ValidationError("description: expected a string");

    ScenarioConfig cfg;
    if (!doc.contains("model") || !doc["model"].is_string()) throw ValidationError("model: missing or not a string");
    cfg.model = parse_model(doc["model"].get<std::string>());
    if (doc.contains("task")) {
        if (!doc["task"].is_string()) throw ValidationError("task: expected a string");
        cfg.task = parse_task(doc["task"].get<std::string>());
    }

    const auto& specs = param_specs(cfg.model);
    const json params = doc.value("parameters", json::object());
    if (!params.is_object()) throw ValidationError("parameters: expected an object");
    std::set<std::string> keys;
    for (const auto& s : specs) keys.insert(s.key);
    detail::reject_unknown(params, keys, "parameters (model " + model_name(cfg.model) + ")");
    for (const auto& s : specs) {
        const std::string where = "parameters." + s.key;
        if (!params.contains(s.key)) {
            if (s.required) throw ValidationError(where + ": required for model " + model_name(cfg.model));
            continue;
        }
        cfg.params[s.key] = s.complex ? detail::complex_number(params[s.key], where) : cplx(detail::number(params[s.key], where));
    }

    const json opts = doc.value("options", json::object());
    if (!opts.is_object()) throw ValidationError("options: expected an object");
    detail::reject_unknown(opts, {"pair", "t_final_us", "samples", "sweep", "oracle_cutoffs", "convergence_tol", "oracle_max_dimension", "physical"},
                           "options");
    auto& o = cfg.options;
    if (opts.contains("pair")) {
        const auto& p = opts["pair"];
        if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
            throw ValidationError("options.pair: expected two mode labels");
        o.pair = std::make_pair(p[0].get<std::string>(), p[1].get<std::string>());
    }
    if (opts.contains("t_final_us")) {
        o.t_final_us = detail::number(opts["t_final_us"], "options.t_final_us");
        if (!(o.t_final_us > 0.0)) throw ValidationError("options.t_final_us: must be > 0");
    }
    if (opts.contains("samples")) {
        o.samples = detail::integer(opts["samples"], "options.samples");
        if (o.samples < 2) throw ValidationError("options.samples: must be >= 2");
    }
    if (opts.contains("sweep")) {
        const auto& s = opts["sweep"];
        if (!s.is_object()) throw ValidationError("options.sweep: expected an object");
        detail::reject_unknown(s, {"axis", "start", "stop", "steps"}, "options.sweep");
        SweepSpec sw;
        if (!s.contains("axis") || !s["axis"].is_string()) throw ValidationError("options.sweep.axis: missing or not a string");
        sw.axis = s["axis"].get<std::string>();
        if (!keys.count(sw.axis)) throw ValidationError("options.sweep.axis: '" + sw.axis + "' is not a parameter of model " + model_name(cfg.model));
        for (const auto& s2 : specs)
            if (s2.key == sw.axis && s2.complex) throw ValidationError("options.sweep.axis: complex parameters cannot be swept");
        for (const char* k : {"start", "stop", "steps"})
            if (!s.contains(k)) throw ValidationError(std::string("options.sweep.") + k + ": missing");
        sw.start = detail::number(s["start"], "options.sweep.start");
        sw.stop = detail::number(s["stop"], "options.sweep.stop");
        sw.steps = detail::integer(s["steps"], "options.sweep.steps");
        if (sw.steps < 1) throw ValidationError("options.sweep.steps: must be >= 1");
        o.sweep = sw;
    }
    if (opts.contains("oracle_cutoffs")) {
        const auto& c = opts["oracle_cutoffs"];
        if (!c.is_array()) throw ValidationError("options.oracle_cutoffs: expected an array of integers");
        for (std::size_t k = 0; k < c.size(); ++k) o.oracle_cutoffs.push_back(detail::integer(c[k], "options.oracle_cutoffs"));
    }
    if (opts.contains("convergence_tol")) {
        o.convergence_tol = detail::number(opts["convergence_tol"], "options.convergence_tol");
        if (!(o.convergence_tol > 0.0)) throw ValidationError("options.convergence_tol: must be > 0");
    }
    if (opts.contains("oracle_max_dimension")) {
        const int m = detail::integer(opts["oracle_max_dimension"], "options.oracle_max_dimension");
        if (m < 1 || m > 20000) throw ValidationError("options.oracle_max_dimension: must lie in [1, 20000]");
        o.oracle_max_dimension = static_cast<std::size_t>(m);
    }
    if (opts.contains("physical")) {
        const auto& p = opts["physical"];
        if (!p.is_object()) throw ValidationError("options.physical: expected an object");
        detail::reject_unknown(p, {"g", "Omega", "Delta", "N", "gamma"}, "options.physical");
        PhysicalSpec ph;
        for (const char* k : {"g", "Omega", "Delta", "N"})
            if (!p.contains(k)) throw ValidationError(std::string("options.physical.") + k + ": missing");
        ph.g_khz = detail::number(p["g"], "options.physical.g");
        ph.Omega_khz = detail::number(p["Omega"], "options.physical.Omega");
        ph.Delta_khz = detail::number(p["Delta"], "options.physical.Delta");
        ph.N = detail::number(p["N"], "options.physical.N");
        if (p.contains("gamma")) ph.gamma_khz = detail::number(p["gamma"], "options.physical.gamma");
        o.physical = ph;
    }
    return cfg;
}

inline ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config: invalid JSON: ") + e.what());
    }
    return parse_config(doc);
}

/// Model parameters converted to the builders' units (rad/s).
inline double real_param(const ParamValues& p, const std::string& key, double fallback = 0.0) {
    const auto it = p.find(key);
    return it == p.end() ? fallback : it->second.real();
}

inline cplx complex_param(const ParamValues& p, const std::string& key) {
    const auto it = p.find(key);
    return it == p.end() ? cplx{} : it->second;
}

inline gaussian::GaussianSystem build_system(ModelKind m, const ParamValues& p) {
    auto rate = [&](const std::string& k) { return khz(real_param(p, k)); };
    switch (m) {
        case ModelKind::single_cavity_ideal:
            return models::build_single_cavity_ideal({rate("beta"), real_param(p, "r"), real_param(p, "theta"), rate("kappa_a"), rate("kappa_b")});
        case ModelKind::single_cavity_general: {
            models::GeneralRamanParams g;
            g.beta_r1 = khz(1.0) * complex_param(p, "beta_r1");
            g.beta_s1 = khz(1.0) * complex_param(p, "beta_s1");
            g.beta_r2 = khz(1.0) * complex_param(p, "beta_r2");
            g.beta_s2 = khz(1.0) * complex_param(p, "beta_s2");
            g.N1 = real_param(p, "N1");
            g.N2 = real_param(p, "N2");
            g.delta_a_eff = rate("delta_a_eff");
            g.delta_b_eff = rate("delta_b_eff");
            g.kappa_a = rate("kappa_a");
            g.kappa_b = rate("kappa_b");
            return models::build_single_cavity_general(g);
        }
        case ModelKind::single_mode: return models::build_single_mode(rate("beta"), real_param(p, "r"), real_param(p, "theta"), rate("kappa"));
        case ModelKind::cascaded:
            return models::build_cascaded({rate("beta"), real_param(p, "r"), real_param(p, "theta"), rate("kappa"), real_param(p, "eta", 1.0)});
        case ModelKind::reduced:
            return models::build_reduced_adiabatic(rate("beta"), real_param(p, "r"), real_param(p, "theta"), rate("kappa"));
    }
    throw ValidationError("model: unsupported");
}

}  // namespace tmsq::cli
