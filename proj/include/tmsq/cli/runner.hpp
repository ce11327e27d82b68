#pragma once

// Task dispatch for the scenario runner.

#include "tmsq/analytics.hpp"
#include "tmsq/cli/config.hpp"
#include "tmsq/cli/report.hpp"
#include "tmsq/fock.hpp"
#include "tmsq/gaussian.hpp"
#include "tmsq/models.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace tmsq::cli {

enum ExitCode : int { exit_ok = 0, exit_validation = 2, exit_numerical = 3, exit_verification = 4 };

struct RunResult {
    Report report;
    int exit_code = exit_ok;
};

/// A built model with the modes the metrics refer to.
struct ModelView {
    gaussian::GaussianSystem system;
    std::size_t pair_i = 0;
    std::size_t pair_j = 0;
    std::vector<std::size_t> cavities;
};

inline ModelView make_view(ModelKind kind, const ParamValues& params, const Options& opts) {
    ModelView v{build_system(kind, params), 0, 0, {}};
    std::pair<std::string, std::string> pair{"c1", "c2"};
    std::vector<std::string> cavities;
    switch (kind) {
        case ModelKind::single_cavity_ideal:
        case ModelKind::single_cavity_general: cavities = {"a", "b"}; break;
        case ModelKind::single_mode:
            pair = {"a", "c1"};
            cavities = {"a"};
            break;
        case ModelKind::cascaded: cavities = {"a1", "b1", "a2", "b2"}; break;
        case ModelKind::reduced: break;
    }
    if (opts.pair) pair = *opts.pair;
    try {
        v.pair_i = v.system.mode(pair.first).index;
        v.pair_j = v.system.mode(pair.second).index;
    } catch (const ValidationError&) {
        throw ValidationError("options.pair: unknown mode label ('" + pair.first + "', '" + pair.second + "') for model " + model_name(kind));
    }
    if (v.pair_i == v.pair_j) throw ValidationError("options.pair: the two modes must differ");
    for (const auto& c : cavities) v.cavities.push_back(v.system.mode(c).index);
    return v;
}

struct Metrics {
    gaussian::EprVariances epr;
    double purity = 1.0;
    double log_negativity = 0.0;
    std::vector<double> n_cav;
    double n_cav_total = 0.0;
};

inline Metrics compute_metrics(const ModelView& v, const gaussian::CovarianceState& s) {
    Metrics m;
    m.epr = gaussian::epr_variances(s, v.pair_i, v.pair_j);
    m.purity = gaussian::purity(s);
    const auto pair = gaussian::reduce(s, {v.pair_i, v.pair_j});
    m.log_negativity = gaussian::log_negativity(pair, {0});
    for (auto c : v.cavities) {
        m.n_cav.push_back(gaussian::occupation(s, c));
        m.n_cav_total += m.n_cav.back();
    }
    return m;
}

inline std::vector<std::string> metric_columns() { return {"V_Xsum", "V_Xdiff", "V_Psum", "V_Pdiff", "purity", "n_cav_total"}; }

inline std::vector<Cell> metric_cells(const Metrics& m) {
    return {m.epr.x_sum, m.epr.x_diff, m.epr.p_sum, m.epr.p_diff, m.purity, m.n_cav_total};
}

inline gaussian::CovarianceState gaussian_steady(const gaussian::GaussianSystem& sys) {
    return gaussian::steady_state(gaussian::assemble_generator(sys));
}

namespace tasks {

inline Report steady(const ScenarioConfig& cfg) {
    const auto v = make_view(cfg.model, cfg.params, cfg.options);
    const auto s = gaussian_steady(v.system);
    const auto m = compute_metrics(v, s);
    Report r{"steady", model_name(cfg.model), {"metric", "value"}, {}, {}};
    const auto& labels = v.system.labels();
    r.notes.push_back("pair: (" + labels[v.pair_i] + ", " + labels[v.pair_j] + "); variances relative to vacuum V = 2 for two-mode combinations");
    r.add_row({"V_Xsum", m.epr.x_sum});
    r.add_row({"V_Xdiff", m.epr.x_diff});
    r.add_row({"V_Psum", m.epr.p_sum});
    r.add_row({"V_Pdiff", m.epr.p_diff});
    r.add_row({"V_best", m.epr.best()});
    r.add_row({"dB_best", analytics::to_db(m.epr.best())});
    r.add_row({"purity", m.purity});
    r.add_row({"log_negativity", m.log_negativity});
    for (std::size_t k = 0; k < labels.size(); ++k) {
        r.add_row({"V_X_" + labels[k], s.sigma(2 * static_cast<Eigen::Index>(k), 2 * static_cast<Eigen::Index>(k))});
        r.add_row({"V_P_" + labels[k], s.sigma(2 * static_cast<Eigen::Index>(k) + 1, 2 * static_cast<Eigen::Index>(k) + 1)});
    }
    for (std::size_t k = 0; k < v.cavities.size(); ++k) r.add_row({"n_" + labels[v.cavities[k]], m.n_cav[k]});
    r.add_row({"n_cav_total", m.n_cav_total});
    return r;
}

inline Report evolve(const ScenarioConfig& cfg) {
    if (!(cfg.options.t_final_us > 0.0)) throw ValidationError("options.t_final_us: required (> 0) for task evolve");
    const auto v = make_view(cfg.model, cfg.params, cfg.options);
    const auto gen = gaussian::assemble_generator(v.system);
    const auto traj = gaussian::evolve(gen, gaussian::CovarianceState::vacuum(v.system.n_modes()), cfg.options.t_final_us * 1e-6,
                                       static_cast<std::size_t>(cfg.options.samples));
    Report r{"evolve", model_name(cfg.model), {"t_us"}, {}, {}};
    for (const auto& c : metric_columns()) r.columns.push_back(c);
    for (const auto& p : traj) {
        std::vector<Cell> row{p.t * 1e6};
        for (auto& c : metric_cells(compute_metrics(v, p.state))) row.push_back(c);
        r.add_row(std::move(row));
    }
    return r;
}

inline Report gap(const ScenarioConfig& cfg) {
    const auto v = make_view(cfg.model, cfg.params, cfg.options);
    const double g = gaussian::spectral_gap(gaussian::assemble_generator(v.system));
    Report r{"gap", model_name(cfg.model), {"metric", "value"}, {}, {}};
    r.add_row({"gap_kHz", to_khz(g)});
    r.add_row({"tau_us", g > 0.0 ? 1e6 / g : std::nan("")});
    const auto& p = cfg.params;
    const double beta = khz(real_param(p, "beta")), rr = real_param(p, "r");
    if (cfg.model == ModelKind::single_cavity_ideal && real_param(p, "kappa_a") == real_param(p, "kappa_b")) {
        const auto lp = analytics::lambda_plus(khz(real_param(p, "kappa_a")), beta, rr);
        r.add_row({"lambda_plus_kHz", to_khz(lp.value)});
        r.add_row({"underdamped", lp.underdamped ? "yes" : "no"});
        r.add_row({"rel_delta", std::abs(g + lp.value) / std::abs(lp.value)});
    }
    if (cfg.model == ModelKind::cascaded || cfg.model == ModelKind::reduced) {
        const double gamma = analytics::gamma_rate(beta, rr, khz(real_param(p, "kappa")));
        r.add_row({"Gamma_kHz", to_khz(gamma)});
        r.add_row({"rel_delta", std::abs(g - gamma) / gamma});
    }
    return r;
}

inline std::size_t resolve_jobs(int jobs, std::size_t work) {
    std::size_t n = jobs > 0 ? static_cast<std::size_t>(jobs) : std::max(1u, std::thread::hardware_concurrency());
    return std::max<std::size_t>(1, std::min(n, work));
}

inline Report sweep(const ScenarioConfig& cfg, int jobs) {
    if (!cfg.options.sweep) throw ValidationError("options.sweep: required for task sweep");
    const auto& sw = *cfg.options.sweep;
    const auto grid = sw.grid();
    // Validate every grid point up front so errors name the first bad value.
    std::vector<ModelView> views;
    for (double x : grid) {
        ParamValues p = cfg.params;
        p[sw.axis] = x;
        try {
            views.push_back(make_view(cfg.model, p, cfg.options));
        } catch (const ValidationError& e) {
            throw ValidationError("options.sweep: " + sw.axis + " = " + format_number(x) + ": " + e.what());
        }
    }

    std::vector<std::vector<Cell>> rows(grid.size());
    std::vector<std::exception_ptr> errors(grid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < grid.size(); k = next++) {
            try {
                std::vector<Cell> row{grid[k]};
                for (auto& c : metric_cells(compute_metrics(views[k], gaussian_steady(views[k].system)))) row.push_back(c);
                rows[k] = std::move(row);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    const auto n_threads = resolve_jobs(jobs, grid.size());
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (std::size_t k = 0; k < grid.size(); ++k)
        if (errors[k]) {
            try {
                std::rethrow_exception(errors[k]);
            } catch (const NumericalError& e) {
                throw NumericalError("sweep point " + sw.axis + " = " + format_number(grid[k]) + ": " + e.what());
            }
        }

    Report r{"sweep", model_name(cfg.model), {sw.axis}, {}, {}};
    for (const auto& c : metric_columns()) r.columns.push_back(c);
    for (auto& row : rows) r.add_row(std::move(row));
    return r;
}

struct Check {
    std::string name;
    double value;
    double reference;
    double tolerance;
};

inline Report verify(const ScenarioConfig& cfg, int& exit_code) {
    const auto v = make_view(cfg.model, cfg.params, cfg.options);
    const auto gen = gaussian::assemble_generator(v.system);
    const auto s = gaussian::steady_state(gen);
    const auto m = compute_metrics(v, s);
    const auto& p = cfg.params;
    const double rr = real_param(p, "r"), theta = real_param(p, "theta"), beta = khz(real_param(p, "beta"));
    std::vector<Check> checks;

    const double scale = std::max(gen.A.norm(), gen.D.norm());
    checks.push_back({"lyapunov_residual", gaussian::lyapunov_residual(gen, s) / scale, 0.0, 1e-10});
    checks.push_back({"uncertainty_margin", std::min(0.0, gaussian::uncertainty_margin(s)), 0.0, 1e-8});

    const bool phase_zero = theta == 0.0;
    switch (cfg.model) {
        case ModelKind::single_cavity_ideal:
            if (phase_zero) {
                const auto ideal = analytics::v_epr_ideal(rr);
                checks.push_back({"V_Xsum_vs_ideal", m.epr.x_sum, ideal.squeezed, 1e-9 * ideal.squeezed});
                checks.push_back({"V_Xdiff_vs_ideal", m.epr.x_diff, ideal.antisqueezed, 1e-9 * ideal.antisqueezed});
            }
            if (real_param(p, "kappa_a") == real_param(p, "kappa_b")) {
                const auto lp = analytics::lambda_plus(khz(real_param(p, "kappa_a")), beta, rr);
                const double g = gaussian::spectral_gap(gen);
                checks.push_back({"gap_vs_lambda_plus_kHz", to_khz(g), to_khz(-lp.value), 1e-9 * to_khz(-lp.value)});
            }
            break;
        case ModelKind::cascaded:
            if (phase_zero) {
                const double kappa = khz(real_param(p, "kappa"));
                const double bt = beta * std::sqrt(1.0 - rr * rr);
                const double ref = analytics::v_epr_cascaded(rr, real_param(p, "eta", 1.0));
                checks.push_back({"V_Xdiff_vs_cascaded_formula", m.epr.x_diff, ref, 4.0 * (bt / kappa) * (bt / kappa) + 1e-4});
            }
            break;
        case ModelKind::reduced:
            if (phase_zero) {
                const double ref = analytics::v_epr_cascaded(rr, 1.0);
                checks.push_back({"V_Xdiff_vs_formula", m.epr.x_diff, ref, 1e-9 * std::max(ref, 1e-3)});
            }
            {
                const double gamma = analytics::gamma_rate(beta, rr, khz(real_param(p, "kappa")));
                checks.push_back({"gap_vs_Gamma_kHz", to_khz(gaussian::spectral_gap(gen)), to_khz(gamma), 1e-9 * to_khz(gamma)});
            }
            break;
        case ModelKind::single_mode:
            if (phase_zero) {
                const auto c1 = static_cast<Eigen::Index>(v.system.mode("c1").index);
                checks.push_back({"V_X_c1_vs_formula", s.sigma(2 * c1, 2 * c1), (1.0 - rr) / (1.0 + rr), 1e-9});
            }
            break;
        case ModelKind::single_cavity_general: {
            const auto report = [&] {
                models::GeneralRamanParams g;
                g.beta_r1 = complex_param(p, "beta_r1");
                g.beta_s1 = complex_param(p, "beta_s1");
                g.beta_r2 = complex_param(p, "beta_r2");
                g.beta_s2 = complex_param(p, "beta_s2");
                g.N1 = real_param(p, "N1");
                g.N2 = real_param(p, "N2");
                g.delta_a_eff = real_param(p, "delta_a_eff");
                g.delta_b_eff = real_param(p, "delta_b_eff");
                g.kappa_a = real_param(p, "kappa_a");
                g.kappa_b = real_param(p, "kappa_b");
                return models::check_matching_conditions(g);
            }();
            if (report.dark(1e-9)) checks.push_back({"n_cav_total_dark", m.n_cav_total, 0.0, 1e-10});
            break;
        }
    }

    if (!cfg.options.oracle_cutoffs.empty()) {
        fock::FockConfig fc{cfg.options.oracle_cutoffs, cfg.options.convergence_tol, cfg.options.oracle_max_dimension};
        if (fc.cutoffs.size() != v.system.n_modes())
            throw ValidationError("options.oracle_cutoffs: expected one cutoff per mode (" + std::to_string(v.system.n_modes()) + ")");
        std::vector<std::size_t> all(v.system.n_modes());
        for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
        const auto res = fock::truncation_check(v.system, fc, fock::covariance_observable(all));
        if (!res.converged) throw ToleranceError("oracle truncation check: " + res.message);
        const Eigen::Map<const RealMatrix> oracle(res.value.data(), s.sigma.rows(), s.sigma.cols());
        checks.push_back({"oracle_max_abs_dsigma", (oracle - s.sigma).cwiseAbs().maxCoeff(), 0.0,
                          std::max(2.0 * cfg.options.convergence_tol, 1e-2)});
    }

    Report r{"verify", model_name(cfg.model), {"check", "value", "reference", "delta", "tolerance", "status"}, {}, {}};
    bool all_pass = true;
    for (const auto& c : checks) {
        const double delta = std::abs(c.value - c.reference);
        const bool pass = delta <= c.tolerance;
        all_pass = all_pass && pass;
        r.add_row({c.name, c.value, c.reference, delta, c.tolerance, pass ? "PASS" : "FAIL"});
    }
    exit_code = all_pass ? exit_ok : exit_verification;
    return r;
}

inline Report params(const ScenarioConfig& cfg) {
    Report r{"params", model_name(cfg.model), {"quantity", "value"}, {}, {}};
    if (cfg.options.physical) {
        const auto& ph = *cfg.options.physical;
        models::PhysicalParams pp;
        pp.g = ph.g_khz;
        pp.Omega = ph.Omega_khz;
        pp.Delta = ph.Delta_khz;
        pp.N = ph.N;
        pp.gamma = ph.gamma_khz;
        const auto e = models::estimate_physical(pp);
        r.add_row({"beta_single_kHz", e.beta_single});
        r.add_row({"beta_collective_kHz", e.beta_collective});
        r.add_row({"spont_rate_kHz", e.spont_rate});
        r.add_row({"stark_shift_kHz", e.stark_shift});
        r.add_row({"far_detuned", e.far_detuned ? "yes" : "no"});
    }
    const auto& p = cfg.params;
    if (cfg.model == ModelKind::single_cavity_general) {
        models::GeneralRamanParams g;
        g.beta_r1 = complex_param(p, "beta_r1");
        g.beta_s1 = complex_param(p, "beta_s1");
        g.beta_r2 = complex_param(p, "beta_r2");
        g.beta_s2 = complex_param(p, "beta_s2");
        g.N1 = real_param(p, "N1");
        g.N2 = real_param(p, "N2");
        g.delta_a_eff = real_param(p, "delta_a_eff");
        g.delta_b_eff = real_param(p, "delta_b_eff");
        g.kappa_a = real_param(p, "kappa_a");
        g.kappa_b = real_param(p, "kappa_b");
        const auto mr = models::check_matching_conditions(g);
        r.add_row({"cond_i_residual_a_kHz", mr.cond_i_residual_a});
        r.add_row({"cond_i_residual_b_kHz", mr.cond_i_residual_b});
        r.add_row({"cond_ii_ratio_re", mr.cond_ii_ratio.real()});
        r.add_row({"cond_ii_ratio_im", mr.cond_ii_ratio.imag()});
        r.add_row({"cond_iii_ratio_re", mr.cond_iii_ratio.real()});
        r.add_row({"cond_iii_ratio_im", mr.cond_iii_ratio.imag()});
        r.add_row({"r_effective", mr.r_effective});
        r.add_row({"matched", mr.matched(1e-9) ? "yes" : "no"});
        r.add_row({"dark", mr.dark(1e-9) ? "yes" : "no"});
    } else if (p.count("beta") && p.count("r")) {
        const double beta = real_param(p, "beta"), rr = real_param(p, "r");
        r.add_row({"beta_tilde_kHz", beta * std::sqrt(1.0 - rr * rr)});
        r.add_row({"s", std::atanh(rr)});
        const double kappa = p.count("kappa") ? real_param(p, "kappa") : real_param(p, "kappa_a");
        if (kappa > 0.0) r.add_row({"Gamma_kHz", analytics::gamma_rate(beta, rr, kappa)});
    }
    if (r.rows.empty()) throw ValidationError("options.physical: required for task params with model " + model_name(cfg.model));
    return r;
}

}  // namespace tasks

/// Runs `task` on `cfg`. Library errors propagate; map them with exit_code_for.
inline RunResult run(Task task, const ScenarioConfig& cfg, int jobs = 0) {
    if (cfg.task && *cfg.task != task)
        throw ValidationError("task: config declares task '" + task_name(*cfg.task) + "' but '" + task_name(task) + "' was requested");
    RunResult out;
    switch (task) {
        case Task::steady: out.report = tasks::steady(cfg); break;
        case Task::evolve: out.report = tasks::evolve(cfg); break;
        case Task::gap: out.report = tasks::gap(cfg); break;
        case Task::sweep: out.report = tasks::sweep(cfg, jobs); break;
        case Task::verify: out.report = tasks::verify(cfg, out.exit_code); break;
        case Task::params: out.report = tasks::params(cfg); break;
    }
    return out;
}

/// Exit code for an exception escaping run().
inline int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ValidationError*>(&e)) return exit_validation;
    if (dynamic_cast<const NumericalError*>(&e)) return exit_numerical;
    return exit_numerical;
}

}  // namespace tmsq::cli
