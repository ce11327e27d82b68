#pragma once

// Cutoff refinement for steady-state observables. Each round doubles the
// cutoffs of modes whose top retained level holds more than population_tol
// (only the most populated one if none does) and stops when the observable
// moves by less than convergence_tol. The returned cutoffs are the coarser
// set of the last pair.

#include "tmsq/fock/direct.hpp"
#include "tmsq/fock/integrate.hpp"
#include "tmsq/fock/liouvillian.hpp"
#include "tmsq/fock/moments.hpp"
#include "tmsq/gaussian/generator.hpp"
#include "tmsq/gaussian/steady.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace tmsq::fock {

using Observable = std::function<RealVector(const FockState&)>;

struct TruncationOptions {
    double population_tol = -1.0;  // negative: use the config's convergence_tol
    SteadyOptions steady;
};

struct TruncationStep {
    std::vector<int> cutoffs;
    RealVector value;
    std::vector<double> top_populations;
};

struct TruncationResult {
    std::vector<int> cutoffs;
    RealVector value;  // at the refined cutoffs
    bool converged = false;
    double change = 0.0;
    std::string message;
    std::vector<TruncationStep> history;
};

/// Steady state of `system` at the given cutoffs: direct solve when small,
/// otherwise relaxed from vacuum.
inline FockSteadyState fock_steady_state(const gaussian::GaussianSystem& system, const FockConfig& cfg, const SteadyOptions& opts = {}) {
    const double gap = gaussian::spectral_gap(gaussian::assemble_generator(system));
    if (!(gap > 0.0)) throw NotHurwitzError("fock steady state: relaxation rate must be positive", cplx(-gap));
    const auto l = Liouvillian::from_system(system, cfg);
    const auto layout = detect_layout(l);
    if (direct_unknowns(layout) <= opts.direct_limit) {
        FockState state = solve_steady(l, layout);
        const double residual = l.apply(state.rho).cwiseAbs().maxCoeff() / gap;
        if (residual > 1e-8) {
            std::ostringstream msg;
            msg << "fock steady state: direct solve residual " << residual;
            throw ToleranceError(msg.str());
        }
        detail::check_state(state, opts.integrate, 0.0);
        return {std::move(state), 0.0, residual};
    }
    return relax_to_steady(l, FockState::vacuum(cfg.dims()), gap, opts);
}

inline TruncationResult truncation_check(const gaussian::GaussianSystem& system, const FockConfig& cfg, const Observable& observable,
                                         const TruncationOptions& opts = {}) {
    cfg.validate();
    const double pop_tol = opts.population_tol >= 0.0 ? opts.population_tol : cfg.convergence_tol;

    auto evaluate = [&](const std::vector<int>& cutoffs) {
        FockConfig c = cfg;
        c.cutoffs = cutoffs;
        const auto steady = fock_steady_state(system, c, opts.steady);
        TruncationStep step{cutoffs, observable(steady.state), {}};
        for (std::size_t k = 0; k < cutoffs.size(); ++k) step.top_populations.push_back(top_population(steady.state, k));
        return step;
    };

    TruncationResult result;
    try {
        result.history.push_back(evaluate(cfg.cutoffs));
    } catch (const ToleranceError& e) {
        result.cutoffs = cfg.cutoffs;
        result.message = std::string("not converged: ") + e.what();
        return result;
    }
    for (;;) {
        const auto& last = result.history.back();
        std::vector<int> next = last.cutoffs;
        bool any = false;
        for (std::size_t k = 0; k < next.size(); ++k)
            if (last.top_populations[k] > pop_tol) {
                next[k] *= 2;
                any = true;
            }
        if (!any) {
            const auto& top = last.top_populations;
            next[static_cast<std::size_t>(std::max_element(top.begin(), top.end()) - top.begin())] *= 2;
        }

        FockConfig trial = cfg;
        trial.cutoffs = next;
        if (trial.dimension() > cfg.max_dimension) {
            std::ostringstream msg;
            msg << "not converged: refining to dimension " << trial.dimension() << " would exceed the guard " << cfg.max_dimension;
            result.cutoffs = last.cutoffs;
            result.value = last.value;
            result.message = msg.str();
            return result;
        }
        try {
            result.history.push_back(evaluate(next));
        } catch (const ToleranceError& e) {
            result.cutoffs = last.cutoffs;
            result.value = last.value;
            result.message = std::string("not converged: ") + e.what();
            return result;
        }
        const auto& coarse = result.history[result.history.size() - 2];
        const auto& fine = result.history.back();
        if (coarse.value.size() != fine.value.size()) throw DimensionError("truncation_check: observable size changed");
        result.change = (fine.value - coarse.value).cwiseAbs().maxCoeff();
        if (result.change < cfg.convergence_tol) {
            result.converged = true;
            result.cutoffs = coarse.cutoffs;
            result.value = fine.value;
            return result;
        }
    }
}

/// Observable: entries of the covariance matrix of the listed modes (column-major).
inline Observable covariance_observable(std::vector<std::size_t> modes) {
    return [modes = std::move(modes)](const FockState& s) {
        const auto m = gaussian::reduce(moments(s), modes);
        return RealVector(Eigen::Map<const RealVector>(m.sigma.data(), m.sigma.size()));
    };
}

}  // namespace tmsq::fock
