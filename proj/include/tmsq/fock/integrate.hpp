#pragma once

// Fixed-step RK4 on the density matrix. The step is set by the stability
// region of RK4 (|z| <~ 2.8 on the imaginary axis) against a norm bound of the
// generator, so integrations are always stable; accuracy of steady states does
// not depend on the step since RK4 fixed points satisfy L rho = 0 exactly.
// Transients are only as good as the step; cap it with max_dt when that matters.
// States without coherence between charge sectors are propagated block by block.

#include "tmsq/fock/blocks.hpp"
#include "tmsq/fock/liouvillian.hpp"
#include "tmsq/fock/state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace tmsq::fock {

struct IntegrateOptions {
    double stability = 2.5;         // dt = stability / ||L|| bound
    double max_dt = 0.0;            // optional extra cap on the step (0: none)
    std::size_t max_steps = 50'000'000;
    double trace_tol = 1e-8;
    double herm_tol = 1e-10;
    bool check_positivity = false;  // full eigendecomposition at every sample
    double pos_tol = 1e-8;
};

struct TimedFockState {
    double t = 0.0;
    FockState state;
};

namespace detail {

inline void axpy(BlockDensity& y, double a, const BlockDensity& x) {
    for (std::size_t s = 0; s < y.size(); ++s) y[s] += a * x[s];
}

inline BlockDensity combine(const BlockDensity& y, double a, const BlockDensity& x) {
    BlockDensity out = y;
    axpy(out, a, x);
    return out;
}

inline void rk4_step(const SectorGenerator& g, BlockDensity& rho, double dt) {
    BlockDensity k1, k2, k3, k4;
    g.apply(rho, k1);
    g.apply(combine(rho, 0.5 * dt, k1), k2);
    g.apply(combine(rho, 0.5 * dt, k2), k3);
    g.apply(combine(rho, dt, k3), k4);
    for (std::size_t s = 0; s < rho.size(); ++s) {
        rho[s] += (dt / 6.0) * (k1[s] + 2.0 * k2[s] + 2.0 * k3[s] + k4[s]);
        // Hermiticity is exact in exact arithmetic; strip the rounding drift.
        rho[s] = 0.5 * (rho[s] + rho[s].adjoint()).eval();
    }
}

/// Sector generator for `rho`: the finest layout if rho has no inter-sector
/// coherence, otherwise the single full block.
inline SectorGenerator generator_for(const Liouvillian& l, const ComplexMatrix& rho) {
    SectorGenerator fine(l, detect_layout(l));
    if (fine.layout().n_sectors() > 1 && fine.off_block(rho) <= 1e-14 * std::max(1.0, rho.cwiseAbs().maxCoeff())) return fine;
    return SectorGenerator(l, SectorLayout::trivial(ProductSpace(l.dims())));
}

inline double max_abs(const BlockDensity& b) {
    double m = 0.0;
    for (const auto& x : b)
        if (x.size() > 0) m = std::max(m, x.cwiseAbs().maxCoeff());
    return m;
}

inline double base_step(const Liouvillian& l, const IntegrateOptions& opts) {
    if (!(opts.stability > 0.0)) throw ValidationError("IntegrateOptions: stability factor must be positive");
    const double bound = l.norm_bound();
    double dt = bound > 0.0 ? opts.stability / bound : opts.max_dt;
    if (opts.max_dt > 0.0) dt = std::min(dt, opts.max_dt);
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ToleranceError("fock integrate: step size underflow");
    return dt;
}

inline void check_state(const FockState& s, const IntegrateOptions& opts, double t) {
    std::ostringstream msg;
    if (std::abs(s.trace() - 1.0) > opts.trace_tol) msg << "trace drifted to " << s.trace() << "; ";
    if (s.hermiticity_error() > opts.herm_tol) msg << "Hermiticity lost (" << s.hermiticity_error() << "); ";
    if (opts.check_positivity) {
        const double lo = s.min_eigenvalue();
        if (lo < -opts.pos_tol) msg << "negative eigenvalue " << lo << "; ";
    }
    if (!msg.str().empty()) {
        std::ostringstream full;
        full << "fock integrate at t=" << t << ": " << msg.str();
        throw NumericalError(full.str());
    }
}

}  // namespace detail

/// Samples at n_samples equally spaced times on [0, t_final], both ends included.
inline std::vector<TimedFockState> integrate(const Liouvillian& l, const FockState& initial, double t_final,
                                             std::size_t n_samples, const IntegrateOptions& opts = {}) {
    if (initial.dims != l.dims()) throw DimensionError("fock integrate: state and generator dimensions differ");
    if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw ValidationError("fock integrate: t_final must be finite and >= 0");
    if (n_samples < 2) throw ValidationError("fock integrate: need at least two samples");
    detail::check_state(initial, opts, 0.0);

    const double dt_max = detail::base_step(l, opts);
    const double interval = t_final / static_cast<double>(n_samples - 1);
    const auto per_interval = static_cast<std::size_t>(std::ceil(interval / dt_max));
    if (per_interval * (n_samples - 1) > opts.max_steps) throw ToleranceError("fock integrate: too many steps required");

    const auto gen = detail::generator_for(l, initial.rho);
    std::vector<TimedFockState> out;
    out.reserve(n_samples);
    out.push_back({0.0, initial});
    BlockDensity rho = gen.to_blocks(initial.rho);
    for (std::size_t k = 1; k < n_samples; ++k) {
        if (per_interval > 0) {
            const double dt = interval / static_cast<double>(per_interval);
            for (std::size_t s = 0; s < per_interval; ++s) detail::rk4_step(gen, rho, dt);
        }
        const double t = interval * static_cast<double>(k);
        FockState state{gen.to_full(rho), l.dims()};
        detail::check_state(state, opts, t);
        out.push_back({t, std::move(state)});
    }
    return out;
}

struct SteadyOptions {
    IntegrateOptions integrate;
    double residual_tol = 1e-10;  // max |L rho| / gap
    double max_horizon = 60.0;    // in units of 1/gap
    std::size_t direct_limit = 5000;   // sector-diagonal unknowns solved directly; larger spaces relax in time
};

struct FockSteadyState {
    FockState state;
    double time = 0.0;
    double residual = 0.0;
};

/// Relaxes from `initial` in chunks of 1/gap until max|L rho| / gap falls under the tolerance.
inline FockSteadyState relax_to_steady(const Liouvillian& l, const FockState& initial, double gap, const SteadyOptions& opts = {}) {
    if (!(gap > 0.0)) throw NotHurwitzError("fock steady state: relaxation rate must be positive", cplx(-gap));
    if (initial.dims != l.dims()) throw DimensionError("fock steady state: state and generator dimensions differ");
    const double dt_max = detail::base_step(l, opts.integrate);
    const double chunk = 1.0 / gap;
    const auto per_chunk = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(chunk / dt_max)));
    const double dt = chunk / static_cast<double>(per_chunk);
    const auto max_chunks = static_cast<std::size_t>(std::ceil(opts.max_horizon));
    if (per_chunk * max_chunks > opts.integrate.max_steps) throw ToleranceError("fock steady state: too many steps required");

    const auto gen = detail::generator_for(l, initial.rho);
    BlockDensity rho = gen.to_blocks(initial.rho);
    BlockDensity derivative;
    auto measure = [&] {
        gen.apply(rho, derivative);
        return detail::max_abs(derivative) / gap;
    };
    double residual = measure();
    std::size_t chunks = 0;
    while (residual > opts.residual_tol && chunks < max_chunks) {
        for (std::size_t s = 0; s < per_chunk; ++s) detail::rk4_step(gen, rho, dt);
        ++chunks;
        residual = measure();
        const cplx tr = SectorGenerator::trace(rho);
        if (std::abs(tr - 1.0) > opts.integrate.trace_tol) {
            std::ostringstream msg;
            msg << "fock steady state: trace drifted to " << tr;
            throw NumericalError(msg.str());
        }
    }
    if (residual > opts.residual_tol) {
        std::ostringstream msg;
        msg << "fock steady state: residual " << residual << " after " << opts.max_horizon << "/gap";
        throw ToleranceError(msg.str());
    }
    FockState state{gen.to_full(rho), l.dims()};
    detail::check_state(state, opts.integrate, static_cast<double>(chunks) * chunk);
    return {std::move(state), static_cast<double>(chunks) * chunk, residual};
}

}  // namespace tmsq::fock
