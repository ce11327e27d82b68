#pragma once

#include "tmsq/gaussian/generator.hpp"
#include "tmsq/gaussian/state.hpp"

#include <boost/numeric/odeint.hpp>

#include <cstddef>
#include <sstream>
#include <utility>
#include <vector>

namespace tmsq::gaussian {

struct EvolveOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double physicality_tol = 1e-8;
};

struct TimedState {
    double t = 0.0;
    CovarianceState state;
};

/// Integrates d<R>/dt = A<R> and d sigma/dt = A sigma + sigma A^T + D with an
/// adaptive Dormand-Prince 5(4) pair, reporting n_samples equally spaced
/// times in [0, t_final] (both ends included).
inline std::vector<TimedState> evolve(const DriftDiffusion& gen, const CovarianceState& initial, double t_final,
                                      std::size_t n_samples, const EvolveOptions& opts = {}) {
    namespace odeint = boost::numeric::odeint;
    using Flat = std::vector<double>;

    if (!(t_final > 0.0)) throw ValidationError("evolve: t_final must be > 0");
    if (n_samples < 2) throw ValidationError("evolve: need at least two samples");
    const auto dim = gen.A.rows();
    if (initial.sigma.rows() != dim || initial.mean.size() != dim)
        throw DimensionError("evolve: initial state does not match the generator");

    Flat y(static_cast<std::size_t>(dim + dim * dim));
    Eigen::Map<RealVector>(y.data(), dim) = initial.mean;
    Eigen::Map<RealMatrix>(y.data() + dim, dim, dim) = initial.sigma;

    auto rhs = [&gen, dim](const Flat& x, Flat& dxdt, double) {
        Eigen::Map<const RealVector> mean(x.data(), dim);
        Eigen::Map<const RealMatrix> sigma(x.data() + dim, dim, dim);
        Eigen::Map<RealVector>(dxdt.data(), dim).noalias() = gen.A * mean;
        Eigen::Map<RealMatrix> dsigma(dxdt.data() + dim, dim, dim);
        dsigma.noalias() = gen.A * sigma;
        dsigma += dsigma.transpose().eval();
        dsigma += gen.D;
    };

    std::vector<double> times(n_samples);
    for (std::size_t k = 0; k < n_samples; ++k)
        times[k] = t_final * static_cast<double>(k) / static_cast<double>(n_samples - 1);

    std::vector<TimedState> out;
    out.reserve(n_samples);
    auto observer = [&](const Flat& x, double t) {
        TimedState sample{t, {Eigen::Map<const RealVector>(x.data(), dim),
                              Eigen::Map<const RealMatrix>(x.data() + dim, dim, dim)}};
        sample.state.sigma = 0.5 * (sample.state.sigma + sample.state.sigma.transpose());
        if (uncertainty_margin(sample.state) < -opts.physicality_tol) {
            std::ostringstream msg;
            msg << "evolve: covariance left the physical set at t = " << t;
            throw NumericalError(msg.str());
        }
        out.push_back(std::move(sample));
    };

    // Initial step from the fastest rate in the problem.
    const double rate_scale = std::max(gen.A.cwiseAbs().maxCoeff(), 1e-300);
    const double dt0 = std::min(t_final / static_cast<double>(n_samples), 1e-3 / rate_scale);
    try {
        auto stepper = odeint::make_controlled(opts.abs_tol, opts.rel_tol, odeint::runge_kutta_dopri5<Flat>());
        odeint::integrate_times(stepper, rhs, y, times.begin(), times.end(), dt0, observer,
                                odeint::max_step_checker(1000000));
    } catch (const odeint::step_adjustment_error& e) {
        throw ToleranceError(std::string("evolve: step size underflow: ") + e.what());
    } catch (const odeint::no_progress_error& e) {
        throw ToleranceError(std::string("evolve: integrator made no progress: ") + e.what());
    }
    return out;
}

}  // namespace tmsq::gaussian
