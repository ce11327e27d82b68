#pragma once

// Gaussian moments of a truncated density matrix, mapped through the same
// ladder -> quadrature change of basis used by the covariance propagator.

#include "tmsq/fock/space.hpp"
#include "tmsq/fock/state.hpp"
#include "tmsq/gaussian/generator.hpp"
#include "tmsq/gaussian/state.hpp"

#include <vector>

namespace tmsq::fock {

/// First and second moments of the listed annihilation operators (any
/// operators with a bosonic normalization, such as J^- / sqrt(N) for a spin).
inline gaussian::CovarianceState moments(const FockState& state, const std::vector<SparseMatrix>& annihilators) {
    const auto n = static_cast<Eigen::Index>(annihilators.size());
    if (n == 0) throw ValidationError("moments: no operators given");
    std::vector<SparseMatrix> ops;
    for (const auto& a : annihilators) {
        if (a.rows() != state.rho.rows() || a.cols() != state.rho.cols()) throw DimensionError("moments: operator size mismatch");
        ops.push_back(a);
    }
    for (const auto& a : annihilators) ops.push_back(a.adjoint());

    // alpha_k rho is reused for every pair.
    std::vector<ComplexMatrix> applied;
    ComplexVector mean(2 * n);
    for (const auto& op : ops) {
        applied.push_back(op * state.rho);
        mean(static_cast<Eigen::Index>(applied.size() - 1)) = applied.back().trace();
    }
    ComplexMatrix c(2 * n, 2 * n);
    for (Eigen::Index k = 0; k < 2 * n; ++k)
        for (Eigen::Index l = 0; l < 2 * n; ++l) {
            // tr(alpha_k alpha_l rho)
            const cplx kl = (ops[static_cast<std::size_t>(k)] * applied[static_cast<std::size_t>(l)]).trace();
            const cplx lk = (ops[static_cast<std::size_t>(l)] * applied[static_cast<std::size_t>(k)]).trace();
            c(k, l) = 0.5 * (kl + lk) - mean(k) * mean(l);
        }

    const ComplexMatrix T = gaussian::ladder_to_quadrature(static_cast<std::size_t>(n));
    const ComplexVector r = T * mean;
    const ComplexMatrix sigma = T * c * T.transpose();
    gaussian::CovarianceState out{r.real(), sigma.real()};
    out.sigma = 0.5 * (out.sigma + out.sigma.transpose()).eval();
    return out;
}

/// Moments of every bosonic factor of the state's space.
inline gaussian::CovarianceState moments(const FockState& state) {
    const ProductSpace space(state.dims);
    std::vector<SparseMatrix> ops;
    for (std::size_t k = 0; k < space.n_factors(); ++k) ops.push_back(space.annihilator(k));
    return moments(state, ops);
}

/// Mean number in factor `mode`.
inline double mean_number(const FockState& state, std::size_t mode) {
    const ProductSpace space(state.dims);
    const SparseMatrix a = space.annihilator(mode);
    const SparseMatrix number = SparseMatrix(a.adjoint()) * a;
    return (number * state.rho).trace().real();
}

/// Population of the top retained level of factor `mode`.
inline double top_population(const FockState& state, std::size_t mode) {
    const ProductSpace space(state.dims);
    const auto top = space.dims().at(mode) - 1;
    double p = 0.0;
    for (std::size_t s = 0; s < space.dimension(); ++s)
        if (space.local_index(s, mode) == top) p += state.rho(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)).real();
    return p;
}

}  // namespace tmsq::fock
