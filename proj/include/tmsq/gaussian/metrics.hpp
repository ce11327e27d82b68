#pragma once

// Entanglement and purity measures of Gaussian states, and the two-mode
// squeezer S12(eps) = exp(eps^* c_i c_j - eps c_i^dag c_j^dag) as a symplectic map.

#include "tmsq/gaussian/generator.hpp"
#include "tmsq/gaussian/state.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace tmsq::gaussian {

struct EprVariances {
    double x_sum = 0.0;   // V(X_i + X_j)
    double x_diff = 0.0;  // V(X_i - X_j)
    double p_sum = 0.0;   // V(P_i + P_j)
    double p_diff = 0.0;  // V(P_i - P_j)

    /// Smallest of the four combinations.
    double best() const { return std::min({x_sum, x_diff, p_sum, p_diff}); }
};

inline EprVariances epr_variances(const CovarianceState& state, std::size_t i, std::size_t j) {
    if (i == j) throw ValidationError("epr_variances: modes must differ");
    if (i >= state.n_modes() || j >= state.n_modes()) throw DimensionError("epr_variances: mode out of range");
    const auto& s = state.sigma;
    const auto xi = static_cast<Eigen::Index>(2 * i), xj = static_cast<Eigen::Index>(2 * j);
    const auto pi = xi + 1, pj = xj + 1;
    return {
        s(xi, xi) + s(xj, xj) + 2.0 * s(xi, xj),
        s(xi, xi) + s(xj, xj) - 2.0 * s(xi, xj),
        s(pi, pi) + s(pj, pj) + 2.0 * s(pi, pj),
        s(pi, pi) + s(pj, pj) - 2.0 * s(pi, pj),
    };
}

/// 1 / sqrt(det sigma); 1 iff the Gaussian state is pure.
inline double purity(const CovarianceState& state) {
    return 1.0 / std::sqrt(state.sigma.determinant());
}

/// Symplectic eigenvalues (ascending), normalized so the vacuum has all ones.
inline std::vector<double> symplectic_eigenvalues(const RealMatrix& sigma) {
    const auto n = static_cast<std::size_t>(sigma.rows() / 2);
    const ComplexMatrix m = cplx(0.0, 1.0) * (symplectic_form(n) * sigma).cast<cplx>();
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, false);
    std::vector<double> mags;
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) mags.push_back(std::abs(solver.eigenvalues()(k)));
    std::sort(mags.begin(), mags.end());
    std::vector<double> out;
    for (std::size_t k = 0; k < mags.size(); k += 2) out.push_back(0.5 * (mags[k] + mags[k + 1]));
    return out;
}

/// Logarithmic negativity across (partition | rest). Partial transposition
/// flips the sign of the P quadratures of the partition's modes.
inline double log_negativity(const CovarianceState& state, std::span<const std::size_t> partition) {
    const auto n = state.n_modes();
    if (partition.empty() || partition.size() >= n)
        throw ValidationError("log_negativity: partition must be nonempty and proper");
    RealVector flip = RealVector::Ones(2 * n);
    for (auto k : partition) {
        if (k >= n) throw DimensionError("log_negativity: mode out of range");
        flip(2 * k + 1) = -1.0;
    }
    const RealMatrix pt = flip.asDiagonal() * state.sigma * flip.asDiagonal();
    double total = 0.0;
    for (double nu : symplectic_eigenvalues(pt))
        if (nu < 1.0) total -= std::log(nu);
    return total;
}

inline double log_negativity(const CovarianceState& state, std::initializer_list<std::size_t> partition) {
    std::vector<std::size_t> list(partition);
    return log_negativity(state, std::span<const std::size_t>(list));
}

/// Symplectic matrix of S12(eps), eps = s e^{i theta}, acting on modes i, j of
/// an n-mode system: moments transform as sigma -> S sigma S^T, mean -> S mean.
/// Built as exp of the quadrature drift of H = i (eps^* c_i c_j - eps c_i^dag c_j^dag),
/// whose unit-time propagator is S12(eps).
inline RealMatrix two_mode_squeezer(std::size_t n_modes, double s, double theta, std::size_t i, std::size_t j) {
    if (i == j) throw ValidationError("two_mode_squeezer: modes must differ");
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < n_modes; ++k) labels.push_back("m" + std::to_string(k));
    GaussianSystem generator(std::move(labels));
    const cplx eps = std::polar(s, theta);
    generator.add_pair(i, j, cplx(0.0, -1.0) * eps);
    const RealMatrix A = assemble_generator(generator).A;
    return A.exp();
}

inline CovarianceState squeeze_transform(const CovarianceState& state, double s, double theta, std::size_t i, std::size_t j) {
    const auto n = state.n_modes();
    if (i >= n || j >= n) throw DimensionError("squeeze_transform: mode out of range");
    const RealMatrix S = two_mode_squeezer(n, s, theta, i, j);
    CovarianceState out{S * state.mean, S * state.sigma * S.transpose()};
    out.sigma = 0.5 * (out.sigma + out.sigma.transpose());
    return out;
}

}  // namespace tmsq::gaussian
