#pragma once

#include "tmsq/types.hpp"

#include <Eigen/Eigenvalues>

#include <cstddef>
#include <span>
#include <vector>

namespace tmsq::gaussian {

/// Mean quadrature vector and symmetric covariance, ordering (X1, P1, ..., Xn, Pn)
/// with X = a + a^dag, P = -i(a - a^dag). Vacuum has sigma = I.
struct CovarianceState {
    RealVector mean;
    RealMatrix sigma;

    static CovarianceState vacuum(std::size_t n_modes) {
        return {RealVector::Zero(2 * n_modes), RealMatrix::Identity(2 * n_modes, 2 * n_modes)};
    }

    std::size_t n_modes() const { return static_cast<std::size_t>(mean.size() / 2); }
};

/// Omega = blockdiag([[0, 1], [-1, 0]]), so [R_k, R_l] = 2i Omega_kl.
inline RealMatrix symplectic_form(std::size_t n_modes) {
    RealMatrix omega = RealMatrix::Zero(2 * n_modes, 2 * n_modes);
    for (std::size_t k = 0; k < n_modes; ++k) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    return omega;
}

/// Smallest eigenvalue of sigma + i Omega; >= 0 for a physical state.
inline double uncertainty_margin(const CovarianceState& state) {
    const auto n = state.n_modes();
    ComplexMatrix m = state.sigma.cast<cplx>();
    m += cplx(0.0, 1.0) * symplectic_form(n).cast<cplx>();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

inline bool is_physical(const CovarianceState& state, double tol = 1e-8) {
    const auto dim = state.sigma.rows();
    if (state.sigma.cols() != dim || state.mean.size() != dim || dim % 2 != 0) return false;
    if ((state.sigma - state.sigma.transpose()).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, state.sigma.cwiseAbs().maxCoeff()))
        return false;
    return uncertainty_margin(state) >= -tol;
}

/// Marginal state of the listed modes, in the listed order.
inline CovarianceState reduce(const CovarianceState& state, std::span<const std::size_t> modes) {
    const auto m = static_cast<Eigen::Index>(modes.size());
    CovarianceState out{RealVector(2 * m), RealMatrix(2 * m, 2 * m)};
    for (Eigen::Index a = 0; a < m; ++a) {
        const auto ia = static_cast<Eigen::Index>(2 * modes[a]);
        out.mean.segment<2>(2 * a) = state.mean.segment<2>(ia);
        for (Eigen::Index b = 0; b < m; ++b) {
            const auto ib = static_cast<Eigen::Index>(2 * modes[b]);
            out.sigma.block<2, 2>(2 * a, 2 * b) = state.sigma.block<2, 2>(ia, ib);
        }
    }
    return out;
}

inline CovarianceState reduce(const CovarianceState& state, std::initializer_list<std::size_t> modes) {
    std::vector<std::size_t> list(modes);
    return reduce(state, std::span<const std::size_t>(list));
}

/// <a_k^dag a_k> from the mode's quadrature moments.
inline double occupation(const CovarianceState& state, std::size_t mode) {
    const auto x = static_cast<Eigen::Index>(2 * mode);
    const double second = state.sigma(x, x) + state.sigma(x + 1, x + 1) + state.mean(x) * state.mean(x) +
                          state.mean(x + 1) * state.mean(x + 1);
    return (second - 2.0) / 4.0;
}

}  // namespace tmsq::gaussian
