#pragma once

#include "tmsq/gaussian/generator.hpp"
#include "tmsq/gaussian/state.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <optional>
#include <sstream>

namespace tmsq::gaussian {

/// Slowest decay rate: min over eigenvalues of A of -Re(lambda).
/// Negative means unstable; the caller decides what that implies.
inline double spectral_gap(const DriftDiffusion& gen) {
    if (gen.A.size() == 0) return 0.0;
    Eigen::EigenSolver<RealMatrix> solver(gen.A, false);
    return -solver.eigenvalues().real().maxCoeff();
}

/// Solves A sigma + sigma A^T + D = 0 by vectorization,
/// (I kron A + A kron I) vec(sigma) = -vec(D). Throws NotHurwitzError when
/// some eigenvalue of A has real part >= -eps_stab (default 1e-9 ||A||_F).
inline CovarianceState steady_state(const DriftDiffusion& gen, std::optional<double> eps_stab = std::nullopt) {
    const auto dim = gen.A.rows();
    if (gen.A.cols() != dim || gen.D.rows() != dim || gen.D.cols() != dim || dim % 2 != 0)
        throw DimensionError("steady_state: A and D must be equally sized 2n x 2n matrices");

    const double a_norm = gen.A.norm();
    const double threshold = eps_stab.value_or(1e-9 * a_norm);
    Eigen::EigenSolver<RealMatrix> eig(gen.A, false);
    Eigen::Index worst = 0;
    eig.eigenvalues().real().maxCoeff(&worst);
    const cplx worst_value = eig.eigenvalues()(worst);
    if (dim > 0 && worst_value.real() >= -threshold) {
        std::ostringstream msg;
        msg << "steady_state: drift matrix is not Hurwitz (eigenvalue " << worst_value.real() << (worst_value.imag() < 0 ? " - " : " + ")
            << std::abs(worst_value.imag()) << "i has real part >= " << -threshold << ")";
        throw NotHurwitzError(msg.str(), worst_value);
    }

    const RealMatrix I = RealMatrix::Identity(dim, dim);
    RealMatrix op = RealMatrix::Zero(dim * dim, dim * dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        for (Eigen::Index i = 0; i < dim; ++i) {
            // (I kron A): block (j, j) = A;  (A kron I): block (j, k) = A(j, k) I
            op.block(j * dim, i * dim, dim, dim) = gen.A(j, i) * I;
        }
        op.block(j * dim, j * dim, dim, dim) += gen.A;
    }

    Eigen::PartialPivLU<RealMatrix> lu(op);
    RealVector rhs = -Eigen::Map<const RealVector>(gen.D.data(), dim * dim);
    RealVector x = lu.solve(rhs);
    RealVector residual = rhs - op * x;
    x += lu.solve(residual);  // one step of iterative refinement

    RealMatrix sigma = Eigen::Map<RealMatrix>(x.data(), dim, dim);
    sigma = 0.5 * (sigma + sigma.transpose());

    const double res = (gen.A * sigma + sigma * gen.A.transpose() + gen.D).norm();
    if (res > 1e-10 * std::max({a_norm, gen.D.norm(), 1e-300})) {
        std::ostringstream msg;
        msg << "steady_state: Lyapunov residual " << res << " exceeds tolerance";
        throw NumericalError(msg.str());
    }
    return {RealVector::Zero(dim), sigma};
}

inline double lyapunov_residual(const DriftDiffusion& gen, const CovarianceState& state) {
    return (gen.A * state.sigma + state.sigma * gen.A.transpose() + gen.D).norm();
}

}  // namespace tmsq::gaussian
