#pragma once

// Moment map of a GaussianSystem. The master equation is linear in the
// ladder operators, so first and second moments close exactly:
//   d<R>/dt = A <R>,   d sigma/dt = A sigma + sigma A^T + D.
//
// Everything is derived in the complex ladder basis alpha = (a_1..a_n, a_1^dag..a_n^dag)
// with [alpha_j, alpha_k] = J_jk, J = [[0, I], [-I, 0]], and mapped to
// quadratures once, in ladder_to_quadrature().

#include "tmsq/gaussian/system.hpp"

#include <cmath>
#include <vector>

namespace tmsq::gaussian {

struct DriftDiffusion {
    RealMatrix A;  // drift, 1/s
    RealMatrix D;  // diffusion, 1/s

    std::size_t n_modes() const { return static_cast<std::size_t>(A.rows() / 2); }
};

struct LoweredCascade {
    std::vector<LinearJump> jumps;
    QuadraticHamiltonian hamiltonian_delta;
};

/// Standard-Lindblad form of the cascade block
///   kappa D[a_s] + kappa D[a_t] - 2 kappa sqrt(eta) ([a_t^dag, a_s rho] + [rho a_s^dag, a_t]):
/// collective jump a_t + sqrt(eta) a_s at rate kappa, residual a_s at rate
/// kappa (1 - eta), and H_c = i kappa sqrt(eta) (a_s^dag a_t - a_t^dag a_s).
/// Zero-rate jumps are omitted.
inline LoweredCascade lower_cascade(const CascadeLink& link, std::size_t n_modes) {
    link.validate(n_modes);
    const double root_eta = std::sqrt(link.eta);
    LoweredCascade out{{}, QuadraticHamiltonian::zero(n_modes)};

    if (link.kappa > 0.0) {
        LinearJump collective = LinearJump::annihilation(n_modes, link.target, link.kappa);
        collective.u(link.source) += root_eta;
        out.jumps.push_back(std::move(collective));
        if (link.eta < 1.0)
            out.jumps.push_back(LinearJump::annihilation(n_modes, link.source, link.kappa * (1.0 - link.eta)));
    }

    const cplx coupling(0.0, link.kappa * root_eta);
    out.hamiltonian_delta.F(link.source, link.target) += coupling;
    out.hamiltonian_delta.F(link.target, link.source) += std::conj(coupling);
    return out;
}

/// Jumps and Hamiltonian with every cascade link lowered to standard form.
struct FlatSystem {
    QuadraticHamiltonian hamiltonian;
    std::vector<LinearJump> jumps;
};

inline FlatSystem flatten(const GaussianSystem& system) {
    system.validate();
    FlatSystem flat{system.hamiltonian(), system.jumps()};
    for (const auto& link : system.cascades()) {
        auto lowered = lower_cascade(link, system.n_modes());
        flat.hamiltonian += lowered.hamiltonian_delta;
        for (auto& jump : lowered.jumps) flat.jumps.push_back(std::move(jump));
    }
    return flat;
}

/// R = T alpha with X_k = a_k + a_k^dag and P_k = -i (a_k - a_k^dag).
inline ComplexMatrix ladder_to_quadrature(std::size_t n_modes) {
    const auto n = static_cast<Eigen::Index>(n_modes);
    ComplexMatrix T = ComplexMatrix::Zero(2 * n, 2 * n);
    const cplx i1(0.0, 1.0);
    for (Eigen::Index k = 0; k < n; ++k) {
        T(2 * k, k) = 1.0;
        T(2 * k, n + k) = 1.0;
        T(2 * k + 1, k) = -i1;
        T(2 * k + 1, n + k) = i1;
    }
    return T;
}

/// T^{-1}: a_k = (X_k + i P_k) / 2.
inline ComplexMatrix quadrature_to_ladder(std::size_t n_modes) {
    const auto n = static_cast<Eigen::Index>(n_modes);
    ComplexMatrix Tinv = ComplexMatrix::Zero(2 * n, 2 * n);
    const cplx i1(0.0, 1.0);
    for (Eigen::Index k = 0; k < n; ++k) {
        Tinv(k, 2 * k) = 0.5;
        Tinv(k, 2 * k + 1) = 0.5 * i1;
        Tinv(n + k, 2 * k) = 0.5;
        Tinv(n + k, 2 * k + 1) = -0.5 * i1;
    }
    return Tinv;
}

inline RealMatrix ladder_commutator(std::size_t n_modes) {
    const auto n = static_cast<Eigen::Index>(n_modes);
    RealMatrix J = RealMatrix::Zero(2 * n, 2 * n);
    J.topRightCorner(n, n).setIdentity();
    J.bottomLeftCorner(n, n) = -RealMatrix::Identity(n, n);
    return J;
}

/// Drift G and diffusion N in the ladder basis: d<alpha>/dt = G <alpha>,
/// dC/dt = G C + C G^T + N with C_jk = 1/2 <{d alpha_j, d alpha_k}>.
struct LadderGenerator {
    ComplexMatrix G;
    ComplexMatrix N;
};

inline LadderGenerator ladder_generator(const GaussianSystem& system) {
    const auto flat = flatten(system);
    const auto n = static_cast<Eigen::Index>(system.n_modes());
    const ComplexMatrix J = ladder_commutator(system.n_modes()).cast<cplx>();
    const auto& h = flat.hamiltonian;

    // H = 1/2 alpha^T K alpha + const, K symmetric.
    ComplexMatrix K(2 * n, 2 * n);
    K.topLeftCorner(n, n) = h.M.conjugate();
    K.topRightCorner(n, n) = h.F.transpose();
    K.bottomLeftCorner(n, n) = h.F;
    K.bottomRightCorner(n, n) = h.M;

    LadderGenerator gen{cplx(0.0, -1.0) * J * K, ComplexMatrix::Zero(2 * n, 2 * n)};

    for (const auto& jump : flat.jumps) {
        if (jump.rate == 0.0) continue;
        ComplexVector l(2 * n), l_dag(2 * n);
        l << jump.u, jump.v;                            // L     = l . alpha
        l_dag << jump.v.conjugate(), jump.u.conjugate();  // L^dag = l_dag . alpha
        const ComplexVector c = J * l;       // [alpha_m, L]
        const ComplexVector d = -J * l_dag;  // [L^dag, alpha_m]
        gen.G += jump.rate * (c * l_dag.transpose() + d * l.transpose());
        gen.N += jump.rate * (d * c.transpose() + c * d.transpose());
    }
    return gen;
}

inline DriftDiffusion assemble_generator(const GaussianSystem& system) {
    const auto ladder = ladder_generator(system);
    const auto n = system.n_modes();
    const ComplexMatrix T = ladder_to_quadrature(n);
    const ComplexMatrix A = T * ladder.G * quadrature_to_ladder(n);
    const ComplexMatrix D = T * ladder.N * T.transpose();

    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff() + D.cwiseAbs().maxCoeff());
    if (A.imag().cwiseAbs().maxCoeff() > 1e-9 * scale || D.imag().cwiseAbs().maxCoeff() > 1e-9 * scale)
        throw NumericalError("assemble_generator: quadrature generator is not real");

    DriftDiffusion out{A.real(), D.real()};
    out.D = 0.5 * (out.D + out.D.transpose());
    return out;
}

}  // namespace tmsq::gaussian
