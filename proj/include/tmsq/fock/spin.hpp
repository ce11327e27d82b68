#pragma once

// Collective-spin models on the maximal-J Dicke ladder. Ladder index k is the
// number of atoms in |1>: J_z = k - N/2, J^-|k> = sqrt(k (N - k + 1)) |k - 1>.
// Pure c-number terms of the Hamiltonian are dropped; every J_z-dependent
// dispersive and Stark term is kept.

#include "tmsq/fock/liouvillian.hpp"
#include "tmsq/fock/space.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace tmsq::fock {

struct SpinEnsembleConfig {
    std::vector<int> atom_numbers;  // N_i, ladder dimension N_i + 1
    std::vector<int> cutoffs;       // cavity photon cutoffs
    std::size_t max_dimension = default_dimension_guard;

    std::size_t dimension() const {
        std::size_t d = 1;
        for (int n : atom_numbers) d *= static_cast<std::size_t>(n + 1);
        for (int c : cutoffs) d *= static_cast<std::size_t>(c + 1);
        return d;
    }

    void validate() const {
        for (int n : atom_numbers)
            if (n < 1) throw ValidationError("SpinEnsembleConfig: atom numbers must be >= 1");
        for (int c : cutoffs)
            if (c < 2) throw ValidationError("SpinEnsembleConfig: every cutoff must be >= 2");
        if (dimension() > max_dimension) {
            std::ostringstream msg;
            msg << "SpinEnsembleConfig: dimension " << dimension() << " exceeds the guard " << max_dimension;
            throw DimensionError(msg.str());
        }
    }
};

/// Single ensemble in a single cavity mode (a and b the same mode):
///   H = [delta + chi_r (N/2 - J_z) + chi_s (N/2 + J_z)] a^dag a + omega_z J_z
///       + [a^dag (beta_r J^- + beta_s J^+) + h.c.],   loss kappa D[a].
/// beta_r, beta_s are single-atom Raman rates; omega_z is the differential
/// light shift |Omega_r|^2/(4 Delta_r) - |Omega_s|^2/(4 Delta_s).
struct SingleEnsembleParams {
    int N = 1;
    cplx beta_r{};
    cplx beta_s{};
    double kappa = 0.0;
    double delta = 0.0;
    double chi_r = 0.0;
    double chi_s = 0.0;
    double omega_z = 0.0;

    /// Spin analog of the bosonic beta a^dag (c + r e^{i theta} c^dag) + h.c. with J^- ~ sqrt(N) c.
    static SingleEnsembleParams from_bosonic(int N, double beta, double r, double theta, double kappa) {
        SingleEnsembleParams p;
        p.N = N;
        const double root = std::sqrt(static_cast<double>(N));
        p.beta_r = beta / root;
        p.beta_s = std::polar(r * beta / root, theta);
        p.kappa = kappa;
        return p;
    }

    void validate() const {
        if (N < 1) throw ValidationError("SingleEnsembleParams: N must be >= 1");
        if (!(kappa > 0.0)) throw ValidationError("SingleEnsembleParams: kappa must be > 0");
    }
};

/// Two ensembles in a two-mode cavity, with raw cavity detunings delta_a, delta_b,
/// dispersive couplings chi_xi = |g_xi|^2 / Delta and differential light shifts omega_zi.
struct TwoEnsembleParams {
    int N1 = 1;
    int N2 = 1;
    cplx beta_r1{};
    cplx beta_s1{};
    cplx beta_r2{};
    cplx beta_s2{};
    double delta_a = 0.0;
    double delta_b = 0.0;
    double chi_a1 = 0.0;
    double chi_a2 = 0.0;
    double chi_b1 = 0.0;
    double chi_b2 = 0.0;
    double omega_z1 = 0.0;
    double omega_z2 = 0.0;
    double kappa_a = 0.0;
    double kappa_b = 0.0;

    void validate() const {
        if (N1 < 1 || N2 < 1) throw ValidationError("TwoEnsembleParams: atom numbers must be >= 1");
        if (!(kappa_a > 0.0) || !(kappa_b > 0.0)) throw ValidationError("TwoEnsembleParams: kappa_a and kappa_b must be > 0");
    }
};

struct SpinModel {
    Liouvillian liouvillian;
    std::vector<std::string> labels;
    /// Bosonic-normalized annihilators per factor: a for cavities, J^- / sqrt(N) for ensembles.
    std::vector<SparseMatrix> annihilators;
    std::vector<SparseMatrix> jz;  // J_z per ensemble
};

namespace detail {

inline SparseMatrix dicke_lowering(const ProductSpace& space, std::size_t factor, int N) {
    return space.embed(
        factor,
        [N](std::size_t, std::size_t k) {
            const auto kd = static_cast<double>(k);
            return cplx(std::sqrt(kd * (static_cast<double>(N) - kd + 1.0)));
        },
        [](std::size_t row, std::size_t col) { return col > 0 && row + 1 == col; });
}

inline SparseMatrix dicke_jz(const ProductSpace& space, std::size_t factor, int N) {
    return space.embed(
        factor, [N](std::size_t k, std::size_t) { return cplx(static_cast<double>(k) - 0.5 * static_cast<double>(N)); },
        [](std::size_t row, std::size_t col) { return row == col; });
}

}  // namespace detail

/// Factor order (a, spin), matching the bosonic single-mode model (a, c1).
inline SpinModel build_spin_single_mode(const SingleEnsembleParams& p, int cavity_cutoff,
                                        std::size_t max_dimension = default_dimension_guard) {
    p.validate();
    SpinEnsembleConfig cfg{{p.N}, {cavity_cutoff}, max_dimension};
    cfg.validate();
    const ProductSpace space({static_cast<std::size_t>(cavity_cutoff + 1), static_cast<std::size_t>(p.N + 1)});
    const SparseMatrix a = space.annihilator(0);
    const SparseMatrix ad = a.adjoint();
    const SparseMatrix jm = detail::dicke_lowering(space, 1, p.N);
    const SparseMatrix jp = jm.adjoint();
    const SparseMatrix jz = detail::dicke_jz(space, 1, p.N);
    const SparseMatrix id = space.identity();
    const double half_n = 0.5 * static_cast<double>(p.N);

    const SparseMatrix number = ad * a;
    const SparseMatrix shift = (p.delta + (p.chi_r + p.chi_s) * half_n) * id + (p.chi_s - p.chi_r) * jz;
    SparseMatrix h = shift * number;
    h += p.omega_z * jz;
    const SparseMatrix couple = ad * SparseMatrix(p.beta_r * jm + p.beta_s * jp);
    h += couple;
    h += SparseMatrix(couple.adjoint());

    Liouvillian l(space.dims(), std::move(h), {{p.kappa, a}});
    const SparseMatrix spin_a = jm / std::sqrt(static_cast<double>(p.N));
    return {std::move(l), {"a", "spin"}, {a, spin_a}, {jz}};
}

/// Factor order (a, b, spin1, spin2), matching the bosonic single-cavity model (a, b, c1, c2).
inline SpinModel build_spin_two_ensemble(const TwoEnsembleParams& p, int cutoff_a, int cutoff_b,
                                         std::size_t max_dimension = default_dimension_guard) {
    p.validate();
    SpinEnsembleConfig cfg{{p.N1, p.N2}, {cutoff_a, cutoff_b}, max_dimension};
    cfg.validate();
    const ProductSpace space({static_cast<std::size_t>(cutoff_a + 1), static_cast<std::size_t>(cutoff_b + 1),
                              static_cast<std::size_t>(p.N1 + 1), static_cast<std::size_t>(p.N2 + 1)});
    const SparseMatrix a = space.annihilator(0), b = space.annihilator(1);
    const SparseMatrix ad = a.adjoint(), bd = b.adjoint();
    const SparseMatrix j1 = detail::dicke_lowering(space, 2, p.N1), j2 = detail::dicke_lowering(space, 3, p.N2);
    const SparseMatrix j1p = j1.adjoint(), j2p = j2.adjoint();
    const SparseMatrix jz1 = detail::dicke_jz(space, 2, p.N1), jz2 = detail::dicke_jz(space, 3, p.N2);
    const SparseMatrix id = space.identity();
    const double h1 = 0.5 * static_cast<double>(p.N1), h2 = 0.5 * static_cast<double>(p.N2);

    const SparseMatrix shift_a = (p.delta_a + p.chi_a1 * h1 + p.chi_a2 * h2) * id - p.chi_a1 * jz1 + p.chi_a2 * jz2;
    const SparseMatrix shift_b = (p.delta_b + p.chi_b1 * h1 + p.chi_b2 * h2) * id + p.chi_b1 * jz1 - p.chi_b2 * jz2;
    SparseMatrix h = shift_a * SparseMatrix(ad * a);
    h += SparseMatrix(shift_b * SparseMatrix(bd * b));
    h += p.omega_z1 * jz1;
    h += p.omega_z2 * jz2;
    const SparseMatrix couple = SparseMatrix(ad * SparseMatrix(p.beta_r1 * j1 + p.beta_r2 * j2p)) + SparseMatrix(bd * SparseMatrix(p.beta_s1 * j1p + p.beta_s2 * j2));
    h += couple;
    h += SparseMatrix(couple.adjoint());

    Liouvillian l(space.dims(), std::move(h), {{p.kappa_a, a}, {p.kappa_b, b}});
    return {std::move(l),
            {"a", "b", "spin1", "spin2"},
            {a, b, j1 / std::sqrt(static_cast<double>(p.N1)), j2 / std::sqrt(static_cast<double>(p.N2))},
            {jz1, jz2}};
}

}  // namespace tmsq::fock
