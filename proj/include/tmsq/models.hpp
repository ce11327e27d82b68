#pragma once

// Model catalog: the bosonic networks of the unconditional two-mode squeezing
// schemes, plus the map from laboratory parameters to model rates.
//
//   build_single_cavity_ideal    a, b, c1, c2        one cavity, matched Raman channels
//   build_single_cavity_general  a, b, c1, c2        one cavity, arbitrary Raman rates and residual detunings
//   build_single_mode            a, c1               one ensemble, one cavity mode (single-mode squeezing)
//   build_cascaded               a1, b1, a2, b2, c1, c2   two cavities joined by cascade links
//   build_reduced_adiabatic      c1, c2              cascaded scheme with cavities eliminated (kappa >> beta)
//
// All rates are in rad/s. beta is taken real and non-negative; the relative
// phase of the pair terms is carried by theta.

#include "tmsq/analytics.hpp"
#include "tmsq/gaussian/system.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace tmsq::models {

using gaussian::GaussianSystem;

namespace detail {
inline void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}
inline void require_r(double r, const char* who) {
    require(r >= 0.0 && r < 1.0, std::string(who) + ": r must satisfy 0 <= r < 1 (no steady state for r >= 1)");
}
}  // namespace detail

struct IdealParams {
    double beta = 0.0;
    double r = 0.0;
    double theta = 0.0;
    double kappa_a = 0.0;
    double kappa_b = 0.0;

    void validate() const {
        detail::require(beta > 0.0, "IdealParams: beta must be > 0");
        detail::require_r(r, "IdealParams");
        detail::require(kappa_a > 0.0 && kappa_b > 0.0, "IdealParams: kappa_a and kappa_b must be > 0");
    }
};

/// Single-atom Raman rates, atom numbers and residual cavity detunings
/// delta_a + N1 |g_a1|^2 / Delta_r and delta_b + N2 |g_b2|^2 / Delta_s.
struct GeneralRamanParams {
    cplx beta_r1{};
    cplx beta_s1{};
    cplx beta_r2{};
    cplx beta_s2{};
    double N1 = 1.0;
    double N2 = 1.0;
    double delta_a_eff = 0.0;
    double delta_b_eff = 0.0;
    double kappa_a = 0.0;
    double kappa_b = 0.0;

    void validate() const {
        detail::require(N1 >= 1.0 && N2 >= 1.0, "GeneralRamanParams: N1 and N2 must be >= 1");
        detail::require(kappa_a > 0.0 && kappa_b > 0.0, "GeneralRamanParams: kappa_a and kappa_b must be > 0");
    }

    /// Single-atom rates that satisfy the matching conditions exactly for the given atom numbers.
    static GeneralRamanParams from_ideal(const IdealParams& p, double N1, double N2) {
        p.validate();
        const cplx pair = std::polar(p.r * p.beta, p.theta);
        GeneralRamanParams g;
        g.N1 = N1;
        g.N2 = N2;
        g.beta_r1 = p.beta / std::sqrt(N1);
        g.beta_s2 = p.beta / std::sqrt(N2);
        g.beta_s1 = pair / std::sqrt(N1);
        g.beta_r2 = pair / std::sqrt(N2);
        g.kappa_a = p.kappa_a;
        g.kappa_b = p.kappa_b;
        return g;
    }

    /// Same single-atom rates with N2 rescaled so that
    /// sqrt(N2/N1) beta_s2 / beta_r1 changes by `ratio` (atom-number uncertainty).
    GeneralRamanParams with_atom_number_ratio(double ratio) const {
        detail::require(ratio > 0.0, "with_atom_number_ratio: ratio must be > 0");
        GeneralRamanParams out = *this;
        out.N2 = N2 * ratio * ratio;
        return out;
    }
};

struct CascadeParams {
    double beta = 0.0;
    double r = 0.0;
    double theta = 0.0;
    double kappa = 0.0;
    double eta = 1.0;

    void validate() const {
        detail::require(beta >= 0.0, "CascadeParams: beta must be >= 0");
        detail::require_r(r, "CascadeParams");
        detail::require(kappa > 0.0, "CascadeParams: kappa must be > 0");
        detail::require(eta >= 0.0 && eta <= 1.0, "CascadeParams: eta must lie in [0, 1]");
    }
};

struct PhysicalParams {
    double g = 0.0;
    double Omega = 0.0;
    double Delta = 0.0;
    double N = 1.0;
    double gamma = 0.0;
    double omega_1 = 0.0;  // ground-state splitting; enters only through the residual detunings

    void validate() const {
        detail::require(Delta > 0.0, "PhysicalParams: Delta must be > 0");
        detail::require(N >= 1.0, "PhysicalParams: N must be >= 1");
        detail::require(g >= 0.0 && Omega >= 0.0 && gamma >= 0.0, "PhysicalParams: g, Omega and gamma must be >= 0");
    }

    /// Adiabatic elimination of the excited state wants Delta >> Omega.
    bool far_detuned() const { return Delta >= 10.0 * Omega && Delta >= 10.0 * g; }
};

/// H = [beta a^dag (c1 + r e^{i theta} c2^dag) + h.c.] + [beta b^dag (c2 + r e^{i theta} c1^dag) + h.c.],
/// losses kappa_a on a and kappa_b on b.
inline GaussianSystem build_single_cavity_ideal(const IdealParams& p) {
    p.validate();
    GaussianSystem sys({"a", "b", "c1", "c2"});
    const cplx pair = std::polar(p.r * p.beta, p.theta);
    sys.add_exchange(0, 2, p.beta)
        .add_exchange(1, 3, p.beta)
        .add_pair(0, 3, pair)
        .add_pair(1, 2, pair)
        .add_loss(0, p.kappa_a)
        .add_loss(1, p.kappa_b);
    return sys;
}

/// Bosonized Raman Hamiltonian before the matching conditions are imposed:
/// a^dag (sqrt(N1) beta_r1 c1 + sqrt(N2) beta_r2 c2^dag) + b^dag (sqrt(N1) beta_s1 c1^dag + sqrt(N2) beta_s2 c2) + h.c.
/// plus residual detunings on a and b.
inline GaussianSystem build_single_cavity_general(const GeneralRamanParams& p) {
    p.validate();
    const double root1 = std::sqrt(p.N1), root2 = std::sqrt(p.N2);
    GaussianSystem sys({"a", "b", "c1", "c2"});
    sys.add_exchange(0, 2, root1 * p.beta_r1)
        .add_pair(0, 3, root2 * p.beta_r2)
        .add_pair(1, 2, root1 * p.beta_s1)
        .add_exchange(1, 3, root2 * p.beta_s2)
        .add_detuning(0, p.delta_a_eff)
        .add_detuning(1, p.delta_b_eff)
        .add_loss(0, p.kappa_a)
        .add_loss(1, p.kappa_b);
    return sys;
}

/// H = beta a^dag (c1 + r e^{i theta} c1^dag) + h.c., loss kappa on a.
/// Steady state: c1 in single-mode squeezed vacuum, V(X1) = e^{-2s} for theta = 0.
inline GaussianSystem build_single_mode(double beta, double r, double theta, double kappa) {
    detail::require(beta >= 0.0, "build_single_mode: beta must be >= 0");
    detail::require_r(r, "build_single_mode");
    detail::require(kappa > 0.0, "build_single_mode: kappa must be > 0");
    GaussianSystem sys({"a", "c1"});
    sys.add_exchange(0, 1, beta).add_pair(0, 1, std::polar(r * beta, theta)).add_loss(0, kappa);
    return sys;
}

/// Two cavities (a1, b1) -> (a2, b2) with ensemble 1 (c1) in the first and
/// ensemble 2 (c2) in the second:
/// H = beta (a1^dag c1 + r e^{i theta} a2^dag c2^dag) + beta (b2^dag c2 + r e^{i theta} b1^dag c1^dag) + h.c.
/// The cascade links a1 -> a2 and b1 -> b2 carry the kappa losses of all four cavity modes.
inline GaussianSystem build_cascaded(const CascadeParams& p) {
    p.validate();
    GaussianSystem sys({"a1", "b1", "a2", "b2", "c1", "c2"});
    const cplx pair = std::polar(p.r * p.beta, p.theta);
    sys.add_exchange(0, 4, p.beta)
        .add_pair(2, 5, pair)
        .add_exchange(3, 5, p.beta)
        .add_pair(1, 4, pair)
        .add_cascade({0, 2, p.kappa, p.eta})
        .add_cascade({1, 3, p.kappa, p.eta});
    return sys;
}

/// Atomic modes only, cavities adiabatically eliminated (eta = 1). Jumps are the
/// squeezed-frame images of c1, c2 under S12(-eps):
/// L1 = cosh(s) c1 - e^{i theta} sinh(s) c2^dag, L2 = cosh(s) c2 - e^{i theta} sinh(s) c1^dag,
/// each at rate Gamma = beta^2 (1 - r^2) / kappa. Steady state S12(-eps)|00>.
inline GaussianSystem build_reduced_adiabatic(double beta, double r, double theta, double kappa) {
    detail::require(beta >= 0.0, "build_reduced_adiabatic: beta must be >= 0");
    detail::require_r(r, "build_reduced_adiabatic");
    detail::require(kappa > 0.0, "build_reduced_adiabatic: kappa must be > 0");
    const double s = std::atanh(r);
    const double gamma = analytics::gamma_rate(beta, r, kappa);
    const cplx partner = -std::polar(std::sinh(s), theta);

    GaussianSystem sys({"c1", "c2"});
    gaussian::LinearJump l1{ComplexVector::Zero(2), ComplexVector::Zero(2), gamma};
    l1.u(0) = std::cosh(s);
    l1.v(1) = partner;
    gaussian::LinearJump l2{ComplexVector::Zero(2), ComplexVector::Zero(2), gamma};
    l2.u(1) = std::cosh(s);
    l2.v(0) = partner;
    sys.add_jump(std::move(l1)).add_jump(std::move(l2));
    return sys;
}

struct PhysicalEstimate {
    double beta_single;      // Omega g / (2 Delta)
    double beta_collective;  // sqrt(N) beta_single
    double spont_rate;       // gamma Omega^2 / (4 Delta^2)
    double stark_shift;      // Omega^2 / (4 Delta), per atom
    bool far_detuned;
};

inline PhysicalEstimate estimate_physical(const PhysicalParams& p) {
    p.validate();
    const double beta_single = p.Omega * p.g / (2.0 * p.Delta);
    return {beta_single, std::sqrt(p.N) * beta_single, p.gamma * p.Omega * p.Omega / (4.0 * p.Delta * p.Delta),
            p.Omega * p.Omega / (4.0 * p.Delta), p.far_detuned()};
}

struct MatchingReport {
    double cond_i_residual_a;  // delta_a_eff
    double cond_i_residual_b;  // delta_b_eff
    cplx cond_ii_ratio;        // sqrt(N2) beta_s2 / (sqrt(N1) beta_r1)
    cplx cond_iii_ratio;       // sqrt(N1) beta_s1 / (sqrt(N2) beta_r2)
    double r_effective;        // |beta_s1| / |beta_r1|
    bool unstable;             // r_effective >= 1: no steady state

    bool matched(double tol = 1e-12) const {
        return std::abs(cond_i_residual_a) <= tol && std::abs(cond_i_residual_b) <= tol &&
               std::abs(cond_ii_ratio - 1.0) <= tol && std::abs(cond_iii_ratio - 1.0) <= tol;
    }

    /// No cavity photons in steady state. Weaker than matched(): both cavities
    /// only need to annihilate one common two-mode squeezed vacuum, which
    /// happens when the two ratios agree. Detunings act on the empty cavities
    /// and do not matter here.
    bool dark(double tol = 1e-12) const {
        return std::abs(cond_ii_ratio - cond_iii_ratio) <= tol * std::abs(cond_iii_ratio) && !unstable;
    }
};

inline MatchingReport check_matching_conditions(const GeneralRamanParams& p) {
    p.validate();
    const double root1 = std::sqrt(p.N1), root2 = std::sqrt(p.N2);
    auto ratio = [](cplx num, cplx den) {
        if (den == cplx{}) return num == cplx{} ? cplx(1.0) : cplx(std::numeric_limits<double>::infinity());
        return num / den;
    };
    const double r_eff = std::abs(p.beta_r1) > 0.0 ? std::abs(p.beta_s1) / std::abs(p.beta_r1)
                                                   : std::numeric_limits<double>::infinity();
    return {p.delta_a_eff,
            p.delta_b_eff,
            ratio(root2 * p.beta_s2, root1 * p.beta_r1),
            ratio(root1 * p.beta_s1, root2 * p.beta_r2),
            r_eff,
            !(r_eff < 1.0)};
}

}  // namespace tmsq::models
