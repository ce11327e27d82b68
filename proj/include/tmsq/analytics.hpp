#pragma once

// Closed-form reference values for the squeezing schemes. Variances use the
// vacuum level 2 for a sum or difference of two quadratures.

#include "tmsq/types.hpp"

#include <cmath>
#include <utility>

namespace tmsq::analytics {

struct SqueezeParam {
    double r = 0.0;
    double theta = 0.0;

    double s() const {
        if (!(r >= 0.0 && r < 1.0)) throw ValidationError("SqueezeParam: r must lie in [0, 1)");
        return std::atanh(r);
    }
    cplx epsilon() const { return std::polar(s(), theta); }
};

struct EprPair {
    double squeezed;      // 2 e^{-2s} = 2 (1 - r) / (1 + r)
    double antisqueezed;  // 2 e^{+2s} = 2 (1 + r) / (1 - r)
};

inline EprPair v_epr_ideal(double r) {
    const double s = SqueezeParam{r}.s();
    return {2.0 * std::exp(-2.0 * s), 2.0 * std::exp(2.0 * s)};
}

struct LambdaPlus {
    double value;       // real part, <= 0 when stable
    bool underdamped;   // (kappa/2)^2 < beta^2 (1 - r^2): complex pair, rate kappa/2
};

/// lambda_+ = -kappa/2 + sqrt((kappa/2)^2 - |beta|^2 (1 - r^2)).
inline LambdaPlus lambda_plus(double kappa, double beta, double r) {
    if (!(kappa > 0.0)) throw ValidationError("lambda_plus: kappa must be > 0");
    const double half = 0.5 * kappa;
    const double disc = half * half - beta * beta * (1.0 - r * r);
    if (disc < 0.0) return {-half, true};
    return {-half + std::sqrt(disc), false};
}

/// Gamma = |beta|^2 (1 - r^2) / kappa.
inline double gamma_rate(double beta, double r, double kappa) {
    if (!(kappa > 0.0)) throw ValidationError("gamma_rate: kappa must be > 0");
    return beta * beta * (1.0 - r * r) / kappa;
}

/// V(X1 - X2) = V(P1 + P2) of the cascaded scheme with coupling efficiency eta (theta = 0).
inline double v_epr_cascaded(double r, double eta) {
    if (!(r >= 0.0 && r < 1.0)) throw ValidationError("v_epr_cascaded: r must lie in [0, 1)");
    if (!(eta >= 0.0 && eta <= 1.0)) throw ValidationError("v_epr_cascaded: eta must lie in [0, 1]");
    return 2.0 * (r * r - 2.0 * r * std::sqrt(eta) + 1.0) / (1.0 - r * r);
}

inline double r_opt(double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) throw ValidationError("r_opt: eta must lie in (0, 1]");
    return (1.0 - std::sqrt(1.0 - eta)) / std::sqrt(eta);
}

inline double v_min(double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) throw ValidationError("v_min: eta must lie in (0, 1]");
    return 2.0 * std::sqrt(1.0 - eta);
}

/// dB relative to the two-mode vacuum level 2.
inline double to_db(double variance) {
    if (!(variance > 0.0)) throw ValidationError("to_db: variance must be > 0");
    return 10.0 * std::log10(variance / 2.0);
}

}  // namespace tmsq::analytics
