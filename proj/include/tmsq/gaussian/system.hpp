#pragma once

// Symbolic description of a linear open bosonic network: a quadratic
// Hamiltonian, linear jump operators and unidirectional cascade links.

#include "tmsq/types.hpp"

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

namespace tmsq::gaussian {

struct ModeIndex {
    std::size_t index = 0;
    std::string label;
};

/// H = sum_ij F_ij a_i^dag a_j + 1/2 sum_ij (M_ij a_i^dag a_j^dag + conj(M_ij) a_i a_j).
/// F Hermitian, M symmetric, both in rad/s.
struct QuadraticHamiltonian {
    ComplexMatrix F;
    ComplexMatrix M;

    static QuadraticHamiltonian zero(std::size_t n_modes) {
        return {ComplexMatrix::Zero(n_modes, n_modes), ComplexMatrix::Zero(n_modes, n_modes)};
    }

    std::size_t n_modes() const { return static_cast<std::size_t>(F.rows()); }

    void validate(double tol = 1e-12) const {
        if (F.rows() != F.cols() || M.rows() != M.cols() || F.rows() != M.rows())
            throw DimensionError("QuadraticHamiltonian: F and M must be square and equally sized");
        const double scale = std::max({1.0, F.cwiseAbs().maxCoeff(), M.size() ? M.cwiseAbs().maxCoeff() : 0.0});
        if ((F - F.adjoint()).cwiseAbs().maxCoeff() > tol * scale)
            throw ValidationError("QuadraticHamiltonian: F must be Hermitian");
        if ((M - M.transpose()).cwiseAbs().maxCoeff() > tol * scale)
            throw ValidationError("QuadraticHamiltonian: M must be symmetric");
    }

    QuadraticHamiltonian& operator+=(const QuadraticHamiltonian& other) {
        F += other.F;
        M += other.M;
        return *this;
    }
};

/// rate * D[L] with L = sum_i u_i a_i + v_i a_i^dag and
/// D[O]rho = 2 O rho O^dag - O^dag O rho - rho O^dag O.
struct LinearJump {
    ComplexVector u;
    ComplexVector v;
    double rate = 0.0;

    static LinearJump annihilation(std::size_t n_modes, std::size_t mode, double rate) {
        LinearJump jump{ComplexVector::Zero(n_modes), ComplexVector::Zero(n_modes), rate};
        jump.u(mode) = 1.0;
        return jump;
    }

    void validate(std::size_t n_modes) const {
        if (static_cast<std::size_t>(u.size()) != n_modes || static_cast<std::size_t>(v.size()) != n_modes)
            throw DimensionError("LinearJump: coefficient vectors must have one entry per mode");
        if (!(rate >= 0.0)) throw ValidationError("LinearJump: rate must be >= 0");
        if (rate > 0.0 && u.isZero(0.0) && v.isZero(0.0))
            throw ValidationError("LinearJump: a jump with positive rate needs a nonzero operator");
    }
};

/// Unidirectional coupling source -> target with field decay kappa and
/// transmission efficiency eta. The link carries the loss of both modes.
struct CascadeLink {
    std::size_t source = 0;
    std::size_t target = 0;
    double kappa = 0.0;
    double eta = 1.0;

    void validate(std::size_t n_modes) const {
        if (source >= n_modes || target >= n_modes)
            throw DimensionError("CascadeLink: mode reference out of range");
        if (source == target) throw ValidationError("CascadeLink: source must differ from target");
        if (!(kappa >= 0.0)) throw ValidationError("CascadeLink: kappa must be >= 0");
        if (!(eta >= 0.0 && eta <= 1.0)) throw ValidationError("CascadeLink: eta must lie in [0, 1]");
    }
};

class GaussianSystem {
public:
    GaussianSystem() = default;

    explicit GaussianSystem(std::vector<std::string> labels)
        : labels_(std::move(labels)), hamiltonian_(QuadraticHamiltonian::zero(labels_.size())) {
        for (std::size_t i = 0; i < labels_.size(); ++i)
            for (std::size_t j = i + 1; j < labels_.size(); ++j)
                if (labels_[i] == labels_[j])
                    throw ValidationError("GaussianSystem: duplicate mode label '" + labels_[i] + "'");
    }

    std::size_t n_modes() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const QuadraticHamiltonian& hamiltonian() const { return hamiltonian_; }
    const std::vector<LinearJump>& jumps() const { return jumps_; }
    const std::vector<CascadeLink>& cascades() const { return cascades_; }

    ModeIndex mode(const std::string& label) const {
        auto it = std::find(labels_.begin(), labels_.end(), label);
        if (it == labels_.end()) throw ValidationError("GaussianSystem: unknown mode '" + label + "'");
        return {static_cast<std::size_t>(it - labels_.begin()), label};
    }

    ModeIndex mode(std::size_t index) const {
        check_index(index);
        return {index, labels_[index]};
    }

    /// delta * a_i^dag a_i
    GaussianSystem& add_detuning(std::size_t i, double delta) {
        check_index(i);
        hamiltonian_.F(i, i) += delta;
        return *this;
    }

    /// g a_i^dag a_j + h.c.
    GaussianSystem& add_exchange(std::size_t i, std::size_t j, cplx g) {
        check_index(i);
        check_index(j);
        if (i == j) throw ValidationError("add_exchange: use add_detuning for a diagonal term");
        hamiltonian_.F(i, j) += g;
        hamiltonian_.F(j, i) += std::conj(g);
        return *this;
    }

    /// g a_i^dag a_j^dag + h.c.; i == j gives the single-mode term g (a_i^dag)^2 + h.c.
    GaussianSystem& add_pair(std::size_t i, std::size_t j, cplx g) {
        check_index(i);
        check_index(j);
        if (i == j) {
            hamiltonian_.M(i, i) += 2.0 * g;
        } else {
            hamiltonian_.M(i, j) += g;
            hamiltonian_.M(j, i) += g;
        }
        return *this;
    }

    GaussianSystem& add_hamiltonian(const QuadraticHamiltonian& h) {
        if (h.n_modes() != n_modes()) throw DimensionError("add_hamiltonian: mode count mismatch");
        hamiltonian_ += h;
        return *this;
    }

    GaussianSystem& add_loss(std::size_t i, double rate) {
        check_index(i);
        return add_jump(LinearJump::annihilation(n_modes(), i, rate));
    }

    GaussianSystem& add_jump(LinearJump jump) {
        jump.validate(n_modes());
        jumps_.push_back(std::move(jump));
        return *this;
    }

    GaussianSystem& add_cascade(const CascadeLink& link) {
        link.validate(n_modes());
        cascades_.push_back(link);
        return *this;
    }

    void validate() const {
        hamiltonian_.validate();
        for (const auto& jump : jumps_) jump.validate(n_modes());
        for (const auto& link : cascades_) link.validate(n_modes());
    }

private:
    void check_index(std::size_t i) const {
        if (i >= n_modes()) {
            std::ostringstream msg;
            msg << "GaussianSystem: mode index " << i << " out of range [0, " << n_modes() << ")";
            throw DimensionError(msg.str());
        }
    }

    std::vector<std::string> labels_;
    QuadraticHamiltonian hamiltonian_;
    std::vector<LinearJump> jumps_;
    std::vector<CascadeLink> cascades_;
};

}  // namespace tmsq::gaussian
