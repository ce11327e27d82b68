#pragma once

// Matrix-free Lindblad generator on a truncated space:
//   L rho = -i [H, rho] + sum_k rate_k (2 L_k rho L_k^dag - L_k^dag L_k rho - rho L_k^dag L_k).

#include "tmsq/fock/space.hpp"
#include "tmsq/fock/state.hpp"
#include "tmsq/gaussian/generator.hpp"
#include "tmsq/gaussian/system.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <utility>
#include <vector>

namespace tmsq::fock {

struct Channel {
    double rate = 0.0;
    SparseMatrix op;
    SparseMatrix op_dag;
    SparseMatrix number;  // op^dag op
};

class Liouvillian {
public:
    Liouvillian(std::vector<std::size_t> dims, SparseMatrix hamiltonian, const std::vector<std::pair<double, SparseMatrix>>& jumps)
        : dims_(std::move(dims)), h_(std::move(hamiltonian)) {
        const auto d = static_cast<Eigen::Index>(ProductSpace(dims_).dimension());
        if (h_.rows() != d || h_.cols() != d) throw DimensionError("Liouvillian: Hamiltonian does not match the space");
        h_.prune(cplx(0.0), 1e-300);
        for (const auto& [rate, op] : jumps) {
            if (op.rows() != d || op.cols() != d) throw DimensionError("Liouvillian: jump operator does not match the space");
            if (rate < 0.0) throw ValidationError("Liouvillian: negative jump rate");
            if (rate == 0.0) continue;
            SparseMatrix dag = op.adjoint();
            SparseMatrix number = dag * op;
            channels_.push_back({rate, op, std::move(dag), std::move(number)});
        }
    }

    /// Truncated ladder-operator representation of a GaussianSystem; cascade
    /// links are lowered to standard Lindblad form first.
    static Liouvillian from_system(const gaussian::GaussianSystem& system, const FockConfig& cfg) {
        cfg.validate();
        if (cfg.cutoffs.size() != system.n_modes())
            throw DimensionError("Liouvillian: one cutoff per mode is required");
        const auto flat = gaussian::flatten(system);
        const ProductSpace space(cfg.dims());
        const auto n = system.n_modes();

        std::vector<SparseMatrix> a, a_dag;
        for (std::size_t k = 0; k < n; ++k) {
            a.push_back(space.annihilator(k));
            a_dag.push_back(a.back().adjoint());
        }

        const auto& F = flat.hamiltonian.F;
        const auto& M = flat.hamiltonian.M;
        SparseMatrix h(static_cast<Eigen::Index>(space.dimension()), static_cast<Eigen::Index>(space.dimension()));
        SparseMatrix pair = h;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
                if (F(ii, jj) != cplx{}) h += F(ii, jj) * SparseMatrix(a_dag[i] * a[j]);
                if (M(ii, jj) != cplx{}) pair += (0.5 * M(ii, jj)) * SparseMatrix(a_dag[i] * a_dag[j]);
            }
        h += pair;
        h += SparseMatrix(pair.adjoint());

        std::vector<std::pair<double, SparseMatrix>> jumps;
        for (const auto& jump : flat.jumps) {
            SparseMatrix op(h.rows(), h.cols());
            for (std::size_t k = 0; k < n; ++k) {
                const auto kk = static_cast<Eigen::Index>(k);
                if (jump.u(kk) != cplx{}) op += jump.u(kk) * a[k];
                if (jump.v(kk) != cplx{}) op += jump.v(kk) * a_dag[k];
            }
            jumps.emplace_back(jump.rate, std::move(op));
        }
        return Liouvillian(cfg.dims(), std::move(h), jumps);
    }

    const std::vector<std::size_t>& dims() const { return dims_; }
    std::size_t dimension() const { return static_cast<std::size_t>(h_.rows()); }
    const SparseMatrix& hamiltonian() const { return h_; }
    const std::vector<Channel>& channels() const { return channels_; }

    /// General action on any square matrix.
    ComplexMatrix apply(const ComplexMatrix& rho) const {
        check(rho);
        ComplexMatrix out = cplx(0.0, -1.0) * (h_ * rho - rho * h_);
        for (const auto& ch : channels_) {
            const ComplexMatrix lr = ch.op * rho;
            out += ch.rate * (2.0 * (lr * ch.op_dag) - ch.number * rho - rho * ch.number);
        }
        return out;
    }

    /// Action on a Hermitian matrix: every term comes as K + K^dag, halving the sparse products.
    ComplexMatrix apply_hermitian(const ComplexMatrix& rho) const {
        check(rho);
        ComplexMatrix k = cplx(0.0, -1.0) * (h_ * rho);
        ComplexMatrix sandwich = ComplexMatrix::Zero(rho.rows(), rho.cols());
        for (const auto& ch : channels_) {
            k.noalias() -= ch.rate * (ch.number * rho);
            const ComplexMatrix lr = ch.op * rho;
            // L rho L^dag = (L (L rho)^dag)^dag
            const ComplexMatrix lrl = ch.op * ComplexMatrix(lr.adjoint());
            sandwich.noalias() += (2.0 * ch.rate) * lrl.adjoint();
        }
        ComplexMatrix out = k + k.adjoint();
        out += sandwich;
        return out;
    }

    /// Upper bound on the operator norm of the superoperator:
    /// 2 ||H|| + sum_k rate_k 4 ||L_k||^2.
    double norm_bound() const {
        double bound = 2.0 * fock::norm_bound(h_);
        for (const auto& ch : channels_) {
            const double l = fock::norm_bound(ch.op);
            bound += 4.0 * ch.rate * l * l;
        }
        return bound;
    }

    /// Explicit superoperator on row-major vec(rho): vec(A rho B) = (A kron B^T) vec(rho).
    /// Intended for small spaces (identity checks, null-space solves).
    SparseMatrix superoperator() const {
        const SparseMatrix id = ProductSpace(dims_).identity();
        auto sandwich = [](const SparseMatrix& left, const SparseMatrix& right) {
            SparseMatrix rt = right.transpose();
            return SparseMatrix(Eigen::kroneckerProduct(left, rt));
        };
        SparseMatrix out = cplx(0.0, -1.0) * (sandwich(h_, id) - sandwich(id, h_));
        for (const auto& ch : channels_)
            out += ch.rate * (2.0 * sandwich(ch.op, ch.op_dag) - sandwich(ch.number, id) - sandwich(id, ch.number));
        return out;
    }

private:
    void check(const ComplexMatrix& rho) const {
        if (rho.rows() != h_.rows() || rho.cols() != h_.cols())
            throw DimensionError("Liouvillian: density matrix dimension does not match the space");
    }

    std::vector<std::size_t> dims_;
    SparseMatrix h_;
    std::vector<Channel> channels_;
};

/// d rho / dt for `system` truncated per `cfg`.
inline ComplexMatrix liouvillian_apply(const gaussian::GaussianSystem& system, const FockConfig& cfg, const FockState& rho) {
    if (rho.dims != cfg.dims()) throw DimensionError("liouvillian_apply: state and config dimensions differ");
    return Liouvillian::from_system(system, cfg).apply(rho.rho);
}

}  // namespace tmsq::fock
