#pragma once

// Truncated product spaces. Basis ordering is mode-major with the number
// index ascending: mode 0 is the most significant digit.

#include "tmsq/types.hpp"

#include <Eigen/SparseCore>

#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <sstream>
#include <vector>

namespace tmsq::fock {

using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<cplx>;

inline constexpr std::size_t default_dimension_guard = 20000;

struct FockConfig {
    std::vector<int> cutoffs;  // photon-number cutoff per mode, local dimension cutoff + 1
    double convergence_tol = 1e-3;
    std::size_t max_dimension = default_dimension_guard;

    std::size_t dimension() const {
        std::size_t d = 1;
        for (int c : cutoffs) d *= static_cast<std::size_t>(c + 1);
        return d;
    }

    std::vector<std::size_t> dims() const {
        std::vector<std::size_t> out;
        for (int c : cutoffs) out.push_back(static_cast<std::size_t>(c + 1));
        return out;
    }

    void validate() const {
        if (cutoffs.empty()) throw ValidationError("FockConfig: at least one mode is required");
        for (int c : cutoffs)
            if (c < 2) throw ValidationError("FockConfig: every cutoff must be >= 2");
        if (dimension() > max_dimension) {
            std::ostringstream msg;
            msg << "FockConfig: truncated dimension " << dimension() << " exceeds the guard " << max_dimension;
            throw DimensionError(msg.str());
        }
    }
};

/// Tensor-product space with arbitrary local dimensions (Fock ladders or Dicke ladders).
class ProductSpace {
public:
    explicit ProductSpace(std::vector<std::size_t> dims) : dims_(std::move(dims)), strides_(dims_.size(), 1) {
        if (dims_.empty()) throw ValidationError("ProductSpace: no factors");
        for (std::size_t k = dims_.size(); k-- > 1;) strides_[k - 1] = strides_[k] * dims_[k];
        dimension_ = strides_.front() * dims_.front();
    }

    std::size_t dimension() const { return dimension_; }
    std::size_t n_factors() const { return dims_.size(); }
    const std::vector<std::size_t>& dims() const { return dims_; }

    std::size_t local_index(std::size_t state, std::size_t factor) const { return (state / strides_[factor]) % dims_[factor]; }

    std::size_t index_of(const std::vector<std::size_t>& locals) const {
        if (locals.size() != dims_.size()) throw DimensionError("ProductSpace: wrong number of local indices");
        std::size_t idx = 0;
        for (std::size_t k = 0; k < dims_.size(); ++k) {
            if (locals[k] >= dims_[k]) throw DimensionError("ProductSpace: local index out of range");
            idx += locals[k] * strides_[k];
        }
        return idx;
    }

    /// I x ... x op x ... x I with `op` given by its nonzero matrix elements
    /// element(row, col) on factor `factor`.
    SparseMatrix embed(std::size_t factor, const std::function<cplx(std::size_t, std::size_t)>& element,
                       const std::function<bool(std::size_t, std::size_t)>& nonzero) const {
        std::vector<Triplet> triplets;
        const auto local_dim = dims_.at(factor);
        for (std::size_t state = 0; state < dimension_; ++state) {
            const auto col_local = local_index(state, factor);
            for (std::size_t row_local = 0; row_local < local_dim; ++row_local) {
                if (!nonzero(row_local, col_local)) continue;
                const auto row = state + (row_local - col_local) * strides_[factor];
                triplets.emplace_back(static_cast<int>(row), static_cast<int>(state), element(row_local, col_local));
            }
        }
        SparseMatrix m(static_cast<Eigen::Index>(dimension_), static_cast<Eigen::Index>(dimension_));
        m.setFromTriplets(triplets.begin(), triplets.end());
        return m;
    }

    /// Truncated bosonic annihilator: a|n> = sqrt(n)|n-1>.
    SparseMatrix annihilator(std::size_t factor) const {
        return embed(
            factor, [](std::size_t, std::size_t n) { return cplx(std::sqrt(static_cast<double>(n))); },
            [](std::size_t row, std::size_t col) { return col > 0 && row + 1 == col; });
    }

    SparseMatrix identity() const {
        SparseMatrix m(static_cast<Eigen::Index>(dimension_), static_cast<Eigen::Index>(dimension_));
        m.setIdentity();
        return m;
    }

private:
    std::vector<std::size_t> dims_;
    std::vector<std::size_t> strides_;
    std::size_t dimension_ = 0;
};

/// Spectral-norm upper bound sqrt(||A||_1 ||A||_inf).
inline double norm_bound(const SparseMatrix& m) {
    Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(m.rows());
    Eigen::VectorXd col_sums = Eigen::VectorXd::Zero(m.cols());
    for (Eigen::Index r = 0; r < m.outerSize(); ++r)
        for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
            row_sums(it.row()) += std::abs(it.value());
            col_sums(it.col()) += std::abs(it.value());
        }
    if (m.rows() == 0) return 0.0;
    return std::sqrt(row_sums.maxCoeff() * col_sums.maxCoeff());
}

}  // namespace tmsq::fock
