#pragma once

// Steady state by a sparse LU solve of L rho = 0 restricted to the
// sector-diagonal entries of rho, with one equation traded for tr rho = 1.
// Only for small spaces; the unknown count grows like the sum of squared
// sector sizes.

#include "tmsq/fock/blocks.hpp"
#include "tmsq/fock/liouvillian.hpp"
#include "tmsq/fock/state.hpp"

#include <Eigen/SparseLU>

#include <sstream>
#include <vector>

namespace tmsq::fock {

/// Number of unknowns the direct solve would use.
inline std::size_t direct_unknowns(const SectorLayout& layout) {
    std::size_t n = 0;
    for (std::size_t s = 0; s < layout.n_sectors(); ++s) n += layout.states(s).size() * layout.states(s).size();
    return n;
}

inline FockState solve_steady(const Liouvillian& l, const SectorLayout& layout) {
    const auto d = l.dimension();
    std::vector<long> slot(d * d, -1);
    std::vector<std::pair<std::size_t, std::size_t>> entries;
    for (std::size_t s = 0; s < layout.n_sectors(); ++s)
        for (auto i : layout.states(s))
            for (auto j : layout.states(s)) {
                slot[i * d + j] = static_cast<long>(entries.size());
                entries.emplace_back(i, j);
            }
    const auto n = entries.size();

    SparseMatrix heff = l.hamiltonian();
    for (const auto& ch : l.channels()) heff -= cplx(0.0, ch.rate) * ch.number;
    heff.makeCompressed();

    std::vector<Eigen::Triplet<cplx>> trip;
    auto add = [&](std::size_t row, std::size_t i, std::size_t j, cplx v) {
        const long col = slot[i * d + j];
        if (col >= 0 && v != cplx{}) trip.emplace_back(static_cast<int>(row), static_cast<int>(col), v);
    };
    const cplx mi(0.0, -1.0);
    // the first diagonal entry's equation becomes the trace condition
    std::size_t trace_row = n;
    for (std::size_t row = 0; row < n; ++row) {
        const auto [i, j] = entries[row];
        if (trace_row == n && i == j) {
            trace_row = row;
            continue;
        }
        for (SparseMatrix::InnerIterator it(heff, static_cast<Eigen::Index>(i)); it; ++it)
            add(row, static_cast<std::size_t>(it.col()), j, mi * it.value());
        for (SparseMatrix::InnerIterator it(heff, static_cast<Eigen::Index>(j)); it; ++it)
            add(row, i, static_cast<std::size_t>(it.col()), -mi * std::conj(it.value()));
        for (const auto& ch : l.channels())
            for (SparseMatrix::InnerIterator a(ch.op, static_cast<Eigen::Index>(i)); a; ++a)
                for (SparseMatrix::InnerIterator b(ch.op, static_cast<Eigen::Index>(j)); b; ++b)
                    add(row, static_cast<std::size_t>(a.col()), static_cast<std::size_t>(b.col()),
                        2.0 * ch.rate * a.value() * std::conj(b.value()));
    }
    if (trace_row == n) throw NumericalError("fock direct solve: no diagonal entry to carry the trace");
    for (std::size_t row = 0; row < n; ++row)
        if (entries[row].first == entries[row].second) trip.emplace_back(static_cast<int>(trace_row), static_cast<int>(row), cplx(1.0));

    Eigen::SparseMatrix<cplx> m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    m.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<cplx>, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(m);
    if (lu.info() != Eigen::Success) throw NumericalError("fock direct solve: factorization failed (steady state not unique?)");
    ComplexVector rhs = ComplexVector::Zero(static_cast<Eigen::Index>(n));
    rhs(static_cast<Eigen::Index>(trace_row)) = 1.0;
    const ComplexVector x = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !x.allFinite()) throw NumericalError("fock direct solve: back substitution failed");

    ComplexMatrix rho = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t k = 0; k < n; ++k)
        rho(static_cast<Eigen::Index>(entries[k].first), static_cast<Eigen::Index>(entries[k].second)) = x(static_cast<Eigen::Index>(k));
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace();
    return {std::move(rho), l.dims()};
}

inline FockState solve_steady(const Liouvillian& l) { return solve_steady(l, detect_layout(l)); }

}  // namespace tmsq::fock
