#pragma once

// Block-diagonal action of a Liouvillian on density matrices that carry no
// coherence between charge sectors.

#include "tmsq/fock/liouvillian.hpp"
#include "tmsq/fock/sectors.hpp"

#include <vector>

namespace tmsq::fock {

using BlockDensity = std::vector<ComplexMatrix>;

class SectorGenerator {
public:
    SectorGenerator(const Liouvillian& l, SectorLayout layout) : layout_(std::move(layout)) {
        const auto n_sec = layout_.n_sectors();
        SparseMatrix heff = l.hamiltonian();
        for (const auto& ch : l.channels()) heff -= cplx(0.0, ch.rate) * ch.number;
        heff_ = split_diagonal(heff);
        if (!heff_) throw ValidationError("SectorGenerator: Hamiltonian is not charge neutral under the layout");
        for (const auto& ch : l.channels()) {
            const auto shift = detail::charge_shift(ch.op, layout_);
            if (!shift) throw ValidationError("SectorGenerator: jump operator has no definite charge shift");
            for (std::size_t s = 0; s < n_sec; ++s) {
                const auto t = layout_.find(layout_.grading().reduce(static_cast<long>(layout_.charge(s)) + *shift));
                if (t == n_sec) continue;
                SparseMatrix block = extract(ch.op, t, s);
                if (block.nonZeros() == 0) continue;
                jumps_.push_back({t, s, ch.rate, std::move(block)});
            }
        }
    }

    const SectorLayout& layout() const { return layout_; }

    /// Largest entry of `rho` outside the sector blocks.
    double off_block(const ComplexMatrix& rho) const {
        double worst = 0.0;
        for (Eigen::Index r = 0; r < rho.rows(); ++r)
            for (Eigen::Index c = 0; c < rho.cols(); ++c)
                if (layout_.sector_of_state(static_cast<std::size_t>(r)) != layout_.sector_of_state(static_cast<std::size_t>(c)))
                    worst = std::max(worst, std::abs(rho(r, c)));
        return worst;
    }

    BlockDensity to_blocks(const ComplexMatrix& rho) const {
        BlockDensity out;
        for (std::size_t s = 0; s < layout_.n_sectors(); ++s) {
            const auto& st = layout_.states(s);
            const auto n = static_cast<Eigen::Index>(st.size());
            ComplexMatrix b(n, n);
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j)
                    b(i, j) = rho(static_cast<Eigen::Index>(st[static_cast<std::size_t>(i)]), static_cast<Eigen::Index>(st[static_cast<std::size_t>(j)]));
            out.push_back(std::move(b));
        }
        return out;
    }

    ComplexMatrix to_full(const BlockDensity& blocks) const {
        std::size_t d = 0;
        for (std::size_t s = 0; s < layout_.n_sectors(); ++s) d += layout_.states(s).size();
        ComplexMatrix rho = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        for (std::size_t s = 0; s < layout_.n_sectors(); ++s) {
            const auto& st = layout_.states(s);
            for (std::size_t i = 0; i < st.size(); ++i)
                for (std::size_t j = 0; j < st.size(); ++j)
                    rho(static_cast<Eigen::Index>(st[i]), static_cast<Eigen::Index>(st[j])) =
                        blocks[s](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
        return rho;
    }

    /// out = L(in) for Hermitian block densities.
    void apply(const BlockDensity& in, BlockDensity& out) const {
        out.resize(in.size());
        for (std::size_t s = 0; s < in.size(); ++s) {
            // K = -i H_eff rho, and the no-jump part is K + K^dag
            ComplexMatrix k = (*heff_)[s] * in[s];
            k *= cplx(0.0, -1.0);
            out[s] = k + k.adjoint();
        }
        for (const auto& j : jumps_) {
            const ComplexMatrix lr = j.op * in[j.source];
            const ComplexMatrix lrl = j.op * ComplexMatrix(lr.adjoint());
            out[j.target].noalias() += (2.0 * j.rate) * lrl.adjoint();
        }
    }

    static cplx trace(const BlockDensity& blocks) {
        cplx t = 0.0;
        for (const auto& b : blocks) t += b.trace();
        return t;
    }

private:
    struct BlockJump {
        std::size_t target;
        std::size_t source;
        double rate;
        SparseMatrix op;
    };

    SparseMatrix extract(const SparseMatrix& op, std::size_t target, std::size_t source) const {
        std::vector<Triplet> triplets;
        for (Eigen::Index r = 0; r < op.outerSize(); ++r) {
            const auto row = static_cast<std::size_t>(r);
            if (layout_.sector_of_state(row) != target) continue;
            for (SparseMatrix::InnerIterator it(op, r); it; ++it) {
                const auto col = static_cast<std::size_t>(it.col());
                if (layout_.sector_of_state(col) != source) continue;
                triplets.emplace_back(static_cast<int>(layout_.offset_of_state(row)), static_cast<int>(layout_.offset_of_state(col)), it.value());
            }
        }
        SparseMatrix block(static_cast<Eigen::Index>(layout_.states(target).size()), static_cast<Eigen::Index>(layout_.states(source).size()));
        block.setFromTriplets(triplets.begin(), triplets.end());
        return block;
    }

    std::optional<std::vector<SparseMatrix>> split_diagonal(const SparseMatrix& op) const {
        for (Eigen::Index r = 0; r < op.outerSize(); ++r)
            for (SparseMatrix::InnerIterator it(op, r); it; ++it)
                if (it.value() != cplx{} && layout_.sector_of_state(static_cast<std::size_t>(r)) != layout_.sector_of_state(static_cast<std::size_t>(it.col())))
                    return std::nullopt;
        std::vector<SparseMatrix> out;
        for (std::size_t s = 0; s < layout_.n_sectors(); ++s) out.push_back(extract(op, s, s));
        return out;
    }

    SectorLayout layout_;
    std::optional<std::vector<SparseMatrix>> heff_;
    std::vector<BlockJump> jumps_;
};

/// Finest sector layout of `l` (the trivial single sector when no grading exists).
inline SectorLayout detect_layout(const Liouvillian& l) {
    const ProductSpace space(l.dims());
    std::vector<const SparseMatrix*> shifting;
    for (const auto& ch : l.channels()) shifting.push_back(&ch.op);
    return SectorLayout(space, detect_grading(space, {&l.hamiltonian()}, shifting));
}

}  // namespace tmsq::fock
