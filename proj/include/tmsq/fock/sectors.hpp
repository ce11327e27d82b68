#pragma once

// Charge sectors of a Liouvillian. A grading assigns every basis state the
// charge Q = sum_k w_k n_k (optionally mod m) such that H is charge neutral
// and every jump operator shifts the charge by a fixed amount. Density
// matrices without coherences between different charges then stay block
// diagonal, and the generator acts block by block.

#include "tmsq/fock/space.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

namespace tmsq::fock {

struct Grading {
    std::vector<int> weights;  // per factor
    int modulus = 0;           // 0: integer charge

    bool trivial() const {
        return std::all_of(weights.begin(), weights.end(), [](int w) { return w == 0; });
    }

    int reduce(long q) const {
        if (modulus == 0) return static_cast<int>(q);
        const long r = q % modulus;
        return static_cast<int>(r < 0 ? r + modulus : r);
    }
};

/// Basis permutation grouping states by charge.
class SectorLayout {
public:
    SectorLayout(const ProductSpace& space, Grading grading) : grading_(std::move(grading)) {
        if (grading_.weights.size() != space.n_factors()) throw DimensionError("SectorLayout: one weight per factor is required");
        charge_of_.resize(space.dimension());
        std::map<int, std::vector<std::size_t>> members;
        for (std::size_t s = 0; s < space.dimension(); ++s) {
            long q = 0;
            for (std::size_t k = 0; k < space.n_factors(); ++k)
                q += static_cast<long>(grading_.weights[k]) * static_cast<long>(space.local_index(s, k));
            charge_of_[s] = grading_.reduce(q);
            members[charge_of_[s]].push_back(s);
        }
        position_.resize(space.dimension());
        for (auto& [q, states] : members) {
            charges_.push_back(q);
            for (std::size_t i = 0; i < states.size(); ++i) position_[states[i]] = {charges_.size() - 1, i};
            states_.push_back(std::move(states));
        }
    }

    /// Single sector holding every state, in the original order.
    static SectorLayout trivial(const ProductSpace& space) { return SectorLayout(space, Grading{std::vector<int>(space.n_factors(), 0), 0}); }

    const Grading& grading() const { return grading_; }
    std::size_t n_sectors() const { return states_.size(); }
    int charge(std::size_t sector) const { return charges_[sector]; }
    const std::vector<std::size_t>& states(std::size_t sector) const { return states_[sector]; }
    int charge_of_state(std::size_t s) const { return charge_of_[s]; }
    std::size_t sector_of_state(std::size_t s) const { return position_[s].first; }
    std::size_t offset_of_state(std::size_t s) const { return position_[s].second; }

    /// Sector index holding charge q, or n_sectors() if empty.
    std::size_t find(int q) const {
        const auto it = std::lower_bound(charges_.begin(), charges_.end(), q);
        return (it != charges_.end() && *it == q) ? static_cast<std::size_t>(it - charges_.begin()) : n_sectors();
    }

    /// Number of stored density-matrix entries.
    std::size_t block_storage() const {
        std::size_t total = 0;
        for (const auto& s : states_) total += s.size() * s.size();
        return total;
    }

private:
    Grading grading_;
    std::vector<int> charge_of_;
    std::vector<int> charges_;
    std::vector<std::vector<std::size_t>> states_;
    std::vector<std::pair<std::size_t, std::size_t>> position_;
};

namespace detail {

/// Charge shift of `op` under `layout`, if homogeneous.
inline std::optional<int> charge_shift(const SparseMatrix& op, const SectorLayout& layout) {
    std::optional<int> shift;
    for (Eigen::Index r = 0; r < op.outerSize(); ++r)
        for (SparseMatrix::InnerIterator it(op, r); it; ++it) {
            if (it.value() == cplx{}) continue;
            const long diff = static_cast<long>(layout.charge_of_state(static_cast<std::size_t>(it.row()))) -
                              static_cast<long>(layout.charge_of_state(static_cast<std::size_t>(it.col())));
            const int d = layout.grading().reduce(diff);
            if (!shift) shift = d;
            else if (*shift != d) return std::nullopt;
        }
    return shift.value_or(0);
}

}  // namespace detail

/// Finest grading with weights in {-1, 0, 1} (integer charge) or {0, 1} (parity)
/// under which `neutral` operators conserve charge and `shifting` operators
/// have a definite shift. Returns the trivial grading if none exists.
inline Grading detect_grading(const ProductSpace& space, const std::vector<const SparseMatrix*>& neutral,
                              const std::vector<const SparseMatrix*>& shifting) {
    const auto n = space.n_factors();
    Grading best{std::vector<int>(n, 0), 0};
    std::size_t best_storage = space.dimension() * space.dimension();

    auto consider = [&](const Grading& g) {
        const SectorLayout layout(space, g);
        const std::size_t storage = layout.block_storage();
        if (storage >= best_storage) return;
        for (const auto* op : neutral) {
            const auto shift = detail::charge_shift(*op, layout);
            if (!shift || *shift != 0) return;
        }
        for (const auto* op : shifting)
            if (!detail::charge_shift(*op, layout)) return;
        best = g;
        best_storage = storage;
    };

    std::vector<int> w(n, -1);
    for (;;) {
        // canonical sign: first nonzero weight positive
        const auto first = std::find_if(w.begin(), w.end(), [](int x) { return x != 0; });
        if (first != w.end() && *first > 0) consider({w, 0});
        std::size_t k = 0;
        while (k < n && w[k] == 1) w[k++] = -1;
        if (k == n) break;
        ++w[k];
    }
    std::vector<int> p(n, 0);
    for (;;) {
        if (std::any_of(p.begin(), p.end(), [](int x) { return x != 0; })) consider({p, 2});
        std::size_t k = 0;
        while (k < n && p[k] == 1) p[k++] = 0;
        if (k == n) break;
        ++p[k];
    }
    return best;
}

}  // namespace tmsq::fock
