#pragma once

#include "tmsq/fock/space.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>
#include <vector>

namespace tmsq::fock {

/// Density matrix over a truncated product basis.
struct FockState {
    ComplexMatrix rho;
    std::vector<std::size_t> dims;

    std::size_t dimension() const { return static_cast<std::size_t>(rho.rows()); }
    cplx trace() const { return rho.trace(); }

    double hermiticity_error() const { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }

    double min_eigenvalue() const {
        const ComplexMatrix h = 0.5 * (rho + rho.adjoint());
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
        return solver.eigenvalues().minCoeff();
    }

    void validate(double trace_tol = 1e-8, double herm_tol = 1e-10, double pos_tol = 1e-8) const {
        std::ostringstream msg;
        if (std::abs(trace() - 1.0) > trace_tol) msg << "trace " << trace() << " differs from 1; ";
        if (hermiticity_error() > herm_tol) msg << "not Hermitian (" << hermiticity_error() << "); ";
        const double lo = min_eigenvalue();
        if (lo < -pos_tol) msg << "negative eigenvalue " << lo << "; ";
        if (!msg.str().empty()) throw NumericalError("FockState: " + msg.str());
    }

    static FockState pure(const ComplexVector& psi, std::vector<std::size_t> dims) {
        const ComplexVector unit = psi / psi.norm();
        return {unit * unit.adjoint(), std::move(dims)};
    }

    /// |n_1, ..., n_k>
    static FockState number(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& occupations) {
        ProductSpace space(dims);
        ComplexVector psi = ComplexVector::Zero(static_cast<Eigen::Index>(space.dimension()));
        psi(static_cast<Eigen::Index>(space.index_of(occupations))) = 1.0;
        return pure(psi, dims);
    }

    static FockState vacuum(const std::vector<std::size_t>& dims) {
        return number(dims, std::vector<std::size_t>(dims.size(), 0));
    }

    /// Coherent amplitude `alpha` on one mode (truncated and renormalized), vacuum elsewhere.
    static FockState coherent(const std::vector<std::size_t>& dims, std::size_t mode, cplx alpha) {
        ProductSpace space(dims);
        ComplexVector psi = ComplexVector::Zero(static_cast<Eigen::Index>(space.dimension()));
        std::vector<std::size_t> locals(dims.size(), 0);
        cplx amplitude = 1.0;
        for (std::size_t n = 0; n < dims.at(mode); ++n) {
            if (n > 0) amplitude *= alpha / std::sqrt(static_cast<double>(n));
            locals[mode] = n;
            psi(static_cast<Eigen::Index>(space.index_of(locals))) = amplitude;
        }
        return pure(psi, dims);
    }
};

}  // namespace tmsq::fock
