#pragma once

// Test-only dense Fock-space helpers. Deliberately independent of
// tmsq::fock: operators come from explicit Kronecker products and the
// superoperators from vec(A rho B) = (A kron B^T) vec_row(rho).

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <complex>
#include <vector>

namespace testsupport {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline Mat dense_annihilator(int cutoff) {
    Mat a = Mat::Zero(cutoff + 1, cutoff + 1);
    for (int n = 1; n <= cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

/// Annihilator of `mode` embedded in the product space, mode 0 most significant.
inline Mat embed(const std::vector<int>& cutoffs, int mode, const Mat& op) {
    Mat out = Mat::Identity(1, 1);
    for (int k = 0; k < static_cast<int>(cutoffs.size()); ++k) {
        const Mat factor = (k == mode) ? op : Mat::Identity(cutoffs[k] + 1, cutoffs[k] + 1);
        Mat next = Eigen::kroneckerProduct(out, factor).eval();
        out = next;
    }
    return out;
}

inline Mat mode_op(const std::vector<int>& cutoffs, int mode) {
    return embed(cutoffs, mode, dense_annihilator(cutoffs[mode]));
}

/// Superoperator of rho -> A rho B on row-major vectorized rho.
inline Mat sandwich(const Mat& A, const Mat& B) {
    return Eigen::kroneckerProduct(A, B.transpose()).eval();
}

inline Mat dissipator(const Mat& L) {
    const Mat LdL = L.adjoint() * L;
    const Mat I = Mat::Identity(L.rows(), L.cols());
    return 2.0 * sandwich(L, L.adjoint()) - sandwich(LdL, I) - sandwich(I, LdL);
}

inline Mat commutator_super(const Mat& H) {
    const Mat I = Mat::Identity(H.rows(), H.cols());
    return cplx(0.0, -1.0) * (sandwich(H, I) - sandwich(I, H));
}

/// kappa D[a_s] + kappa D[a_t] - 2 kappa sqrt(eta) ([a_t^dag, a_s rho] + [rho a_s^dag, a_t]), written out term by term.
inline Mat cascade_block(const Mat& as, const Mat& at, double kappa, double eta) {
    const Mat I = Mat::Identity(as.rows(), as.cols());
    const double c = 2.0 * kappa * std::sqrt(eta);
    Mat cross = sandwich(at.adjoint() * as, I) - sandwich(as, at.adjoint())  // [a_t^dag, a_s rho]
                + sandwich(I, as.adjoint() * at) - sandwich(at, as.adjoint());  // [rho a_s^dag, a_t]
    return kappa * dissipator(as) + kappa * dissipator(at) - c * cross;
}

inline Eigen::VectorXcd vec_row(const Mat& rho) {
    Eigen::VectorXcd v(rho.size());
    for (Eigen::Index i = 0; i < rho.rows(); ++i)
        for (Eigen::Index j = 0; j < rho.cols(); ++j) v(i * rho.cols() + j) = rho(i, j);
    return v;
}

inline Mat unvec_row(const Eigen::VectorXcd& v, Eigen::Index d) {
    Mat rho(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) rho(i, j) = v(i * d + j);
    return rho;
}

}  // namespace testsupport
