#include "mobring/hermitian_eigen.hpp"

#include "mobring/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mobring {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kHermitianTol = 1e-12;
constexpr double kOffDiagonalTol = 1e-12;

double off_diagonal_norm(const CMatrix& a) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            if (i != j) sum += std::norm(a(i, j));
        }
    }
    return std::sqrt(sum);
}

// Zeroes a(p, q) with the unitary V whose p/q columns are
//   v_p = c e_p - s e^{-i phi} e_q,   v_q = s e^{i phi} e_p + c e_q,
// where a(p, q) = r e^{i phi}; applies a <- V^dagger a V.
void rotate(CMatrix& a, Eigen::Index p, Eigen::Index q) {
    const cplx apq = a(p, q);
    const double r = std::abs(apq);
    if (r == 0.0) return;
    const cplx phase = apq / r;
    const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * r);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;
    const cplx s_fwd = s * phase;             // s e^{i phi}
    const cplx s_bwd = s * std::conj(phase);  // s e^{-i phi}

    const Eigen::Index n = a.rows();
    for (Eigen::Index k = 0; k < n; ++k) {
        const cplx akp = a(k, p);
        const cplx akq = a(k, q);
        a(k, p) = c * akp - s_bwd * akq;
        a(k, q) = s_fwd * akp + c * akq;
    }
    for (Eigen::Index k = 0; k < n; ++k) {
        const cplx apk = a(p, k);
        const cplx aqk = a(q, k);
        a(p, k) = c * apk - s_fwd * aqk;
        a(q, k) = s_bwd * apk + c * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = a(p, p).real();
    a(q, q) = a(q, q).real();
}

}  // namespace

std::vector<double> dense_hermitian_eigenvalues(const CMatrix& matrix) {
    if (matrix.rows() != matrix.cols()) {
        throw ValidationError("dense_hermitian_eigenvalues: matrix is not square");
    }
    const Eigen::Index n = matrix.rows();
    if (n > kMaxJacobiDimension) {
        throw ValidationError("dense_hermitian_eigenvalues: dimension " + std::to_string(n) +
                              " exceeds " + std::to_string(kMaxJacobiDimension));
    }
    if (n == 0) return {};

    const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
    const double asym = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
    if (asym > kHermitianTol * scale) {
        throw ValidationError("dense_hermitian_eigenvalues: matrix is not Hermitian (max |A - A^H| = " +
                              std::to_string(asym) + ")");
    }

    CMatrix a = 0.5 * (matrix + matrix.adjoint());
    const double target = kOffDiagonalTol * a.norm();

    bool converged = off_diagonal_norm(a) <= target;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                rotate(a, p, q);
            }
        }
        converged = off_diagonal_norm(a) <= target;
    }
    if (!converged) {
        throw NumericalError("dense_hermitian_eigenvalues: Jacobi sweeps did not converge");
    }

    std::vector<double> values(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) values[static_cast<std::size_t>(i)] = a(i, i).real();
    std::sort(values.begin(), values.end());
    return values;
}

}  // namespace mobring
