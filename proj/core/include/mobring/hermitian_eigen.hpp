#pragma once

#include "mobring/types.hpp"

#include <vector>

namespace mobring {

/// Largest matrix accepted by dense_hermitian_eigenvalues.
inline constexpr Eigen::Index kMaxJacobiDimension = 2048;

/// All eigenvalues of a Hermitian matrix, ascending, computed with cyclic
/// complex Jacobi rotations. Independent of any analytic band formula, so it
/// serves as the brute-force oracle for the ring spectrum.
///
/// Throws ValidationError if the input is not square, exceeds
/// kMaxJacobiDimension, or deviates from its conjugate transpose by more than
/// 1e-12 (relative to max(1, max |entry|)). Throws NumericalError if the
/// off-diagonal Frobenius norm is not driven below 1e-12 * ||input||_F within
/// the sweep cap.
std::vector<double> dense_hermitian_eigenvalues(const CMatrix& matrix);

}  // namespace mobring
