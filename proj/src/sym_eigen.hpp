#pragma once

#include <vector>

#include "matrix.hpp"

namespace fz {

/// Eigen-decomposition of a symmetric matrix: s = V * diag(values) * V^T,
/// eigenvalues ascending, V orthogonal with eigenvectors as columns.
struct SymEig {
    std::vector<double> values;
    Matrix vectors;
};

/// Cyclic Jacobi rotations; converges when the off-diagonal Frobenius norm
/// drops below 1e-12 * ||s||_F. Input must be symmetric within 1e-9 and is
/// symmetrized internally as (S + S^T) / 2.
SymEig sym_eig(const Matrix& s);

/// V * diag(max(lambda, eps))^(-1/2) * V^T; the eigenvalue floor keeps
/// rank-deficient covariance estimates usable. Result is exactly symmetric.
Matrix sym_inv_sqrt(const Matrix& s, double eps = 1e-10);

} // namespace fz
