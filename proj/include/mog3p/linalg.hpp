#pragma once

#include <vector>

#include "mog3p/matrix.hpp"

namespace mog3p::linalg {

struct SymmetricEigen {
    std::vector<double> values;  // descending
    Matrix vectors;              // column j is the eigenvector for values[j]
    int sweeps = 0;
};

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Iterates until the
// off-diagonal Frobenius norm drops below `tol` (relative to the full norm) or
// `max_sweeps` is reached. Deterministic: fixed (p, q) sweep order.
SymmetricEigen jacobi_eigen(const Matrix& a, double tol = 1e-10, int max_sweeps = 100);

// Lower-triangular L with L * L^T = a. Throws DataError if a is not positive definite.
Matrix cholesky(const Matrix& a);

// Solves L x = b for lower-triangular L (in place on each column of b).
Matrix forward_substitute(const Matrix& lower, const Matrix& b);

// Solves L^T x = b for lower-triangular L.
Matrix backward_substitute_transposed(const Matrix& lower, const Matrix& b);

}  // namespace mog3p::linalg
