#pragma once

#include <span>
#include <string>
#include <vector>

#include "mog3p/matrix.hpp"

namespace mog3p::baselines {

struct LinearProjection {
    std::vector<double> mean;         // d
    Matrix components;                // 2 x d, one direction per row
    std::vector<double> eigenvalues;  // 2, descending
    // Directions carrying signal: 2 for PCA, min(2, classes - 1, d) for MDA.
    std::size_t informative = 2;
};

struct EmbeddingResult {
    Matrix coords;                    // n x 2
    std::vector<double> eigenvalues;  // 2, descending
};

// Top-2 principal axes of the sample covariance. Each component's
// largest-magnitude entry is made positive.
LinearProjection pca_fit(const Matrix& x);

// Double-centred Gram matrix B = -1/2 J D^2 J of squared Euclidean distances.
Matrix double_centered_gram(const Matrix& x);

// Classical (Torgerson) MDS on Euclidean distances. Negative eigenvalues give
// zero coordinates.
EmbeddingResult mds_fit(const Matrix& x);

// Fisher discriminant directions from B v = lambda (W + eps I) v with
// eps = 1e-6 trace(W) / d, solved by Cholesky reduction. Rows are unit-norm.
LinearProjection mda_fit(const Matrix& x, std::span<const int> y);

// (x - mean) * components^T. Throws DimensionError on column mismatch.
Matrix apply(const LinearProjection& proj, const Matrix& x);

enum class Method { Pca, Mds, Mda };
Method method_from_string(const std::string& s);
std::string to_string(Method m);

}  // namespace mog3p::baselines
