// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "crsp/common.hpp"
#include "crsp/rsp.hpp"

namespace crsp {

/// n x d coordinates from classical multidimensional scaling. Columns are
/// mean-centered. When the doubly centered Gram matrix has fewer than d
/// positive eigenvalues the missing columns are zero and `deficient` is set;
/// negative eigenvalues (non-Euclidean input) are clamped to zero and
/// counted.
struct EmbeddingCoordinates {
    Matrix coords;
    int requested_dim = 0;
    int positive_eigenvalues = 0;
    int clamped_negative_eigenvalues = 0;

    bool deficient() const { return positive_eigenvalues < requested_dim; }
};

/// Classical MDS: B = -1/2 J (Delta o Delta) J with J = I - 11^T/n,
/// eigendecompose B, scale the top-d eigenvectors by the square roots of
/// their (clamped) eigenvalues. Eigenvalues are ordered descending, ties by
/// original index.
EmbeddingCoordinates classical_mds(const DissimilarityMatrix& delta, int dim);

}  // namespace crsp
