// SPDX-License-Identifier: Apache-2.0
#include "crsp/mds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace crsp {

EmbeddingCoordinates classical_mds(const DissimilarityMatrix& delta, int dim) {
    const int n = delta.size();
    if (dim < 1 || dim > n - 1) {
        throw ValidationError("embedding dimension must lie in [1, n-1], got " +
                              std::to_string(dim));
    }

    const Matrix squared = delta.matrix().array().square();
    const Matrix centering = Matrix::Identity(n, n) - Matrix::Constant(n, n, 1.0 / n);
    Matrix gram = -0.5 * centering * squared * centering;
    gram = 0.5 * (gram + gram.transpose().eval());

    Eigen::SelfAdjointEigenSolver<Matrix> solver(gram);
    if (solver.info() != Eigen::Success) {
        throw NumericError("eigendecomposition of the centered Gram matrix failed");
    }
    const Vector& values = solver.eigenvalues();
    const Matrix& vectors = solver.eigenvectors();

    // descending eigenvalues, ties by original (ascending-order) index
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return values(a) > values(b); });

    // eigenvalues below the noise floor of the decomposition count as zero,
    // so the all-ones null vector of J can never leak into the coordinates
    const double zero_tol = 1e-12 * std::max(1.0, std::abs(values(order.front())));

    EmbeddingCoordinates out;
    out.requested_dim = dim;
    for (int i = 0; i < n; ++i) {
        if (values(i) > zero_tol) ++out.positive_eigenvalues;
        else if (values(i) < -zero_tol) ++out.clamped_negative_eigenvalues;
    }

    out.coords = Matrix::Zero(n, dim);
    for (int j = 0; j < dim; ++j) {
        const double value = values(order[static_cast<std::size_t>(j)]);
        if (value <= zero_tol) continue;  // deficient column stays zero
        out.coords.col(j) = std::sqrt(value) * vectors.col(order[static_cast<std::size_t>(j)]);
    }
    return out;
}

}  // namespace crsp
