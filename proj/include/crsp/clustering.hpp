// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "crsp/common.hpp"
#include "crsp/rsp.hpp"

namespace crsp {

/// A partition of n nodes into k clusters, labels in [0, k).
struct ClusterLabels {
    std::vector<int> labels;
    int k = 0;
};

/// Elementwise reciprocal of the off-diagonal dissimilarities, diagonal 0.
/// A zero off-diagonal entry has no finite affinity and is rejected.
Matrix affinity_from_dissimilarity(const DissimilarityMatrix& delta);

/// Lloyd's algorithm with k-means++ seeding: best of 10 restarts by inertia,
/// each run iterating until the relative inertia change drops below 1e-8 or
/// 300 iterations. An emptied cluster is reseeded at the point farthest from
/// its centroid. Deterministic given seed.
ClusterLabels kmeans(const Matrix& points, int k, std::uint64_t seed);

/// Spectral clustering on a symmetric nonnegative affinity with zero
/// diagonal: bottom-k eigenvectors of L_sym = I - D^{-1/2} A D^{-1/2}, rows
/// normalized to unit length, then kmeans on the rows.
ClusterLabels spectral_clustering(const Matrix& affinity, int k, std::uint64_t seed);

}  // namespace crsp
