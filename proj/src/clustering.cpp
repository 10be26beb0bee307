// SPDX-License-Identifier: Apache-2.0
#include "crsp/clustering.hpp"

#include <cmath>
#include <limits>

#include "crsp/rng.hpp"

namespace crsp {

Matrix affinity_from_dissimilarity(const DissimilarityMatrix& delta) {
    const int n = delta.size();
    const Matrix& d = delta.matrix();
    Matrix affinity = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (d(i, j) <= 0.0) {
                throw ValidationError("degenerate dissimilarity: zero off-diagonal entry at (" +
                                      std::to_string(i) + "," + std::to_string(j) + ")");
            }
            affinity(i, j) = 1.0 / d(i, j);
        }
    }
    return affinity;
}

namespace {

struct LloydResult {
    std::vector<int> labels;
    double inertia = std::numeric_limits<double>::infinity();
};

int nearest_centroid(const Matrix& points, const Matrix& centroids, int i) {
    int best = 0;
    double best_d = (points.row(i) - centroids.row(0)).squaredNorm();
    for (int c = 1; c < centroids.rows(); ++c) {
        const double d = (points.row(i) - centroids.row(c)).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

Matrix kmeans_pp_init(const Matrix& points, int k, std::mt19937_64& gen) {
    const int n = static_cast<int>(points.rows());
    Matrix centroids(k, points.cols());
    centroids.row(0) = points.row(static_cast<int>(rng::below(gen, static_cast<std::uint64_t>(n))));

    Vector sq_dist(n);
    for (int i = 0; i < n; ++i) sq_dist(i) = (points.row(i) - centroids.row(0)).squaredNorm();

    for (int c = 1; c < k; ++c) {
        const double total = sq_dist.sum();
        int pick;
        if (total <= 0.0) {
            // all points coincide with chosen centroids
            pick = static_cast<int>(rng::below(gen, static_cast<std::uint64_t>(n)));
        } else {
            double u = rng::uniform01(gen) * total;
            pick = n - 1;
            for (int i = 0; i < n; ++i) {
                u -= sq_dist(i);
                if (u <= 0.0) {
                    pick = i;
                    break;
                }
            }
        }
        centroids.row(c) = points.row(pick);
        for (int i = 0; i < n; ++i) {
            sq_dist(i) = std::min(sq_dist(i), (points.row(i) - centroids.row(c)).squaredNorm());
        }
    }
    return centroids;
}

LloydResult lloyd(const Matrix& points, int k, std::mt19937_64& gen) {
    const int n = static_cast<int>(points.rows());
    Matrix centroids = kmeans_pp_init(points, k, gen);
    LloydResult result;
    result.labels.assign(static_cast<std::size_t>(n), 0);

    double prev_inertia = std::numeric_limits<double>::infinity();
    for (int iteration = 0; iteration < 300; ++iteration) {
        double inertia = 0.0;
        for (int i = 0; i < n; ++i) {
            const int c = nearest_centroid(points, centroids, i);
            result.labels[static_cast<std::size_t>(i)] = c;
            inertia += (points.row(i) - centroids.row(c)).squaredNorm();
        }
        result.inertia = inertia;

        Matrix sums = Matrix::Zero(k, points.cols());
        std::vector<int> counts(static_cast<std::size_t>(k), 0);
        for (int i = 0; i < n; ++i) {
            sums.row(result.labels[static_cast<std::size_t>(i)]) += points.row(i);
            ++counts[static_cast<std::size_t>(result.labels[static_cast<std::size_t>(i)])];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) {
                centroids.row(c) = sums.row(c) / counts[static_cast<std::size_t>(c)];
            } else {
                // reseed an empty cluster at the point farthest from its centroid
                int farthest = 0;
                double far_d = -1.0;
                for (int i = 0; i < n; ++i) {
                    const double d =
                        (points.row(i) - centroids.row(result.labels[static_cast<std::size_t>(i)]))
                            .squaredNorm();
                    if (d > far_d) {
                        far_d = d;
                        farthest = i;
                    }
                }
                centroids.row(c) = points.row(farthest);
            }
        }

        if (inertia == 0.0) break;
        if (std::isfinite(prev_inertia) && (prev_inertia - inertia) < 1e-8 * prev_inertia) break;
        prev_inertia = inertia;
    }
    return result;
}

}  // namespace

ClusterLabels kmeans(const Matrix& points, int k, std::uint64_t seed) {
    const int n = static_cast<int>(points.rows());
    if (k < 1 || k > n) throw ValidationError("k must lie in [1, n]");
    if (!points.allFinite()) throw ValidationError("points contain non-finite values");
    if (k == 1) return ClusterLabels{std::vector<int>(static_cast<std::size_t>(n), 0), 1};

    LloydResult best;
    for (std::uint64_t restart = 0; restart < 10; ++restart) {
        auto gen = rng::stream(seed, restart);
        LloydResult run = lloyd(points, k, gen);
        if (run.inertia < best.inertia) best = std::move(run);
    }
    return ClusterLabels{std::move(best.labels), k};
}

ClusterLabels spectral_clustering(const Matrix& affinity, int k, std::uint64_t seed) {
    const int n = static_cast<int>(affinity.rows());
    if (affinity.cols() != n || n == 0) throw ValidationError("affinity must be square");
    if (!affinity.allFinite() || affinity.minCoeff() < 0.0) {
        throw ValidationError("affinity must be nonnegative and finite");
    }
    if (k < 2 || k > n) throw ValidationError("cluster count must lie in [2, n]");
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (std::abs(affinity(i, j) - affinity(j, i)) >
                1e-9 * std::max({affinity(i, j), affinity(j, i), 1.0})) {
                throw ValidationError("affinity must be symmetric");
            }
        }
    }

    const Vector degree = affinity.rowwise().sum();
    for (int i = 0; i < n; ++i) {
        if (degree(i) <= 0.0) {
            throw ValidationError("zero-degree row " + std::to_string(i) + " in affinity");
        }
    }

    const Vector inv_sqrt = degree.array().rsqrt();
    Matrix laplacian = Matrix::Identity(n, n) -
                       Matrix(inv_sqrt.asDiagonal()) * affinity * Matrix(inv_sqrt.asDiagonal());
    laplacian = 0.5 * (laplacian + laplacian.transpose().eval());

    Eigen::SelfAdjointEigenSolver<Matrix> solver(laplacian);
    if (solver.info() != Eigen::Success) throw NumericError("Laplacian eigendecomposition failed");

    // bottom k eigenvectors, rows scaled to unit length
    Matrix embedding = solver.eigenvectors().leftCols(k);
    for (int i = 0; i < n; ++i) {
        const double norm = embedding.row(i).norm();
        if (norm > 0.0) embedding.row(i) /= norm;
    }
    return kmeans(embedding, k, seed);
}

}  // namespace crsp
