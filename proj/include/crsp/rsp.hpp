// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "crsp/common.hpp"
#include "crsp/graph.hpp"

namespace crsp {

/// Parameters of the randomized-shortest-path dissimilarity.
///
/// beta is the inverse temperature of the Gibbs reweighting of paths: large
/// beta concentrates the walk on minimum-cost paths, small beta approaches
/// the unbiased random walk. radius_tolerance is the safety margin of the
/// divergence guard on the spectral radius of W.
struct RspParams {
    double beta = 0.02;
    double radius_tolerance = 1e-6;

    void check() const;
};

/// Symmetric nonnegative dissimilarity matrix with zero diagonal.
class DissimilarityMatrix {
public:
    /// Validates: square, finite, nonnegative, diagonal exactly zero,
    /// symmetric within 1e-9 relative.
    static DissimilarityMatrix from_matrix(Matrix delta);

    int size() const { return static_cast<int>(delta_.rows()); }
    const Matrix& matrix() const { return delta_; }

private:
    explicit DissimilarityMatrix(Matrix delta) : delta_(std::move(delta)) {}
    Matrix delta_;
};

/// Certified estimate of the spectral radius of a nonnegative matrix.
struct SpectralRadiusBound {
    double estimate = 0.0;
    double lower = 0.0;      ///< certified lower bound on rho(W)
    double upper = 0.0;      ///< certified upper bound on rho(W)
    bool converged = false;  ///< false means: treat as rho >= 1
    int iterations = 0;
};

/// Power iteration with Collatz-Wielandt bounds on W shifted by a small
/// positive diagonal (the shift breaks reducibility and periodicity and is
/// subtracted back out exactly). On convergence |estimate - rho(W)| <= tol.
SpectralRadiusBound spectral_radius_bound(const Matrix& w, double tol);

/// RSP dissimilarity of a single view:
///
///   W = P_ref o exp(-beta C)        (elementwise, on the edge support)
///   Z = (I - W)^{-1}                (one LU factorization, n solves)
///   S = (Z [C o W] Z) / Z           (elementwise division)
///   Cbar = S - 1 d_S^T              (d_S = diag(S))
///   Delta = (Cbar + Cbar^T) / 2
///
/// Throws NumericError "will not converge" when the spectral-radius guard
/// fires, and NumericError with diagnostics if (I - W) is numerically
/// singular or any intermediate is non-finite.
DissimilarityMatrix rsp_dissimilarity(const RspInputs& inputs, const RspParams& params);

/// All-pairs minimal path costs (Dijkstra per source) on the support of
/// `inputs.cost`. Reference for the large-beta limit of the RSP
/// dissimilarity; kept independent of the matrix path above.
Matrix shortest_path_oracle(const RspInputs& inputs);

/// Symmetrized expected cost of the unbiased absorbing walk,
/// (h_{s->t} + h_{t->s}) / 2, from direct linear solves of the first-step
/// equations h = r + Q h per target. Reference for the small-beta limit; on
/// unit-cost graphs this is the symmetrized expected step count.
Matrix commute_time_oracle(const ViewAffinity& view);

}  // namespace crsp
