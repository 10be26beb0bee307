// SPDX-License-Identifier: Apache-2.0
#include "crsp/rsp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

namespace crsp {

void RspParams::check() const {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw ValidationError("beta must be positive and finite");
    }
    if (!(radius_tolerance >= 0.0 && radius_tolerance <= 0.1)) {
        throw ValidationError("radius_tolerance must lie in [0, 0.1]");
    }
}

DissimilarityMatrix DissimilarityMatrix::from_matrix(Matrix delta) {
    if (delta.rows() != delta.cols() || delta.rows() == 0) {
        throw ValidationError("dissimilarity matrix must be square and non-empty");
    }
    if (!delta.allFinite()) throw ValidationError("dissimilarity matrix has non-finite entries");
    const int n = static_cast<int>(delta.rows());
    for (int i = 0; i < n; ++i) {
        if (delta(i, i) != 0.0) throw ValidationError("dissimilarity diagonal must be zero");
        for (int j = i + 1; j < n; ++j) {
            const double a = delta(i, j);
            const double b = delta(j, i);
            if (a < 0.0 || b < 0.0) throw ValidationError("dissimilarity entries must be nonnegative");
            if (std::abs(a - b) > 1e-9 * std::max({std::abs(a), std::abs(b), 1.0})) {
                throw ValidationError("dissimilarity matrix is not symmetric at (" +
                                      std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }
    }
    return DissimilarityMatrix(std::move(delta));
}

SpectralRadiusBound spectral_radius_bound(const Matrix& w, double tol) {
    if (w.rows() != w.cols() || w.rows() == 0) {
        throw ValidationError("spectral radius needs a square non-empty matrix");
    }
    if (!w.allFinite() || w.minCoeff() < 0.0) {
        throw ValidationError("spectral radius bound requires a nonnegative finite matrix");
    }
    if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");

    const int n = static_cast<int>(w.rows());
    const double max_row_sum = w.rowwise().sum().maxCoeff();
    // shift large enough to separate the Perron root from mirrored spectra;
    // rho(W + eps I) = rho(W) + eps exactly for nonnegative W
    const double eps = 1e-3 * std::max(1.0, max_row_sum);

    Vector x = Vector::Constant(n, 1.0 / n);
    SpectralRadiusBound out;
    const int max_iterations = 200000;
    for (int it = 1; it <= max_iterations; ++it) {
        Vector y = w * x + eps * x;
        // Collatz-Wielandt bounds over the support of x. Entries of x that
        // underflowed to zero belong to sub-dominant blocks: rows with
        // y == 0 there constrain nothing, rows with y > 0 re-enter the
        // support next iteration and block convergence this round.
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (int i = 0; i < n; ++i) {
            if (x(i) == 0.0) {
                if (y(i) > 0.0) hi = std::numeric_limits<double>::infinity();
                continue;
            }
            const double r = y(i) / x(i);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        out.iterations = it;
        out.lower = std::max(0.0, lo - eps);
        out.upper = hi - eps;
        if (hi - lo <= 2.0 * tol) {
            out.estimate = 0.5 * (lo + hi) - eps;
            out.converged = true;
            return out;
        }
        x = y / y.sum();
    }
    // conservative failure: report the certified interval, flag divergence
    out.estimate = out.upper;
    out.converged = false;
    return out;
}

namespace {

constexpr double kRadiusEstimateTol = 1e-9;
constexpr double kMinFundamentalEntry = 1e-300;

std::string condition_hint(const Eigen::PartialPivLU<Matrix>& lu) {
    std::ostringstream out;
    out << " (rcond ~ " << lu.rcond() << ")";
    return out.str();
}

}  // namespace

DissimilarityMatrix rsp_dissimilarity(const RspInputs& inputs, const RspParams& params) {
    params.check();
    inputs.check();
    const int n = inputs.size();
    const Matrix& p = inputs.p_ref;
    const Matrix& c = inputs.cost;

    Matrix w = (p.array() > 0.0)
                   .select(p.array() * (-params.beta * c.array()).exp(), Matrix::Zero(n, n));

    // cheap sufficient condition first: rho(W) <= max row sum
    const double max_row_sum = w.rowwise().sum().maxCoeff();
    if (max_row_sum >= 1.0) {
        const SpectralRadiusBound rho = spectral_radius_bound(w, kRadiusEstimateTol);
        if (!rho.converged || rho.estimate >= 1.0 - params.radius_tolerance) {
            std::ostringstream msg;
            msg << "will not converge: spectral radius of W is ";
            if (rho.converged) msg << rho.estimate;
            else msg << ">= " << rho.lower << " (power iteration did not settle)";
            throw NumericError(msg.str());
        }
    }

    Eigen::PartialPivLU<Matrix> lu(Matrix::Identity(n, n) - w);
    Matrix z = lu.solve(Matrix::Identity(n, n));
    if (!z.allFinite()) {
        throw NumericError("(I - W) is numerically singular" + condition_hint(lu));
    }
    if (z.minCoeff() < kMinFundamentalEntry) {
        throw NumericError("fundamental matrix has vanishing entries; graph disconnected or "
                           "beta too large" + condition_hint(lu));
    }

    const Matrix cw = c.cwiseProduct(w);
    Matrix s = lu.solve(cw * z);  // = Z (C o W) Z
    s.array() /= z.array();
    if (!s.allFinite()) {
        throw NumericError("expected-cost matrix has non-finite entries" + condition_hint(lu));
    }

    const Vector diag_s = s.diagonal();
    Matrix cbar = s - Vector::Ones(n) * diag_s.transpose();
    Matrix delta = 0.5 * (cbar + cbar.transpose());

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (!(delta(i, j) > 0.0)) {
                throw NumericError("nonpositive dissimilarity between " + std::to_string(i) +
                                   " and " + std::to_string(j) +
                                   "; input support may be disconnected");
            }
        }
    }
    return DissimilarityMatrix::from_matrix(std::move(delta));
}

Matrix shortest_path_oracle(const RspInputs& inputs) {
    inputs.check();
    const int n = inputs.size();
    const Matrix& cost = inputs.cost;
    constexpr double inf = std::numeric_limits<double>::infinity();

    Matrix dist = Matrix::Constant(n, n, inf);
    using Item = std::pair<double, int>;
    for (int s = 0; s < n; ++s) {
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
        dist(s, s) = 0.0;
        queue.emplace(0.0, s);
        while (!queue.empty()) {
            auto [d, u] = queue.top();
            queue.pop();
            if (d > dist(s, u)) continue;
            for (int v = 0; v < n; ++v) {
                if (cost(u, v) <= 0.0) continue;
                const double nd = d + cost(u, v);
                if (nd < dist(s, v)) {
                    dist(s, v) = nd;
                    queue.emplace(nd, v);
                }
            }
        }
        for (int t = 0; t < n; ++t) {
            if (!std::isfinite(dist(s, t))) {
                throw ValidationError("graph disconnected: no path from " + std::to_string(s) +
                                      " to " + std::to_string(t));
            }
        }
    }
    return dist;
}

Matrix commute_time_oracle(const ViewAffinity& view) {
    const RspInputs inputs = RspInputs::from_view(view);
    const int n = inputs.size();
    const Matrix& p = inputs.p_ref;
    const Matrix& c = inputs.cost;

    // expected one-step cost from each node
    Vector step_cost = Vector::Zero(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (p(i, j) > 0.0) step_cost(i) += p(i, j) * c(i, j);

    Matrix hitting = Matrix::Zero(n, n);
    for (int t = 0; t < n; ++t) {
        // first-step equations on the non-target nodes: (I - Q) h = r
        Matrix q(n - 1, n - 1);
        Vector r(n - 1);
        int row = 0;
        for (int i = 0; i < n; ++i) {
            if (i == t) continue;
            int col = 0;
            for (int j = 0; j < n; ++j) {
                if (j == t) continue;
                q(row, col++) = p(i, j);
            }
            r(row++) = step_cost(i);
        }
        Eigen::PartialPivLU<Matrix> lu(Matrix::Identity(n - 1, n - 1) - q);
        Vector h = lu.solve(r);
        if (!h.allFinite()) {
            throw NumericError("hitting-cost system is singular; view must be connected");
        }
        row = 0;
        for (int i = 0; i < n; ++i)
            if (i != t) hitting(i, t) = h(row++);
    }
    return 0.5 * (hitting + hitting.transpose());
}

}  // namespace crsp
