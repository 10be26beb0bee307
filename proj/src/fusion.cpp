// SPDX-License-Identifier: Apache-2.0
#include "crsp/fusion.hpp"

#include <cmath>

namespace crsp {

FusionMode fusion_mode_from_string(const std::string& name) {
    if (name == "union") return FusionMode::Union;
    if (name == "intersection") return FusionMode::Intersection;
    throw ValidationError("unknown fusion mode '" + name + "' (expected union or intersection)");
}

std::string to_string(FusionMode mode) {
    return mode == FusionMode::Union ? "union" : "intersection";
}

namespace {

void check_same_shape(const std::vector<Matrix>& views, const char* what) {
    if (views.empty()) throw ValidationError(std::string(what) + ": need at least one view");
    const Eigen::Index n = views.front().rows();
    for (const Matrix& v : views) {
        if (v.rows() != n || v.cols() != n) {
            throw ValidationError(std::string(what) + ": views must be square matrices of one size");
        }
        if (!v.allFinite() || v.minCoeff() < 0.0) {
            throw ValidationError(std::string(what) + ": entries must be finite and nonnegative");
        }
    }
}

}  // namespace

Matrix combine_probabilities(const std::vector<Matrix>& p_views, FusionMode mode) {
    check_same_shape(p_views, "combine_probabilities");
    const int m = static_cast<int>(p_views.size());
    const int n = static_cast<int>(p_views.front().rows());

    Matrix fused = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double product = 1.0;
            int supporting = 0;
            for (const Matrix& p : p_views) {
                if (p(i, j) > 0.0) {
                    product *= p(i, j);
                    ++supporting;
                }
            }
            if (supporting == 0) continue;
            if (mode == FusionMode::Intersection && supporting < m) continue;
            if (product >= 1e-300) {
                fused(i, j) = std::pow(product, 1.0 / supporting);
            } else {
                // the direct product underflowed; the geometric mean itself
                // is representable, so redo this entry in log space
                double log_sum = 0.0;
                for (const Matrix& p : p_views) {
                    if (p(i, j) > 0.0) log_sum += std::log(p(i, j));
                }
                fused(i, j) = std::exp(log_sum / supporting);
            }
        }
    }

    for (int i = 0; i < n; ++i) {
        const double row_sum = fused.row(i).sum();
        if (row_sum <= 0.0) {
            throw ValidationError("fused graph has isolated node " + std::to_string(i) +
                                  "; cull the graph or use union fusion");
        }
        fused.row(i) /= row_sum;
    }
    return fused;
}

Matrix combine_costs(const std::vector<Matrix>& cost_views, FusionMode mode) {
    check_same_shape(cost_views, "combine_costs");
    const int m = static_cast<int>(cost_views.size());
    const int n = static_cast<int>(cost_views.front().rows());

    Matrix fused = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double sum = 0.0;
            int supporting = 0;
            for (const Matrix& c : cost_views) {
                if (c(i, j) > 0.0) {
                    sum += c(i, j);
                    ++supporting;
                }
            }
            if (supporting == 0) continue;
            if (mode == FusionMode::Intersection && supporting < m) continue;
            fused(i, j) = sum;
        }
    }
    return fused;
}

namespace {

// Per-view transition matrix that leaves zero-degree rows at zero: such a
// node contributes no paths in that view, matching the union-fusion reading
// of missing edges.
Matrix transition_allowing_absent_nodes(const Matrix& a) {
    const int n = static_cast<int>(a.rows());
    Matrix p = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const double degree = a.row(i).sum();
        if (degree > 0.0) p.row(i) = a.row(i) / degree;
    }
    return p;
}

}  // namespace

DissimilarityMatrix crsp_dissimilarity(const MultiViewGraph& graph, const RspParams& params,
                                       FusionMode mode) {
    params.check();

    std::vector<Matrix> p_views;
    std::vector<Matrix> cost_views;
    p_views.reserve(static_cast<std::size_t>(graph.view_count()));
    cost_views.reserve(static_cast<std::size_t>(graph.view_count()));
    for (const ViewAffinity& view : graph.views()) {
        const Matrix& a = view.matrix();
        if (!a.allFinite() || a.minCoeff() < 0.0) {
            throw ValidationError("view has negative or non-finite affinities");
        }
        p_views.push_back(transition_allowing_absent_nodes(a));
        cost_views.push_back(cost_matrix(view));
    }

    RspInputs fused{combine_probabilities(p_views, mode), combine_costs(cost_views, mode)};

    auto [comp, count] = connected_components(fused.p_ref);
    if (count > 1) {
        throw ValidationError("fused graph disconnected: " + std::to_string(count) +
                              " components under " + to_string(mode) + " fusion");
    }
    return rsp_dissimilarity(fused, params);
}

}  // namespace crsp
