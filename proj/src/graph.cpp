// SPDX-License-Identifier: Apache-2.0
#include "crsp/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace crsp {

ViewAffinity::ViewAffinity(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) {
        throw ValidationError("affinity matrix must be square, got " +
                              std::to_string(entries_.rows()) + "x" +
                              std::to_string(entries_.cols()));
    }
    if (entries_.rows() == 0) {
        throw ValidationError("affinity matrix is empty");
    }
    entries_.diagonal().setZero();  // self-loops stripped on ingest
    // sub-reciprocal affinities have no finite edge cost; treat as no edge
    entries_ = (entries_.array().abs() < kMinAffinity).select(0.0, entries_);
}

MultiViewGraph::MultiViewGraph(std::vector<ViewAffinity> views, std::vector<std::string> node_ids)
    : views_(std::move(views)), node_ids_(std::move(node_ids)) {
    if (views_.empty()) {
        throw ValidationError("multi-view graph needs at least one view");
    }
    const int n = views_.front().size();
    for (const ViewAffinity& v : views_) {
        if (v.size() != n) {
            throw ValidationError("view size mismatch: " + std::to_string(v.size()) + " vs " +
                                  std::to_string(n));
        }
    }
    if (node_ids_.empty()) {
        node_ids_.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) node_ids_.push_back(std::to_string(i));
    } else if (static_cast<int>(node_ids_.size()) != n) {
        throw ValidationError("node id count does not match node count");
    }
}

std::pair<std::vector<int>, int> connected_components(const Matrix& a) {
    const int n = static_cast<int>(a.rows());
    std::vector<int> comp(static_cast<std::size_t>(n), -1);
    int count = 0;
    std::vector<int> stack;
    for (int s = 0; s < n; ++s) {
        if (comp[static_cast<std::size_t>(s)] >= 0) continue;
        comp[static_cast<std::size_t>(s)] = count;
        stack.push_back(s);
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int v = 0; v < n; ++v) {
                if (comp[static_cast<std::size_t>(v)] < 0 && (a(u, v) != 0.0 || a(v, u) != 0.0)) {
                    comp[static_cast<std::size_t>(v)] = count;
                    stack.push_back(v);
                }
            }
        }
        ++count;
    }
    return {std::move(comp), count};
}

ValidationReport validate_affinity(const Matrix& a) {
    ValidationReport report;
    if (a.rows() != a.cols() || a.rows() == 0) {
        report.square = false;
        report.symmetric = false;
        report.connected = false;
        report.component_count = 0;
        return report;
    }
    const int n = static_cast<int>(a.rows());
    for (int i = 0; i < n; ++i) {
        double degree = 0.0;
        for (int j = 0; j < n; ++j) {
            const double v = a(i, j);
            if (!std::isfinite(v)) ++report.nonfinite_entries;
            else if (v < 0.0) ++report.negative_entries;
            if (v != a(j, i)) report.symmetric = false;
            if (i != j) degree += std::abs(v);
        }
        if (degree == 0.0) report.zero_degree_nodes.push_back(i);
    }
    auto [comp, count] = connected_components(a);
    report.component_count = count;
    report.connected = (count == 1);
    return report;
}

ValidationReport validate_view(const ViewAffinity& view) { return validate_affinity(view.matrix()); }

std::string ValidationReport::summary() const {
    if (passed()) return "ok";
    std::ostringstream out;
    const char* sep = "";
    auto add = [&](const std::string& s) {
        out << sep << s;
        sep = "; ";
    };
    if (!square) add("not square");
    if (negative_entries > 0) add(std::to_string(negative_entries) + " negative entries");
    if (nonfinite_entries > 0) add(std::to_string(nonfinite_entries) + " non-finite entries");
    if (!symmetric) add("asymmetric");
    if (!connected) add("disconnected (" + std::to_string(component_count) + " components)");
    if (!zero_degree_nodes.empty())
        add(std::to_string(zero_degree_nodes.size()) + " zero-degree nodes");
    return out.str();
}

ViewAffinity gaussian_affinity(const Matrix& features, const Bandwidth& bandwidth) {
    const int n = static_cast<int>(features.rows());
    if (n < 2) throw ValidationError("gaussian affinity needs at least 2 points");
    if (!features.allFinite()) throw ValidationError("features contain non-finite values");

    Matrix sq_dist(n, n);
    sq_dist.setZero();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double d2 = (features.row(i) - features.row(j)).squaredNorm();
            sq_dist(i, j) = d2;
            sq_dist(j, i) = d2;
        }
    }

    double sigma;
    if (bandwidth.is_median()) {
        std::vector<double> dists;
        dists.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) dists.push_back(std::sqrt(sq_dist(i, j)));
        std::sort(dists.begin(), dists.end());
        const std::size_t mid = dists.size() / 2;
        sigma = (dists.size() % 2 == 1) ? dists[mid] : 0.5 * (dists[mid - 1] + dists[mid]);
        if (sigma == 0.0) throw ValidationError("degenerate bandwidth: median pairwise distance is 0");
    } else {
        sigma = bandwidth.sigma();
        if (!(sigma > 0.0)) throw ValidationError("fixed bandwidth must be positive");
    }

    Matrix a = (-sq_dist.array() / (2.0 * sigma * sigma)).exp();
    a.diagonal().setZero();
    return ViewAffinity(std::move(a));
}

Matrix transition_matrix(const ViewAffinity& view) {
    const Matrix& a = view.matrix();
    if (!a.allFinite() || a.minCoeff() < 0.0) {
        throw ValidationError("affinity has negative or non-finite entries");
    }
    const Vector degree = a.rowwise().sum();
    for (int i = 0; i < view.size(); ++i) {
        if (degree(i) <= 0.0) {
            throw ValidationError("isolated node: row " + std::to_string(i) + " has zero degree");
        }
    }
    return degree.cwiseInverse().asDiagonal() * a;
}

Matrix cost_matrix(const ViewAffinity& view) {
    const Matrix& a = view.matrix();
    return (a.array() > 0.0).select(a.cwiseInverse(), Matrix::Zero(a.rows(), a.cols()));
}

RspInputs RspInputs::from_view(const ViewAffinity& view) {
    return RspInputs{transition_matrix(view), cost_matrix(view)};
}

void RspInputs::check() const {
    if (p_ref.rows() != p_ref.cols() || cost.rows() != cost.cols() ||
        p_ref.rows() != cost.rows()) {
        throw ValidationError("transition and cost matrices must be square with equal size");
    }
    if (!p_ref.allFinite()) throw ValidationError("transition matrix has non-finite entries");
    const int n = size();
    for (int i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (int j = 0; j < n; ++j) {
            const double p = p_ref(i, j);
            const double c = cost(i, j);
            if (p < 0.0) throw ValidationError("negative transition probability");
            if (p > 0.0 && !(c > 0.0 && std::isfinite(c))) {
                throw ValidationError("edge (" + std::to_string(i) + "," + std::to_string(j) +
                                      ") lacks a positive finite cost");
            }
            if (p == 0.0 && c != 0.0) {
                throw ValidationError("cost present off the edge support at (" +
                                      std::to_string(i) + "," + std::to_string(j) + ")");
            }
            row_sum += p;
        }
        if (std::abs(row_sum - 1.0) > 1e-12) {
            throw ValidationError("transition row " + std::to_string(i) +
                                  " does not sum to 1 (got " + std::to_string(row_sum) + ")");
        }
    }
}

namespace {

// Largest component on the given matrix; ties go to the component holding the
// smallest node index so culling is deterministic.
std::vector<bool> largest_component_mask(const Matrix& a) {
    auto [comp, count] = connected_components(a);
    const int n = static_cast<int>(a.rows());
    std::vector<int> sizes(static_cast<std::size_t>(count), 0);
    for (int c : comp) ++sizes[static_cast<std::size_t>(c)];
    // components are labeled in order of first appearance, so the first
    // maximal label is also the one containing the smallest node index
    const int best = static_cast<int>(
        std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    std::vector<bool> keep(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) keep[static_cast<std::size_t>(i)] = comp[static_cast<std::size_t>(i)] == best;
    return keep;
}

Matrix submatrix(const Matrix& a, const std::vector<int>& idx) {
    const int k = static_cast<int>(idx.size());
    Matrix out(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) out(i, j) = a(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    return out;
}

}  // namespace

CullRule cull_rule_from_string(const std::string& name) {
    if (name == "every-view") return CullRule::EveryView;
    if (name == "union") return CullRule::UnionComponent;
    throw ValidationError("unknown cull rule '" + name + "' (expected every-view or union)");
}

std::string cull_rule_to_string(CullRule rule) {
    return rule == CullRule::EveryView ? "every-view" : "union";
}

std::vector<int> cull_survivors(const MultiViewGraph& graph, CullRule rule) {
    std::vector<int> alive(static_cast<std::size_t>(graph.node_count()));
    std::iota(alive.begin(), alive.end(), 0);

    if (rule == CullRule::UnionComponent) {
        Matrix sum = Matrix::Zero(graph.node_count(), graph.node_count());
        for (const ViewAffinity& v : graph.views()) sum += v.matrix().cwiseAbs();
        std::vector<bool> keep = largest_component_mask(sum);
        std::vector<int> out;
        for (int i = 0; i < graph.node_count(); ++i)
            if (keep[static_cast<std::size_t>(i)]) out.push_back(i);
        return out;
    }

    // EveryView: intersect largest components view by view until stable.
    bool changed = true;
    while (changed && alive.size() >= 2) {
        changed = false;
        for (const ViewAffinity& v : graph.views()) {
            Matrix sub = submatrix(v.matrix(), alive);
            auto [comp, count] = connected_components(sub);
            if (count <= 1) continue;
            std::vector<bool> keep = largest_component_mask(sub);
            std::vector<int> next;
            next.reserve(alive.size());
            for (std::size_t i = 0; i < alive.size(); ++i)
                if (keep[i]) next.push_back(alive[i]);
            alive = std::move(next);
            changed = true;
            if (alive.size() < 2) break;
        }
    }
    return alive;
}

MultiViewGraph restrict_graph(const MultiViewGraph& graph, const std::vector<int>& keep) {
    for (int i : keep) {
        if (i < 0 || i >= graph.node_count()) {
            throw ValidationError("restriction index " + std::to_string(i) + " out of range");
        }
    }
    std::vector<ViewAffinity> views;
    views.reserve(static_cast<std::size_t>(graph.view_count()));
    for (const ViewAffinity& v : graph.views()) views.emplace_back(submatrix(v.matrix(), keep));
    std::vector<std::string> ids;
    ids.reserve(keep.size());
    for (int i : keep) ids.push_back(graph.node_ids()[static_cast<std::size_t>(i)]);
    return MultiViewGraph(std::move(views), std::move(ids));
}

MultiViewGraph cull_disconnected(const MultiViewGraph& graph, CullRule rule) {
    std::vector<int> alive = cull_survivors(graph, rule);
    if (alive.size() < 2) {
        throw ValidationError("graph collapsed under culling: " + std::to_string(alive.size()) +
                              " nodes survive");
    }
    return restrict_graph(graph, alive);
}

}  // namespace crsp
