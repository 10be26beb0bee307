// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "crsp/common.hpp"

namespace crsp {

/// Affinities below this are treated as "no edge": anything smaller has no
/// finite reciprocal cost.
inline constexpr double kMinAffinity = 1e-300;

/// One view of a graph: a square matrix of nonnegative affinities, zero
/// meaning no edge. Self-loops are stripped on construction and entries
/// below kMinAffinity are flushed to zero; everything else is diagnosed by
/// validate_view rather than rejected here, so that broken inputs can be
/// loaded, inspected and reported.
class ViewAffinity {
public:
    explicit ViewAffinity(Matrix entries);

    int size() const { return static_cast<int>(entries_.rows()); }
    const Matrix& matrix() const { return entries_; }

private:
    Matrix entries_;
};

/// m affinity views over one shared node set.
class MultiViewGraph {
public:
    explicit MultiViewGraph(std::vector<ViewAffinity> views, std::vector<std::string> node_ids = {});

    int node_count() const { return views_.front().size(); }
    int view_count() const { return static_cast<int>(views_.size()); }
    const ViewAffinity& view(int i) const { return views_.at(static_cast<std::size_t>(i)); }
    const std::vector<ViewAffinity>& views() const { return views_; }
    const std::vector<std::string>& node_ids() const { return node_ids_; }

private:
    std::vector<ViewAffinity> views_;
    std::vector<std::string> node_ids_;
};

/// Diagnostic result of checking one affinity matrix. Passing means the
/// matrix is a valid, connected, undirected view.
struct ValidationReport {
    bool square = true;
    long negative_entries = 0;
    long nonfinite_entries = 0;
    bool symmetric = true;
    bool connected = true;
    int component_count = 1;
    std::vector<int> zero_degree_nodes;

    bool passed() const {
        return square && negative_entries == 0 && nonfinite_entries == 0 && symmetric &&
               connected && zero_degree_nodes.empty();
    }
    std::string summary() const;
};

ValidationReport validate_affinity(const Matrix& a);
ValidationReport validate_view(const ViewAffinity& view);

/// Connected components of the undirected support of nonzero entries.
/// Returns (component label per node, component count). Labels are assigned
/// in order of first appearance scanning from node 0.
std::pair<std::vector<int>, int> connected_components(const Matrix& a);

/// Kernel bandwidth rule for gaussian_affinity.
class Bandwidth {
public:
    static Bandwidth median() { return Bandwidth(true, 0.0); }
    static Bandwidth fixed(double sigma) { return Bandwidth(false, sigma); }

    bool is_median() const { return median_; }
    double sigma() const { return sigma_; }

private:
    Bandwidth(bool median, double sigma) : median_(median), sigma_(sigma) {}
    bool median_;
    double sigma_;
};

/// a_ij = exp(-|x_i - x_j|^2 / (2 sigma^2)) with zero diagonal. In median
/// mode sigma is the median of the n(n-1)/2 pairwise Euclidean distances.
ViewAffinity gaussian_affinity(const Matrix& features, const Bandwidth& bandwidth);

/// Row-stochastic transition matrix: each row of the affinity matrix divided
/// by its weighted degree. Throws on zero-degree rows.
Matrix transition_matrix(const ViewAffinity& view);

/// Edge costs c_ij = 1 / a_ij on the edge support. Positions without an edge
/// hold 0 and carry no cost; they are never combined with a nonzero
/// transition probability.
Matrix cost_matrix(const ViewAffinity& view);

/// Reference transition matrix and matching edge costs, the input pair of
/// the RSP computation. Support of `cost` (entries > 0) equals the support
/// of `p_ref`.
struct RspInputs {
    Matrix p_ref;
    Matrix cost;

    static RspInputs from_view(const ViewAffinity& view);
    int size() const { return static_cast<int>(p_ref.rows()); }
    /// Throws ValidationError unless rows of p_ref sum to 1 within 1e-12 and
    /// costs are positive and finite exactly on the support.
    void check() const;
};

/// Node-removal policy used to make a multi-view graph usable.
///  - EveryView: iteratively keep only the largest connected component of
///    each view until every view is connected on the survivors. Guarantees
///    the strongest precondition but can be destructive on sparse views.
///  - UnionComponent: keep the largest connected component of the union of
///    all views' supports. Individual views may stay disconnected or have
///    zero-degree nodes; the fused graph is still well defined.
enum class CullRule { EveryView, UnionComponent };

CullRule cull_rule_from_string(const std::string& name);
std::string cull_rule_to_string(CullRule rule);

/// Original indices (ascending) of the nodes kept by `rule`.
std::vector<int> cull_survivors(const MultiViewGraph& graph, CullRule rule = CullRule::EveryView);

/// Restriction of the graph to cull_survivors(graph, rule), node ids
/// preserved. Throws ValidationError if fewer than 2 nodes survive.
MultiViewGraph cull_disconnected(const MultiViewGraph& graph, CullRule rule = CullRule::EveryView);

/// Restriction of `graph` to the given (sorted, in-range) original indices.
MultiViewGraph restrict_graph(const MultiViewGraph& graph, const std::vector<int>& keep);

}  // namespace crsp
