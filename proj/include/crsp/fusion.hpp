// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "crsp/graph.hpp"
#include "crsp/rsp.hpp"

namespace crsp {

/// Zero-entry rule when fusing views.
///  - Intersection: an edge survives only if present in every view (the
///    literal geometric mean); annihilates most edges of independent sparse
///    views.
///  - Union: the geometric mean is taken over the views that contain the
///    edge, so a path is omitted only for the views in which it does not
///    exist. Default.
enum class FusionMode { Intersection, Union };

FusionMode fusion_mode_from_string(const std::string& name);
std::string to_string(FusionMode mode);

/// Combined reference transition matrix: the elementwise s-th root of the
/// product of the supporting views' entries (s = m in intersection mode, s =
/// |supporting set| in union mode), then each row divided by its sum.
/// Rows of zeros in an input view are treated as "node absent from that
/// view"; a zero row in the *fused* result throws
/// ValidationError("fused graph has isolated node").
Matrix combine_probabilities(const std::vector<Matrix>& p_views, FusionMode mode);

/// Combined cost matrix: elementwise sum over the supporting set, with the
/// same support rule as combine_probabilities. Cost support is entries > 0.
Matrix combine_costs(const std::vector<Matrix>& cost_views, FusionMode mode);

/// C-RSP dissimilarity of a multi-view graph: per-view transition and cost
/// matrices, fused per the rules above, then the RSP computation on the
/// fused pair. Requires the fused support to be connected.
DissimilarityMatrix crsp_dissimilarity(const MultiViewGraph& graph, const RspParams& params,
                                       FusionMode mode = FusionMode::Union);

}  // namespace crsp
