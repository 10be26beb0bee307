// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "crsp/common.hpp"
#include "crsp/graph.hpp"

namespace crsp {

/// Multi-view stochastic block model. Nodes split into k near-equal
/// clusters; in each of m independent views an intra-cluster pair gets an
/// edge with probability c/n and an inter-cluster pair with probability
/// c(1-lambda)/n, unit weights. Note c is the probability scale, not the
/// expected degree: that is c(1 + (1-lambda)(k-1))/k.
struct SbmParams {
    int n = 0;
    int k = 0;
    double c = 0.0;
    double lambda = 0.0;
    int m = 1;
    std::uint64_t seed = 0;

    void check() const;
};

/// Raw sample: views before any culling, plus ground-truth labels.
/// Randomness is drawn per view from substream `view_index` of the seed, so
/// increasing m extends the list without perturbing earlier views.
std::pair<std::vector<ViewAffinity>, std::vector<int>> generate_sbm_views(const SbmParams& params);

struct SbmSample {
    MultiViewGraph graph;
    std::vector<int> labels;  ///< ground truth, restricted to survivors
};

/// generate_sbm_views followed by cull_disconnected(rule); labels restricted
/// to the surviving nodes.
SbmSample generate_sbm(const SbmParams& params, CullRule rule = CullRule::EveryView);

/// Circular void in the (t, h) parameter plane of the Swiss roll.
struct Hole {
    double center_t = 0.0;
    double center_h = 0.0;
    double radius = 0.0;
};

/// Demo configuration: two holes, mirroring the classic two-hole test case.
std::vector<Hole> default_swiss_roll_holes();

struct PointCloud3D {
    Matrix points;       ///< n x 3
    Vector node_params;  ///< spiral parameter t per point, for coloring/grouping
};

inline constexpr double kSwissRollTMin = 1.5 * 3.14159265358979323846;
inline constexpr double kSwissRollTMax = 4.5 * 3.14159265358979323846;
inline constexpr double kSwissRollHeight = 21.0;

/// Sample (t, h) uniformly from the parameter rectangle minus the holes
/// (rejection sampling) and wrap into the spiral (t cos t, h, t sin t).
PointCloud3D generate_swiss_roll(int n, const std::vector<Hole>& holes, std::uint64_t seed);

/// For each angle (radians, rotation about the vertical y-axis), rotate the
/// cloud and drop the depth coordinate, giving an n x 2 feature matrix per
/// view.
std::vector<Matrix> project_views(const PointCloud3D& cloud, const std::vector<double>& angles);

}  // namespace crsp
