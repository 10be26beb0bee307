// SPDX-License-Identifier: Apache-2.0
#include "crsp/datasets.hpp"

#include <cmath>
#include <string>

#include "crsp/rng.hpp"

namespace crsp {

void SbmParams::check() const {
    if (k < 2) throw ValidationError("SBM needs at least 2 clusters");
    if (n < k) throw ValidationError("SBM needs n >= k");
    if (!(c > 0.0)) throw ValidationError("SBM edge-density parameter c must be positive");
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw ValidationError("SBM lambda must lie in [0, 1]");
    if (m < 1) throw ValidationError("SBM needs at least one view");
    if (c / n > 1.0) throw ValidationError("intra-cluster probability c/n exceeds 1");
    if (c * (1.0 - lambda) / n > 1.0) {
        throw ValidationError("inter-cluster probability c(1-lambda)/n exceeds 1");
    }
}

std::pair<std::vector<ViewAffinity>, std::vector<int>> generate_sbm_views(const SbmParams& params) {
    params.check();
    const int n = params.n;

    // k near-equal contiguous clusters; the first n % k clusters get one extra node
    std::vector<int> labels;
    labels.reserve(static_cast<std::size_t>(n));
    const int base = n / params.k;
    const int extra = n % params.k;
    for (int cluster = 0; cluster < params.k; ++cluster) {
        const int size = base + (cluster < extra ? 1 : 0);
        labels.insert(labels.end(), static_cast<std::size_t>(size), cluster);
    }

    const double p_intra = params.c / n;
    const double p_inter = params.c * (1.0 - params.lambda) / n;

    std::vector<ViewAffinity> views;
    views.reserve(static_cast<std::size_t>(params.m));
    for (int view = 0; view < params.m; ++view) {
        auto gen = rng::stream(params.seed, static_cast<std::uint64_t>(view));
        Matrix a = Matrix::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const double p = labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)]
                                     ? p_intra
                                     : p_inter;
                if (rng::uniform01(gen) < p) {
                    a(i, j) = 1.0;
                    a(j, i) = 1.0;
                }
            }
        }
        views.emplace_back(std::move(a));
    }
    return {std::move(views), std::move(labels)};
}

SbmSample generate_sbm(const SbmParams& params, CullRule rule) {
    auto [views, labels] = generate_sbm_views(params);
    MultiViewGraph raw(std::move(views));
    const std::vector<int> survivors = cull_survivors(raw, rule);
    if (survivors.size() < 2) {
        throw ValidationError("graph collapsed under culling: " +
                              std::to_string(survivors.size()) + " nodes survive");
    }
    std::vector<int> kept_labels;
    kept_labels.reserve(survivors.size());
    for (int i : survivors) kept_labels.push_back(labels[static_cast<std::size_t>(i)]);
    return SbmSample{restrict_graph(raw, survivors), std::move(kept_labels)};
}

std::vector<Hole> default_swiss_roll_holes() {
    return {{2.5 * 3.14159265358979323846, 6.0, 2.0},
            {3.8 * 3.14159265358979323846, 15.0, 2.5}};
}

PointCloud3D generate_swiss_roll(int n, const std::vector<Hole>& holes, std::uint64_t seed) {
    if (n < 10) throw ValidationError("swiss roll needs at least 10 points");
    for (const Hole& hole : holes) {
        if (!(hole.radius > 0.0)) throw ValidationError("hole radius must be positive");
    }

    auto gen = rng::stream(seed, 0);
    PointCloud3D cloud;
    cloud.points.resize(n, 3);
    cloud.node_params.resize(n);

    constexpr int max_consecutive_rejections = 100000;
    int rejections = 0;
    for (int i = 0; i < n;) {
        const double t = kSwissRollTMin + (kSwissRollTMax - kSwissRollTMin) * rng::uniform01(gen);
        const double h = kSwissRollHeight * rng::uniform01(gen);
        bool inside_hole = false;
        for (const Hole& hole : holes) {
            const double dt = t - hole.center_t;
            const double dh = h - hole.center_h;
            if (dt * dt + dh * dh < hole.radius * hole.radius) {
                inside_hole = true;
                break;
            }
        }
        if (inside_hole) {
            if (++rejections >= max_consecutive_rejections) {
                throw ValidationError("holes cover the parameter rectangle");
            }
            continue;
        }
        rejections = 0;
        cloud.points(i, 0) = t * std::cos(t);
        cloud.points(i, 1) = h;
        cloud.points(i, 2) = t * std::sin(t);
        cloud.node_params(i) = t;
        ++i;
    }
    return cloud;
}

std::vector<Matrix> project_views(const PointCloud3D& cloud, const std::vector<double>& angles) {
    if (angles.empty()) throw ValidationError("need at least one projection angle");
    const int n = static_cast<int>(cloud.points.rows());

    std::vector<Matrix> views;
    views.reserve(angles.size());
    for (double angle : angles) {
        const double cos_a = std::cos(angle);
        const double sin_a = std::sin(angle);
        Matrix view(n, 2);
        for (int i = 0; i < n; ++i) {
            // rotate about the y-axis, keep the (x, y) plane
            view(i, 0) = cloud.points(i, 0) * cos_a + cloud.points(i, 2) * sin_a;
            view(i, 1) = cloud.points(i, 1);
        }
        views.push_back(std::move(view));
    }
    return views;
}

}  // namespace crsp
