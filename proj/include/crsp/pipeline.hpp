// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "crsp/clustering.hpp"
#include "crsp/datasets.hpp"
#include "crsp/fusion.hpp"
#include "crsp/io.hpp"
#include "crsp/mds.hpp"
#include "crsp/metrics.hpp"

namespace crsp {

/// Swiss-roll input: sample the cloud, project at the given angles, and turn
/// each projection into an affinity view with a Gaussian kernel (median
/// bandwidth unless a fixed sigma is given; small sigmas respect the
/// manifold better). Ground-truth labels are equal-width bins of the spiral
/// parameter.
struct SwissRollSpec {
    int n = 600;
    std::vector<Hole> holes = default_swiss_roll_holes();
    std::vector<double> angles_deg = {0.0, 45.0, 90.0, 135.0};
    int label_bins = 4;
    std::optional<double> bandwidth_sigma;  ///< empty = median rule
};

/// Everything needed to reproduce a run. Exactly one of `manifest`, `sbm`,
/// `swissroll` must be set; `seed` drives both generation and clustering.
struct PipelineConfig {
    std::optional<std::filesystem::path> manifest;
    std::optional<SbmParams> sbm;
    std::optional<SwissRollSpec> swissroll;

    double beta = 0.02;
    FusionMode fusion = FusionMode::Union;
    CullRule cull = CullRule::EveryView;
    int embed_dims = 2;
    int k = 0;  ///< 0 means: infer from ground-truth labels
    std::uint64_t seed = 0;
    std::filesystem::path output_dir;

    static PipelineConfig from_json(const nlohmann::json& doc);
    nlohmann::json to_json() const;
    void check() const;
};

struct StageTiming {
    std::string stage;
    double seconds = 0.0;
};

struct PipelineResult {
    DissimilarityMatrix delta;
    EmbeddingCoordinates embedding;
    ClusterLabels labels;
    std::optional<MetricReport> metrics;  ///< absent without ground truth
    std::vector<StageTiming> timings;
    int node_count = 0;
};

/// Runs input -> cull -> dissimilarity -> embed -> cluster -> evaluate and
/// writes delta.csv, coords.csv, labels.csv, metrics.json, timing.json and
/// config.json into the output directory. On failure a failure.json marker
/// naming the failed stage is left behind and the error is rethrown.
PipelineResult run_pipeline(const PipelineConfig& config);

}  // namespace crsp
