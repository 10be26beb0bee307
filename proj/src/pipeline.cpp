// SPDX-License-Identifier: Apache-2.0
#include "crsp/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>

namespace crsp {

PipelineConfig PipelineConfig::from_json(const nlohmann::json& doc) {
    PipelineConfig config;
    try {
        if (doc.contains("input")) {
            const auto& input = doc["input"];
            if (input.contains("manifest")) {
                config.manifest = std::filesystem::path(input["manifest"].get<std::string>());
            }
            if (input.contains("sbm")) {
                const auto& s = input["sbm"];
                SbmParams params;
                params.n = s.at("n").get<int>();
                params.k = s.at("k").get<int>();
                params.c = s.at("c").get<double>();
                params.lambda = s.at("lambda").get<double>();
                params.m = s.value("m", 1);
                config.sbm = params;
            }
            if (input.contains("swissroll")) {
                const auto& s = input["swissroll"];
                SwissRollSpec spec;
                spec.n = s.value("n", spec.n);
                if (s.contains("holes")) {
                    spec.holes.clear();
                    for (const auto& h : s["holes"]) {
                        spec.holes.push_back(Hole{h.at(0).get<double>(), h.at(1).get<double>(),
                                                  h.at(2).get<double>()});
                    }
                }
                if (s.contains("angles_deg")) {
                    spec.angles_deg = s["angles_deg"].get<std::vector<double>>();
                }
                spec.label_bins = s.value("label_bins", spec.label_bins);
                if (s.contains("bandwidth_sigma") && !s["bandwidth_sigma"].is_null()) {
                    spec.bandwidth_sigma = s["bandwidth_sigma"].get<double>();
                }
                config.swissroll = spec;
            }
        }
        config.beta = doc.value("beta", config.beta);
        if (doc.contains("fusion")) config.fusion = fusion_mode_from_string(doc["fusion"]);
        if (doc.contains("cull")) config.cull = cull_rule_from_string(doc["cull"]);
        config.embed_dims = doc.value("embed_dims", config.embed_dims);
        config.k = doc.value("k", config.k);
        config.seed = doc.value("seed", config.seed);
        if (doc.contains("output_dir")) {
            config.output_dir = std::filesystem::path(doc["output_dir"].get<std::string>());
        }
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("malformed pipeline config: ") + e.what());
    }
    return config;
}

nlohmann::json PipelineConfig::to_json() const {
    nlohmann::json doc;
    nlohmann::json input = nlohmann::json::object();
    if (manifest) input["manifest"] = manifest->string();
    if (sbm) {
        input["sbm"] = {{"n", sbm->n}, {"k", sbm->k},          {"c", sbm->c},
                        {"lambda", sbm->lambda}, {"m", sbm->m}};
    }
    if (swissroll) {
        nlohmann::json holes = nlohmann::json::array();
        for (const Hole& h : swissroll->holes) {
            holes.push_back({h.center_t, h.center_h, h.radius});
        }
        input["swissroll"] = {{"n", swissroll->n},
                              {"holes", holes},
                              {"angles_deg", swissroll->angles_deg},
                              {"label_bins", swissroll->label_bins}};
        if (swissroll->bandwidth_sigma) {
            input["swissroll"]["bandwidth_sigma"] = *swissroll->bandwidth_sigma;
        }
    }
    doc["input"] = input;
    doc["beta"] = beta;
    doc["fusion"] = to_string(fusion);
    doc["cull"] = cull_rule_to_string(cull);
    doc["embed_dims"] = embed_dims;
    doc["k"] = k;
    doc["seed"] = seed;
    doc["output_dir"] = output_dir.string();
    return doc;
}

void PipelineConfig::check() const {
    const int sources = (manifest ? 1 : 0) + (sbm ? 1 : 0) + (swissroll ? 1 : 0);
    if (sources != 1) {
        throw ValidationError("config must name exactly one input (manifest, sbm or swissroll)");
    }
    if (!(beta > 0.0)) throw ValidationError("beta must be positive");
    if (embed_dims < 1) throw ValidationError("embed_dims must be at least 1");
    if (k < 0) throw ValidationError("k must be nonnegative");
    if (output_dir.empty()) throw ValidationError("output directory is required");
    if (swissroll && swissroll->label_bins < 1) {
        throw ValidationError("swissroll label_bins must be at least 1");
    }
}

namespace {

struct Dataset {
    MultiViewGraph graph;
    std::optional<std::vector<int>> labels;
};

Dataset build_input(const PipelineConfig& config) {
    if (config.manifest) {
        LoadedDataset loaded = load_dataset(*config.manifest);
        return Dataset{std::move(loaded.graph), std::move(loaded.labels)};
    }
    if (config.sbm) {
        SbmParams params = *config.sbm;
        params.seed = config.seed;
        auto [views, labels] = generate_sbm_views(params);
        return Dataset{MultiViewGraph(std::move(views)), std::move(labels)};
    }
    const SwissRollSpec& spec = *config.swissroll;
    const PointCloud3D cloud = generate_swiss_roll(spec.n, spec.holes, config.seed);
    std::vector<double> angles;
    angles.reserve(spec.angles_deg.size());
    for (double deg : spec.angles_deg) angles.push_back(deg * 3.14159265358979323846 / 180.0);

    const Bandwidth bandwidth = spec.bandwidth_sigma ? Bandwidth::fixed(*spec.bandwidth_sigma)
                                                     : Bandwidth::median();
    std::vector<ViewAffinity> views;
    for (const Matrix& projection : project_views(cloud, angles)) {
        views.push_back(gaussian_affinity(projection, bandwidth));
    }

    // ground truth: equal-width bins of the spiral parameter
    std::vector<int> labels(static_cast<std::size_t>(spec.n));
    const double span = kSwissRollTMax - kSwissRollTMin;
    for (int i = 0; i < spec.n; ++i) {
        int bin = static_cast<int>((cloud.node_params(i) - kSwissRollTMin) / span * spec.label_bins);
        labels[static_cast<std::size_t>(i)] = std::clamp(bin, 0, spec.label_bins - 1);
    }
    return Dataset{MultiViewGraph(std::move(views)), std::move(labels)};
}

class StageClock {
public:
    explicit StageClock(std::vector<StageTiming>& sink) : sink_(sink) {}

    template <typename F>
    auto run(const std::string& stage, F&& body) {
        current_ = stage;
        const auto start = std::chrono::steady_clock::now();
        auto result = body();
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        sink_.push_back({stage, elapsed.count()});
        return result;
    }

    const std::string& current() const { return current_; }

private:
    std::vector<StageTiming>& sink_;
    std::string current_ = "setup";
};

nlohmann::json timings_json(const std::vector<StageTiming>& timings) {
    nlohmann::json stages = nlohmann::json::object();
    double total = 0.0;
    for (const StageTiming& t : timings) {
        stages[t.stage] = t.seconds;
        total += t.seconds;
    }
    return {{"stages", stages}, {"total", total}};
}

void write_failure_marker(const std::filesystem::path& dir, const std::string& stage,
                          const std::string& error) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    std::ofstream out(dir / "failure.json");
    if (!out) return;  // the original error matters more
    out << nlohmann::json{{"stage", stage}, {"error", error}}.dump(2) << "\n";
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config) {
    config.check();
    std::vector<StageTiming> timings;
    StageClock clock(timings);

    try {
        Dataset dataset = clock.run("input", [&] { return build_input(config); });

        dataset = clock.run("cull", [&] {
            const std::vector<int> survivors = cull_survivors(dataset.graph, config.cull);
            if (survivors.size() < 2) {
                throw ValidationError("graph collapsed under culling: " +
                                      std::to_string(survivors.size()) + " nodes survive");
            }
            Dataset culled{restrict_graph(dataset.graph, survivors), std::nullopt};
            if (dataset.labels) {
                std::vector<int> kept;
                kept.reserve(survivors.size());
                for (int i : survivors) kept.push_back((*dataset.labels)[static_cast<std::size_t>(i)]);
                culled.labels = std::move(kept);
            }
            return culled;
        });

        int k = config.k;
        if (k == 0) {
            if (!dataset.labels) {
                throw ValidationError("k not given and no ground-truth labels to infer it from");
            }
            k = static_cast<int>(std::set<int>(dataset.labels->begin(), dataset.labels->end()).size());
        }

        RspParams params;
        params.beta = config.beta;

        DissimilarityMatrix delta = clock.run("dissimilarity", [&] {
            return crsp_dissimilarity(dataset.graph, params, config.fusion);
        });

        EmbeddingCoordinates embedding = clock.run("embed", [&] {
            const int dims = std::min(config.embed_dims, delta.size() - 1);
            return classical_mds(delta, dims);
        });

        ClusterLabels labels = clock.run("cluster", [&] {
            return spectral_clustering(affinity_from_dissimilarity(delta), k, config.seed);
        });

        std::optional<MetricReport> metrics;
        if (dataset.labels) {
            metrics = clock.run("evaluate", [&] {
                return evaluate_clustering(labels.labels, *dataset.labels);
            });
        }

        clock.run("write", [&] {
            std::filesystem::create_directories(config.output_dir);
            save_matrix_csv(config.output_dir / "delta.csv", delta.matrix());
            save_matrix_csv(config.output_dir / "coords.csv", embedding.coords);
            save_labels(config.output_dir / "labels.csv", labels.labels);
            return 0;
        });

        // metric report plus per-stage timings
        nlohmann::json metrics_doc;
        if (metrics) {
            metrics_doc["ccr"] = metrics->ccr_percent;
            metrics_doc["nmi"] = metrics->nmi;
            nlohmann::json table = nlohmann::json::array();
            for (int i = 0; i < metrics->contingency.rows(); ++i) {
                nlohmann::json row = nlohmann::json::array();
                for (int j = 0; j < metrics->contingency.cols(); ++j) {
                    row.push_back(metrics->contingency(i, j));
                }
                table.push_back(row);
            }
            metrics_doc["contingency"] = table;
        } else {
            metrics_doc["ccr"] = nullptr;
            metrics_doc["nmi"] = nullptr;
            metrics_doc["note"] = "no ground-truth labels supplied";
        }
        metrics_doc["timings"] = timings_json(timings);

        {
            std::ofstream out(config.output_dir / "metrics.json");
            if (!out) throw IoError("cannot write metrics.json");
            out << metrics_doc.dump(2) << "\n";
        }
        {
            std::ofstream out(config.output_dir / "timing.json");
            if (!out) throw IoError("cannot write timing.json");
            out << timings_json(timings).dump(2) << "\n";
        }
        {
            nlohmann::json echo = config.to_json();
            echo["k"] = k;  // resolved value
            std::ofstream out(config.output_dir / "config.json");
            if (!out) throw IoError("cannot write config.json");
            out << echo.dump(2) << "\n";
        }

        PipelineResult result{std::move(delta), std::move(embedding), std::move(labels),
                              std::move(metrics), std::move(timings), 0};
        result.node_count = dataset.graph.node_count();
        return result;
    } catch (const std::exception& e) {
        write_failure_marker(config.output_dir, clock.current(), e.what());
        throw;
    }
}

}  // namespace crsp
