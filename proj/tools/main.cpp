// SPDX-License-Identifier: Apache-2.0
//
// crsp — multi-view graph dissimilarity toolkit.
//
// Subcommands: generate sbm | generate swissroll | affinity | dissimilarity |
// embed | cluster | evaluate | pipeline.
// Exit codes: 0 success, 2 validation error, 3 numeric/non-convergence,
// 4 I/O error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "crsp/clustering.hpp"
#include "crsp/datasets.hpp"
#include "crsp/fusion.hpp"
#include "crsp/io.hpp"
#include "crsp/mds.hpp"
#include "crsp/metrics.hpp"
#include "crsp/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

crsp::Bandwidth parse_bandwidth(const std::string& text) {
    if (text == "median") return crsp::Bandwidth::median();
    try {
        std::size_t used = 0;
        const double sigma = std::stod(text, &used);
        if (used == text.size()) return crsp::Bandwidth::fixed(sigma);
    } catch (const std::exception&) {
    }
    throw crsp::ValidationError("bandwidth must be 'median' or a positive number, got '" + text +
                                "'");
}

// "t,h,r;t,h,r" -> holes
std::vector<crsp::Hole> parse_holes(const std::string& text) {
    std::vector<crsp::Hole> holes;
    if (text.empty()) return holes;
    std::istringstream groups(text);
    std::string group;
    while (std::getline(groups, group, ';')) {
        std::istringstream fields(group);
        std::string token;
        std::vector<double> values;
        while (std::getline(fields, token, ',')) values.push_back(std::stod(token));
        if (values.size() != 3) {
            throw crsp::ValidationError("hole '" + group + "' must be t,h,r");
        }
        holes.push_back(crsp::Hole{values[0], values[1], values[2]});
    }
    return holes;
}

void write_graph_files(const fs::path& out_dir, const std::vector<crsp::Matrix>& views,
                       const std::vector<int>& labels) {
    fs::create_directories(out_dir);
    crsp::Manifest manifest;
    manifest.n = static_cast<int>(views.front().rows());
    for (std::size_t v = 0; v < views.size(); ++v) {
        const std::string name = "view_" + std::to_string(v) + ".csv";
        crsp::save_matrix_csv(out_dir / name, views[v]);
        manifest.views.push_back(name);
    }
    if (!labels.empty()) {
        crsp::save_labels(out_dir / "labels.csv", labels);
        manifest.labels = "labels.csv";
    }
    crsp::write_manifest(out_dir / "manifest.json", manifest);
}

struct GenerateSbmOptions {
    crsp::SbmParams params;
    std::string cull = "every-view";
    std::string out;
};

struct GenerateRollOptions {
    int n = 600;
    std::uint64_t seed = 0;
    std::string holes = "default";
    std::string angles = "0,45,90,135";
    int label_bins = 4;
    std::string bandwidth = "median";
    std::string out;
};

int run(int argc, char** argv) {
    CLI::App app{"Randomized-shortest-path dissimilarities for single- and multi-view graphs"};
    app.require_subcommand(1);

    // ---- generate ----
    CLI::App* generate = app.add_subcommand("generate", "Write synthetic data sets to disk");
    generate->require_subcommand(1);

    GenerateSbmOptions sbm;
    sbm.params = crsp::SbmParams{500, 3, 10.0, 0.9, 3, 0};
    CLI::App* gen_sbm = generate->add_subcommand("sbm", "Multi-view stochastic block model");
    gen_sbm->add_option("--n", sbm.params.n, "node count")->capture_default_str();
    gen_sbm->add_option("--k", sbm.params.k, "cluster count")->capture_default_str();
    gen_sbm->add_option("--c", sbm.params.c, "edge-density parameter")->capture_default_str();
    gen_sbm->add_option("--lambda", sbm.params.lambda, "cluster separation in [0,1]")
        ->capture_default_str();
    gen_sbm->add_option("--m", sbm.params.m, "view count")->capture_default_str();
    gen_sbm->add_option("--seed", sbm.params.seed, "RNG seed")->capture_default_str();
    gen_sbm->add_option("--cull", sbm.cull, "culling rule: every-view | union")
        ->capture_default_str();
    gen_sbm->add_option("--out", sbm.out, "output directory")->required();

    GenerateRollOptions roll;
    CLI::App* gen_roll = generate->add_subcommand("swissroll", "Swiss roll with holes, projected");
    gen_roll->add_option("--n", roll.n, "point count")->capture_default_str();
    gen_roll->add_option("--seed", roll.seed, "RNG seed")->capture_default_str();
    gen_roll->add_option("--holes", roll.holes, "t,h,r[;t,h,r...], 'default' or 'none'")
        ->capture_default_str();
    gen_roll->add_option("--angles", roll.angles, "projection angles in degrees, comma separated")
        ->capture_default_str();
    gen_roll->add_option("--label-bins", roll.label_bins, "spiral-parameter bins for labels")
        ->capture_default_str();
    gen_roll->add_option("--bandwidth", roll.bandwidth, "'median' or a fixed sigma")
        ->capture_default_str();
    gen_roll->add_option("--out", roll.out, "output directory")->required();

    // ---- affinity ----
    std::string affinity_features, affinity_out, affinity_bandwidth = "median";
    CLI::App* affinity = app.add_subcommand("affinity", "Gaussian-kernel affinity from features");
    affinity->add_option("--features", affinity_features, "CSV of feature rows")->required();
    affinity->add_option("--bandwidth", affinity_bandwidth, "'median' or a fixed sigma")
        ->capture_default_str();
    affinity->add_option("--out", affinity_out, "output view CSV")->required();

    // ---- dissimilarity ----
    std::string diss_manifest, diss_fusion = "union", diss_cull = "every-view", diss_out;
    double diss_beta = 0.02;
    CLI::App* dissimilarity =
        app.add_subcommand("dissimilarity", "RSP / C-RSP dissimilarity of a multi-view graph");
    dissimilarity->add_option("--manifest", diss_manifest, "graph manifest JSON")->required();
    dissimilarity->add_option("--beta", diss_beta, "inverse temperature")->capture_default_str();
    dissimilarity->add_option("--fusion", diss_fusion, "union | intersection")
        ->capture_default_str();
    dissimilarity->add_option("--cull", diss_cull, "every-view | union")->capture_default_str();
    dissimilarity->add_option("--out", diss_out, "output dissimilarity CSV")->required();

    // ---- embed ----
    std::string embed_delta, embed_out;
    int embed_dims = 2;
    CLI::App* embed = app.add_subcommand("embed", "Classical MDS embedding of a dissimilarity");
    embed->add_option("--delta", embed_delta, "dissimilarity CSV")->required();
    embed->add_option("--dims", embed_dims, "embedding dimension")->capture_default_str();
    embed->add_option("--out", embed_out, "output coordinates CSV")->required();

    // ---- cluster ----
    std::string cluster_delta, cluster_out;
    int cluster_k = 2;
    std::uint64_t cluster_seed = 0;
    CLI::App* cluster = app.add_subcommand("cluster", "Spectral clustering of a dissimilarity");
    cluster->add_option("--delta", cluster_delta, "dissimilarity CSV")->required();
    cluster->add_option("--k", cluster_k, "cluster count")->capture_default_str();
    cluster->add_option("--seed", cluster_seed, "RNG seed")->capture_default_str();
    cluster->add_option("--out", cluster_out, "output labels CSV")->required();

    // ---- evaluate ----
    std::string eval_pred, eval_truth, eval_norm = "geometric";
    CLI::App* evaluate = app.add_subcommand("evaluate", "CCR and NMI against ground truth");
    evaluate->add_option("--pred", eval_pred, "predicted labels CSV")->required();
    evaluate->add_option("--truth", eval_truth, "ground-truth labels CSV")->required();
    evaluate->add_option("--nmi-norm", eval_norm, "geometric | arithmetic")->capture_default_str();

    // ---- pipeline ----
    std::string pipe_config, pipe_manifest, pipe_fusion, pipe_cull, pipe_out;
    double pipe_beta = 0.0;
    int pipe_dims = 0, pipe_k = -1;
    std::uint64_t pipe_seed = 0;
    CLI::App* pipeline = app.add_subcommand(
        "pipeline", "Full run: input -> dissimilarity -> embed -> cluster -> evaluate");
    pipeline->add_option("--config", pipe_config, "pipeline config JSON");
    pipeline->add_option("--manifest", pipe_manifest, "graph manifest (overrides config input)");
    auto* opt_beta = pipeline->add_option("--beta", pipe_beta, "inverse temperature (default 0.02)");
    auto* opt_fusion = pipeline->add_option("--fusion", pipe_fusion, "union | intersection");
    auto* opt_cull = pipeline->add_option("--cull", pipe_cull, "every-view | union");
    auto* opt_dims = pipeline->add_option("--dims", pipe_dims, "embedding dimension");
    auto* opt_k = pipeline->add_option("--k", pipe_k, "cluster count (0 = infer from labels)");
    auto* opt_seed = pipeline->add_option("--seed", pipe_seed, "RNG seed");
    auto* opt_out = pipeline->add_option("--out", pipe_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help or the parse message
        return code == 0 ? 0 : 2;      // bad flags are validation errors
    }

    if (gen_sbm->parsed()) {
        const crsp::SbmSample sample =
            crsp::generate_sbm(sbm.params, crsp::cull_rule_from_string(sbm.cull));
        std::vector<crsp::Matrix> views;
        for (const crsp::ViewAffinity& v : sample.graph.views()) views.push_back(v.matrix());
        write_graph_files(sbm.out, views, sample.labels);
        std::cout << "wrote " << sample.graph.view_count() << " views over "
                  << sample.graph.node_count() << " nodes to " << sbm.out << "\n";
        return 0;
    }

    if (gen_roll->parsed()) {
        std::vector<crsp::Hole> holes;
        if (roll.holes == "default") holes = crsp::default_swiss_roll_holes();
        else if (roll.holes != "none") holes = parse_holes(roll.holes);
        const crsp::PointCloud3D cloud = crsp::generate_swiss_roll(roll.n, holes, roll.seed);

        std::vector<double> angles;
        for (const std::string& token : [&] {
                 std::vector<std::string> parts;
                 std::istringstream in(roll.angles);
                 std::string part;
                 while (std::getline(in, part, ',')) parts.push_back(part);
                 return parts;
             }()) {
            angles.push_back(std::stod(token) * kPi / 180.0);
        }

        const crsp::Bandwidth bandwidth = parse_bandwidth(roll.bandwidth);
        std::vector<crsp::Matrix> views;
        for (const crsp::Matrix& projection : crsp::project_views(cloud, angles)) {
            views.push_back(crsp::gaussian_affinity(projection, bandwidth).matrix());
        }

        if (roll.label_bins < 1) throw crsp::ValidationError("label bins must be at least 1");
        std::vector<int> labels(static_cast<std::size_t>(roll.n));
        const double span = crsp::kSwissRollTMax - crsp::kSwissRollTMin;
        for (int i = 0; i < roll.n; ++i) {
            const int bin = static_cast<int>((cloud.node_params(i) - crsp::kSwissRollTMin) / span *
                                             roll.label_bins);
            labels[static_cast<std::size_t>(i)] = std::min(bin, roll.label_bins - 1);
        }

        write_graph_files(roll.out, views, labels);
        crsp::save_matrix_csv(fs::path(roll.out) / "cloud.csv", cloud.points);
        crsp::save_matrix_csv(fs::path(roll.out) / "params.csv", cloud.node_params);
        std::cout << "wrote " << views.size() << " projected views of " << roll.n << " points to "
                  << roll.out << "\n";
        return 0;
    }

    if (affinity->parsed()) {
        const crsp::Matrix features = crsp::load_matrix_csv(affinity_features);
        const crsp::ViewAffinity view =
            crsp::gaussian_affinity(features, parse_bandwidth(affinity_bandwidth));
        crsp::save_matrix_csv(affinity_out, view.matrix());
        return 0;
    }

    if (dissimilarity->parsed()) {
        const crsp::LoadedDataset dataset = crsp::load_dataset(diss_manifest);
        const crsp::MultiViewGraph culled =
            crsp::cull_disconnected(dataset.graph, crsp::cull_rule_from_string(diss_cull));
        crsp::RspParams params;
        params.beta = diss_beta;
        const crsp::DissimilarityMatrix delta = crsp::crsp_dissimilarity(
            culled, params, crsp::fusion_mode_from_string(diss_fusion));
        crsp::save_matrix_csv(diss_out, delta.matrix());
        return 0;
    }

    if (embed->parsed()) {
        const crsp::DissimilarityMatrix delta =
            crsp::DissimilarityMatrix::from_matrix(crsp::load_matrix_csv(embed_delta));
        const crsp::EmbeddingCoordinates coords = crsp::classical_mds(delta, embed_dims);
        crsp::save_matrix_csv(embed_out, coords.coords);
        if (coords.deficient()) {
            std::cerr << "note: only " << coords.positive_eigenvalues
                      << " positive eigenvalues; missing columns are zero\n";
        }
        return 0;
    }

    if (cluster->parsed()) {
        const crsp::DissimilarityMatrix delta =
            crsp::DissimilarityMatrix::from_matrix(crsp::load_matrix_csv(cluster_delta));
        const crsp::ClusterLabels labels =
            crsp::spectral_clustering(crsp::affinity_from_dissimilarity(delta), cluster_k,
                                      cluster_seed);
        crsp::save_labels(cluster_out, labels.labels);
        return 0;
    }

    if (evaluate->parsed()) {
        const std::vector<int> pred = crsp::load_labels(eval_pred);
        const std::vector<int> truth = crsp::load_labels(eval_truth);
        crsp::NmiNormalization norm;
        if (eval_norm == "geometric") norm = crsp::NmiNormalization::Geometric;
        else if (eval_norm == "arithmetic") norm = crsp::NmiNormalization::Arithmetic;
        else throw crsp::ValidationError("nmi-norm must be geometric or arithmetic");
        nlohmann::json report;
        report["ccr"] = crsp::ccr(pred, truth);
        report["nmi"] = crsp::nmi(pred, truth, norm);
        std::cout << report.dump() << "\n";
        return 0;
    }

    if (pipeline->parsed()) {
        crsp::PipelineConfig config;
        if (!pipe_config.empty()) {
            std::ifstream in(pipe_config);
            if (!in) throw crsp::IoError("cannot open config " + pipe_config);
            nlohmann::json doc;
            try {
                doc = nlohmann::json::parse(in);
            } catch (const nlohmann::json::exception& e) {
                throw crsp::IoError("config is not valid JSON: " + std::string(e.what()));
            }
            config = crsp::PipelineConfig::from_json(doc);
        }
        if (!pipe_manifest.empty()) {
            config.manifest = pipe_manifest;
            config.sbm.reset();
            config.swissroll.reset();
        }
        if (opt_beta->count()) config.beta = pipe_beta;
        if (opt_fusion->count()) config.fusion = crsp::fusion_mode_from_string(pipe_fusion);
        if (opt_cull->count()) config.cull = crsp::cull_rule_from_string(pipe_cull);
        if (opt_dims->count()) config.embed_dims = pipe_dims;
        if (opt_k->count()) config.k = pipe_k;
        if (opt_seed->count()) config.seed = pipe_seed;
        if (opt_out->count()) config.output_dir = pipe_out;

        const crsp::PipelineResult result = crsp::run_pipeline(config);
        nlohmann::json summary;
        summary["nodes"] = result.node_count;
        if (result.metrics) {
            summary["ccr"] = result.metrics->ccr_percent;
            summary["nmi"] = result.metrics->nmi;
        }
        double total = 0.0;
        for (const crsp::StageTiming& t : result.timings) total += t.seconds;
        summary["seconds"] = total;
        std::cout << summary.dump() << "\n";
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const crsp::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const crsp::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const crsp::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
