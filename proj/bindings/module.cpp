// SPDX-License-Identifier: Apache-2.0
//
// Python bindings for the crsp core: numpy matrices in, numpy matrices out.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "crsp/clustering.hpp"
#include "crsp/datasets.hpp"
#include "crsp/fusion.hpp"
#include "crsp/mds.hpp"
#include "crsp/metrics.hpp"
#include "crsp/pipeline.hpp"
#include "crsp/rsp.hpp"

namespace py = pybind11;
using namespace crsp;

namespace {

Bandwidth bandwidth_from(std::optional<double> sigma) {
    return sigma ? Bandwidth::fixed(*sigma) : Bandwidth::median();
}

MultiViewGraph graph_from(const std::vector<Matrix>& views) {
    std::vector<ViewAffinity> wrapped;
    wrapped.reserve(views.size());
    for (const Matrix& v : views) wrapped.emplace_back(v);
    return MultiViewGraph(std::move(wrapped));
}

}  // namespace

PYBIND11_MODULE(crsp_core, m) {
    m.doc() = "Randomized-shortest-path dissimilarities for single- and multi-view graphs";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
    py::register_exception<IoError>(m, "IoError", PyExc_IOError);

    m.def(
        "gaussian_affinity",
        [](const Matrix& features, std::optional<double> sigma) {
            return gaussian_affinity(features, bandwidth_from(sigma)).matrix();
        },
        py::arg("features"), py::arg("sigma") = py::none(),
        "Gaussian-kernel affinity matrix; sigma=None uses the median pairwise distance");

    m.def(
        "transition_matrix",
        [](const Matrix& affinity) { return transition_matrix(ViewAffinity(affinity)); },
        py::arg("affinity"));

    m.def(
        "cost_matrix", [](const Matrix& affinity) { return cost_matrix(ViewAffinity(affinity)); },
        py::arg("affinity"));

    m.def(
        "validate_affinity",
        [](const Matrix& affinity) {
            const ValidationReport report = validate_affinity(affinity);
            py::dict out;
            out["passed"] = report.passed();
            out["square"] = report.square;
            out["negative_entries"] = report.negative_entries;
            out["nonfinite_entries"] = report.nonfinite_entries;
            out["symmetric"] = report.symmetric;
            out["connected"] = report.connected;
            out["component_count"] = report.component_count;
            out["zero_degree_nodes"] = report.zero_degree_nodes;
            out["summary"] = report.summary();
            return out;
        },
        py::arg("affinity"));

    m.def(
        "rsp_dissimilarity",
        [](const Matrix& affinity, double beta, double radius_tolerance) {
            return rsp_dissimilarity(RspInputs::from_view(ViewAffinity(affinity)),
                                     RspParams{beta, radius_tolerance})
                .matrix();
        },
        py::arg("affinity"), py::arg("beta") = 0.02, py::arg("radius_tolerance") = 1e-6,
        "RSP dissimilarity matrix of a single connected view");

    m.def(
        "crsp_dissimilarity",
        [](const std::vector<Matrix>& views, double beta, const std::string& fusion,
           double radius_tolerance) {
            return crsp_dissimilarity(graph_from(views), RspParams{beta, radius_tolerance},
                                      fusion_mode_from_string(fusion))
                .matrix();
        },
        py::arg("views"), py::arg("beta") = 0.02, py::arg("fusion") = "union",
        py::arg("radius_tolerance") = 1e-6,
        "C-RSP dissimilarity matrix of a multi-view graph");

    m.def(
        "combine_probabilities",
        [](const std::vector<Matrix>& p_views, const std::string& fusion) {
            return combine_probabilities(p_views, fusion_mode_from_string(fusion));
        },
        py::arg("p_views"), py::arg("fusion") = "union");

    m.def(
        "combine_costs",
        [](const std::vector<Matrix>& cost_views, const std::string& fusion) {
            return combine_costs(cost_views, fusion_mode_from_string(fusion));
        },
        py::arg("cost_views"), py::arg("fusion") = "union");

    m.def(
        "shortest_path_oracle",
        [](const Matrix& affinity) {
            return shortest_path_oracle(RspInputs::from_view(ViewAffinity(affinity)));
        },
        py::arg("affinity"));

    m.def(
        "commute_time_oracle",
        [](const Matrix& affinity) { return commute_time_oracle(ViewAffinity(affinity)); },
        py::arg("affinity"));

    m.def(
        "spectral_radius_bound",
        [](const Matrix& w, double tol) {
            const SpectralRadiusBound bound = spectral_radius_bound(w, tol);
            py::dict out;
            out["estimate"] = bound.estimate;
            out["lower"] = bound.lower;
            out["upper"] = bound.upper;
            out["converged"] = bound.converged;
            out["iterations"] = bound.iterations;
            return out;
        },
        py::arg("w"), py::arg("tol") = 1e-9);

    m.def(
        "classical_mds",
        [](const Matrix& delta, int dim) {
            const EmbeddingCoordinates embedding =
                classical_mds(DissimilarityMatrix::from_matrix(delta), dim);
            py::dict info;
            info["positive_eigenvalues"] = embedding.positive_eigenvalues;
            info["clamped_negative_eigenvalues"] = embedding.clamped_negative_eigenvalues;
            info["deficient"] = embedding.deficient();
            return py::make_tuple(embedding.coords, info);
        },
        py::arg("delta"), py::arg("dim") = 2,
        "Classical MDS coordinates and diagnostics from a dissimilarity matrix");

    m.def(
        "affinity_from_dissimilarity",
        [](const Matrix& delta) {
            return affinity_from_dissimilarity(DissimilarityMatrix::from_matrix(delta));
        },
        py::arg("delta"));

    m.def(
        "spectral_clustering",
        [](const Matrix& affinity, int k, std::uint64_t seed) {
            return spectral_clustering(affinity, k, seed).labels;
        },
        py::arg("affinity"), py::arg("k"), py::arg("seed") = 0);

    m.def(
        "kmeans",
        [](const Matrix& points, int k, std::uint64_t seed) {
            return kmeans(points, k, seed).labels;
        },
        py::arg("points"), py::arg("k"), py::arg("seed") = 0);

    m.def("ccr", &ccr, py::arg("pred"), py::arg("truth"),
          "Correct classification rate in percent under optimal label assignment");

    m.def(
        "nmi",
        [](const std::vector<int>& pred, const std::vector<int>& truth,
           const std::string& normalization) {
            if (normalization == "geometric") return nmi(pred, truth, NmiNormalization::Geometric);
            if (normalization == "arithmetic") return nmi(pred, truth, NmiNormalization::Arithmetic);
            throw ValidationError("normalization must be geometric or arithmetic");
        },
        py::arg("pred"), py::arg("truth"), py::arg("normalization") = "geometric");

    m.def("contingency_table", &contingency_table, py::arg("pred"), py::arg("truth"));

    m.def(
        "generate_sbm",
        [](int n, int k, double c, double lambda, int m, std::uint64_t seed,
           const std::string& cull) {
            const SbmSample sample = generate_sbm(SbmParams{n, k, c, lambda, m, seed},
                                                  cull_rule_from_string(cull));
            std::vector<Matrix> views;
            views.reserve(static_cast<std::size_t>(sample.graph.view_count()));
            for (const ViewAffinity& v : sample.graph.views()) views.push_back(v.matrix());
            return py::make_tuple(views, sample.labels);
        },
        py::arg("n"), py::arg("k"), py::arg("c"), py::arg("lambda_"), py::arg("m") = 1,
        py::arg("seed") = 0, py::arg("cull") = "every-view",
        "Multi-view SBM sample: (views, labels) after culling");

    m.def(
        "generate_swiss_roll",
        [](int n, const std::vector<std::tuple<double, double, double>>& holes,
           std::uint64_t seed) {
            std::vector<Hole> parsed;
            parsed.reserve(holes.size());
            for (const auto& [t, h, r] : holes) parsed.push_back(Hole{t, h, r});
            const PointCloud3D cloud = generate_swiss_roll(n, parsed, seed);
            return py::make_tuple(cloud.points, cloud.node_params);
        },
        py::arg("n"), py::arg("holes") = std::vector<std::tuple<double, double, double>>{},
        py::arg("seed") = 0, "Swiss roll sample: (points n x 3, spiral parameter per point)");

    m.def("default_swiss_roll_holes", [] {
        std::vector<std::tuple<double, double, double>> out;
        for (const Hole& h : default_swiss_roll_holes()) {
            out.emplace_back(h.center_t, h.center_h, h.radius);
        }
        return out;
    });

    m.def(
        "project_views",
        [](const Matrix& points, const Vector& node_params, const std::vector<double>& angles) {
            return project_views(PointCloud3D{points, node_params}, angles);
        },
        py::arg("points"), py::arg("node_params"), py::arg("angles"),
        "Rotate about the vertical axis and drop depth, one 2-column matrix per angle");

    m.def(
        "cull_survivors",
        [](const std::vector<Matrix>& views, const std::string& rule) {
            return cull_survivors(graph_from(views), cull_rule_from_string(rule));
        },
        py::arg("views"), py::arg("rule") = "every-view",
        "Indices of the nodes kept by the culling rule");

    m.def(
        "run_pipeline",
        [](const std::string& config_json) {
            nlohmann::json doc;
            try {
                doc = nlohmann::json::parse(config_json);
            } catch (const nlohmann::json::exception& e) {
                throw IoError("config is not valid JSON: " + std::string(e.what()));
            }
            const PipelineResult result = run_pipeline(PipelineConfig::from_json(doc));
            py::dict out;
            out["nodes"] = result.node_count;
            out["delta"] = result.delta.matrix();
            out["coords"] = result.embedding.coords;
            out["labels"] = result.labels.labels;
            if (result.metrics) {
                out["ccr"] = result.metrics->ccr_percent;
                out["nmi"] = result.metrics->nmi;
            }
            py::dict timings;
            for (const StageTiming& t : result.timings) timings[t.stage.c_str()] = t.seconds;
            out["timings"] = timings;
            return out;
        },
        py::arg("config_json"),
        "Full run from a JSON config string; writes artifacts and returns the results");
}
