// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one self-contained check per shipping criterion, one
// PASS/FAIL line each. Run with no arguments for the full suite, or pass
// criterion numbers to run a subset. Exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "crsp/clustering.hpp"
#include "crsp/datasets.hpp"
#include "crsp/fusion.hpp"
#include "crsp/io.hpp"
#include "crsp/mds.hpp"
#include "crsp/metrics.hpp"
#include "crsp/pipeline.hpp"
#include "crsp/rng.hpp"
#include "support/enumeration.hpp"
#include "support/test_graphs.hpp"

using namespace crsp;
namespace fs = std::filesystem;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& message) {
    if (!condition) throw Failure(message);
}

std::string fmt(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.3g", value);
    return buffer;
}

class Harness {
public:
    explicit Harness(std::set<int> selected) : selected_(std::move(selected)) {}

    void criterion(int number, const std::string& label,
                   const std::function<std::string()>& body) {
        if (!selected_.empty() && !selected_.count(number)) return;
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool passed = true;
        try {
            detail = body();
        } catch (const std::exception& e) {
            passed = false;
            detail = e.what();
        }
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        std::printf("%s  %2d  %s (%s; %.1f s)\n", passed ? "PASS" : "FAIL", number, label.c_str(),
                    detail.c_str(), elapsed.count());
        std::fflush(stdout);
        if (!passed) ++failures_;
    }

    int finish() const {
        std::printf("%d criterion(s) failed\n", failures_);
        return failures_;
    }

private:
    std::set<int> selected_;
    int failures_ = 0;
};

double max_offdiag_abs_diff(const Matrix& a, const Matrix& b) {
    double worst = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (i != j) worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
    return worst;
}

double max_offdiag_rel_diff(const Matrix& a, const Matrix& reference) {
    double worst = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (i != j) worst = std::max(worst, std::abs(a(i, j) - reference(i, j)) /
                                                    std::abs(reference(i, j)));
    return worst;
}

struct TrendPoint {
    double mean_ccr = 0.0;
    double mean_nmi = 0.0;
};

TrendPoint sbm_experiment(int m, double c, CullRule rule, int seeds) {
    TrendPoint point;
    for (int seed = 1; seed <= seeds; ++seed) {
        const SbmSample sample =
            generate_sbm(SbmParams{500, 3, c, 0.9, m, static_cast<std::uint64_t>(seed)}, rule);
        const DissimilarityMatrix delta =
            crsp_dissimilarity(sample.graph, RspParams{0.02, 1e-6}, FusionMode::Union);
        const ClusterLabels pred =
            spectral_clustering(affinity_from_dissimilarity(delta), 3,
                                static_cast<std::uint64_t>(seed));
        point.mean_ccr += ccr(pred.labels, sample.labels);
        point.mean_nmi += nmi(pred.labels, sample.labels);
    }
    point.mean_ccr /= seeds;
    point.mean_nmi /= seeds;
    return point;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
    Harness harness(std::move(selected));

    harness.criterion(1, "limiting behavior on 50 random unit-weight graphs", [] {
        double worst_sp = 0.0, worst_ct = 0.0;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            auto gen = rng::stream(9001, seed);
            const int n = 4 + static_cast<int>(rng::below(gen, 27));
            const ViewAffinity view(testing::random_connected_affinity(n, 0.3, true, gen));
            const RspInputs inputs = RspInputs::from_view(view);

            const Matrix sp = shortest_path_oracle(inputs);
            const Matrix at_large_beta = rsp_dissimilarity(inputs, RspParams{20.0, 1e-6}).matrix();
            worst_sp = std::max(worst_sp, max_offdiag_abs_diff(at_large_beta, sp));

            const Matrix ct = commute_time_oracle(view);
            const Matrix at_small_beta = rsp_dissimilarity(inputs, RspParams{1e-6, 1e-6}).matrix();
            worst_ct = std::max(worst_ct, max_offdiag_rel_diff(at_small_beta, ct));
        }
        require(worst_sp <= 1e-6, "shortest-path limit off by " + fmt(worst_sp));
        require(worst_ct <= 1e-3, "commute-time limit off by " + fmt(worst_ct) + " relative");
        return "worst sp " + fmt(worst_sp) + " abs, worst commute " + fmt(worst_ct) + " rel";
    });

    harness.criterion(2, "two-node unit path is exactly 1", [] {
        Matrix a(2, 2);
        a << 0, 1, 1, 0;
        double worst = 0.0;
        for (double beta : {0.02, 1.0, 20.0}) {
            const Matrix delta =
                rsp_dissimilarity(RspInputs::from_view(ViewAffinity(a)), RspParams{beta, 1e-6})
                    .matrix();
            worst = std::max(worst, std::abs(delta(0, 1) - 1.0));
        }
        require(worst <= 1e-12, "deviates by " + fmt(worst));
        return "max |delta - 1| = " + fmt(worst);
    });

    harness.criterion(3, "single-view C-RSP reduces to RSP on 20 random graphs", [] {
        double worst = 0.0;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            auto gen = rng::stream(9003, seed);
            const int n = 4 + static_cast<int>(rng::below(gen, 27));
            const Matrix a = testing::random_connected_affinity(n, 0.3, false, gen);
            const RspParams params;
            const Matrix direct =
                rsp_dissimilarity(RspInputs::from_view(ViewAffinity(a)), params).matrix();
            const Matrix fused = crsp_dissimilarity(MultiViewGraph({ViewAffinity(a)}), params).matrix();
            worst = std::max(worst, (direct - fused).cwiseAbs().maxCoeff());
        }
        require(worst <= 1e-12, "worst deviation " + fmt(worst));
        return "worst |crsp - rsp| = " + fmt(worst);
    });

    harness.criterion(4, "m identical views scale as m * rsp(m beta) on 10 random graphs", [] {
        double worst = 0.0;
        const double beta = 0.5;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            auto gen = rng::stream(9004, seed);
            const int n = 5 + static_cast<int>(rng::below(gen, 10));
            const Matrix a = testing::random_connected_affinity(n, 0.35, false, gen);
            for (int m : {2, 3, 5}) {
                std::vector<ViewAffinity> copies(static_cast<std::size_t>(m), ViewAffinity(a));
                const Matrix lhs =
                    crsp_dissimilarity(MultiViewGraph(copies), RspParams{beta, 1e-6}).matrix();
                const Matrix rhs = m * rsp_dissimilarity(RspInputs::from_view(ViewAffinity(a)),
                                                         RspParams{m * beta, 1e-6})
                                           .matrix();
                worst = std::max(worst, max_offdiag_rel_diff(lhs, rhs));
            }
        }
        require(worst <= 1e-9, "worst relative deviation " + fmt(worst));
        return "worst relative deviation " + fmt(worst);
    });

    harness.criterion(5, "4-node two-view graphs match certified path enumeration", [] {
        const double beta = 0.5;
        std::vector<std::pair<Matrix, Matrix>> instances;
        {
            Matrix v1(4, 4), v2(4, 4);
            v1 << 0, 1, 1, 0, 1, 0, 1, 0, 1, 1, 0, 1, 0, 0, 1, 0;
            v2 << 0, 1, 0, 1, 1, 0, 1, 1, 0, 1, 0, 1, 1, 1, 1, 0;
            instances.emplace_back(v1, v2);
        }
        {
            Matrix v1(4, 4), v2(4, 4);
            v1 << 0, 1, 0, 0, 1, 0, 1, 0, 0, 1, 0, 1, 0, 0, 1, 0;  // path
            v2 << 0, 1, 1, 1, 1, 0, 1, 1, 1, 1, 0, 1, 1, 1, 1, 0;  // clique
            instances.emplace_back(v1, v2);
        }
        {
            Matrix v1(4, 4), v2(4, 4);
            v1 << 0, 1, 0, 1, 1, 0, 1, 0, 0, 1, 0, 1, 1, 0, 1, 0;  // 4-cycle
            v2 << 0, 0, 1, 1, 0, 0, 1, 0, 1, 1, 0, 0, 1, 0, 0, 0;  // star-ish
            instances.emplace_back(v1, v2);
        }

        double worst_diff = 0.0, worst_bound = 0.0;
        for (const auto& [v1, v2] : instances) {
            const MultiViewGraph graph({ViewAffinity(v1), ViewAffinity(v2)});
            const Matrix delta = crsp_dissimilarity(graph, RspParams{beta, 1e-6}).matrix();

            std::vector<Matrix> ps, cs;
            for (const ViewAffinity& v : graph.views()) {
                ps.push_back(transition_matrix(v));
                cs.push_back(cost_matrix(v));
            }
            const Matrix fused_p = combine_probabilities(ps, FusionMode::Union);
            const Matrix fused_c = combine_costs(cs, FusionMode::Union);

            for (int s = 0; s < 4; ++s) {
                for (int t = s + 1; t < 4; ++t) {
                    // deepen the horizon until the certified truncation error
                    // is small next to the 1e-4 comparison tolerance
                    testing::EnumeratedCost oracle;
                    for (int horizon = 12; horizon <= 22; horizon += 2) {
                        oracle = testing::enumerate_dissimilarity(fused_p, fused_c, beta, s, t,
                                                                  horizon);
                        if (oracle.tail_bound <= 5e-6) break;
                    }
                    worst_bound = std::max(worst_bound, oracle.tail_bound);
                    worst_diff = std::max(worst_diff, std::abs(delta(s, t) - oracle.expected_cost));
                }
            }
        }
        require(worst_bound <= 2e-5, "oracle tail bound " + fmt(worst_bound) + " too loose");
        require(worst_diff <= 1e-4, "worst |impl - enum| = " + fmt(worst_diff));
        return "worst |impl - enum| = " + fmt(worst_diff) + ", certified tail <= " +
               fmt(worst_bound);
    });

    harness.criterion(6, "CCR/NMI improve with the view count (n=500, c=10, 10 seeds)", [] {
        std::vector<TrendPoint> points;
        for (int m : {1, 3, 5}) points.push_back(sbm_experiment(m, 10.0, CullRule::EveryView, 10));
        std::ostringstream detail;
        detail << "CCR ";
        for (const TrendPoint& p : points) detail << fmt(p.mean_ccr) << " ";
        detail << "NMI ";
        for (const TrendPoint& p : points) detail << fmt(p.mean_nmi) << " ";
        require(points[0].mean_ccr <= points[1].mean_ccr + 1e-12 &&
                    points[1].mean_ccr <= points[2].mean_ccr + 1e-12,
                "mean CCR not non-decreasing: " + detail.str());
        require(points[0].mean_nmi <= points[1].mean_nmi + 1e-12 &&
                    points[1].mean_nmi <= points[2].mean_nmi + 1e-12,
                "mean NMI not non-decreasing: " + detail.str());
        require(points[2].mean_ccr - points[0].mean_ccr >= 5.0,
                "CCR(m=5) - CCR(m=1) < 5 points: " + detail.str());
        return detail.str();
    });

    harness.criterion(7, "CCR improves with density (m=3, c in {5,10,15}, union culling)", [] {
        std::vector<TrendPoint> points;
        for (double c : {5.0, 10.0, 15.0}) {
            points.push_back(sbm_experiment(3, c, CullRule::UnionComponent, 10));
        }
        std::ostringstream detail;
        detail << "CCR ";
        for (const TrendPoint& p : points) detail << fmt(p.mean_ccr) << " ";
        require(points[0].mean_ccr <= points[1].mean_ccr + 1e-12 &&
                    points[1].mean_ccr <= points[2].mean_ccr + 1e-12,
                "mean CCR not non-decreasing: " + detail.str());
        return detail.str();
    });

    harness.criterion(8, "metric oracles: exhaustive assignment and direct-formula NMI", [] {
        auto brute_force_ccr = [](const std::vector<int>& pred, const std::vector<int>& truth) {
            const Eigen::MatrixXi table = contingency_table(pred, truth);
            const Eigen::MatrixXi t =
                table.rows() > table.cols() ? Eigen::MatrixXi(table.transpose()) : table;
            std::vector<int> cols(static_cast<std::size_t>(t.cols()));
            for (std::size_t i = 0; i < cols.size(); ++i) cols[i] = static_cast<int>(i);
            long best = 0;
            do {
                long agree = 0;
                for (int i = 0; i < t.rows(); ++i) agree += t(i, cols[static_cast<std::size_t>(i)]);
                best = std::max(best, agree);
            } while (std::next_permutation(cols.begin(), cols.end()));
            return 100.0 * static_cast<double>(best) / static_cast<double>(pred.size());
        };
        auto direct_nmi = [](const std::vector<int>& pred, const std::vector<int>& truth) {
            const double n = static_cast<double>(pred.size());
            std::map<int, double> pa, pb;
            std::map<std::pair<int, int>, double> joint;
            for (std::size_t i = 0; i < pred.size(); ++i) {
                pa[pred[i]] += 1;
                pb[truth[i]] += 1;
                joint[{pred[i], truth[i]}] += 1;
            }
            double ha = 0, hb = 0, mi = 0;
            for (auto& [k, c] : pa) ha -= c / n * std::log(c / n);
            for (auto& [k, c] : pb) hb -= c / n * std::log(c / n);
            for (auto& [k, c] : joint) mi += c / n * std::log(c * n / (pa[k.first] * pb[k.second]));
            if (ha == 0.0 && hb == 0.0) return 1.0;
            if (ha == 0.0 || hb == 0.0) return 0.0;
            return mi / std::sqrt(ha * hb);
        };

        double worst_nmi = 0.0;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            auto gen = rng::stream(9008, seed);
            const int n = 6 + static_cast<int>(rng::below(gen, 30));
            std::vector<int> pred(static_cast<std::size_t>(n)), truth(static_cast<std::size_t>(n));
            const int kp = 2 + static_cast<int>(rng::below(gen, 4));
            const int kt = 2 + static_cast<int>(rng::below(gen, 4));
            for (int& v : pred) v = static_cast<int>(rng::below(gen, static_cast<std::uint64_t>(kp)));
            for (int& v : truth) v = static_cast<int>(rng::below(gen, static_cast<std::uint64_t>(kt)));

            const double expected_ccr = brute_force_ccr(pred, truth);
            require(ccr(pred, truth) == expected_ccr,
                    "assignment CCR differs from exhaustive maximum at seed " +
                        std::to_string(seed));
            worst_nmi = std::max(worst_nmi, std::abs(nmi(pred, truth) - direct_nmi(pred, truth)));
        }
        require(worst_nmi <= 1e-12, "NMI deviates from the direct formula by " + fmt(worst_nmi));
        return "CCR exact on 100 pairs, NMI within " + fmt(worst_nmi);
    });

    harness.criterion(9, "classical MDS reconstructs planar point sets", [] {
        double worst = 0.0;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            auto gen = rng::stream(9009, seed);
            const int n = 5 + static_cast<int>(rng::below(gen, 46));
            Matrix points(n, 2);
            for (int i = 0; i < n; ++i) {
                points(i, 0) = rng::uniform01(gen) * 20.0 - 10.0;
                points(i, 1) = rng::uniform01(gen) * 20.0 - 10.0;
            }
            Matrix delta = Matrix::Zero(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) delta(i, j) = (points.row(i) - points.row(j)).norm();
            delta.diagonal().setZero();

            const EmbeddingCoordinates embedding =
                classical_mds(DissimilarityMatrix::from_matrix(delta), 2);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    if (i == j) continue;
                    const double got = (embedding.coords.row(i) - embedding.coords.row(j)).norm();
                    worst = std::max(worst, std::abs(got - delta(i, j)) / delta(i, j));
                }
        }
        require(worst <= 1e-8, "worst relative reconstruction error " + fmt(worst));
        return "worst relative reconstruction error " + fmt(worst);
    });

    harness.criterion(10, "pipeline smoke on user-supplied affinity files", [] {
        const fs::path dir =
            fs::temp_directory_path() / ("crsp_acceptance_" + std::to_string(::getpid()));
        fs::create_directories(dir);

        // two hand-supplied dense affinity views over 12 nodes, two planted
        // groups, plus a labels file
        const int n = 12;
        auto gen = rng::stream(9010, 0);
        std::vector<int> labels(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = i < n / 2 ? 0 : 1;
        for (int v = 0; v < 2; ++v) {
            Matrix a = Matrix::Zero(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    const bool same = labels[static_cast<std::size_t>(i)] ==
                                      labels[static_cast<std::size_t>(j)];
                    const double w = (same ? 1.0 : 0.05) * (0.5 + rng::uniform01(gen));
                    a(i, j) = a(j, i) = w;
                }
            save_matrix_csv(dir / ("view_" + std::to_string(v) + ".csv"), a);
        }
        save_labels(dir / "labels.csv", labels);
        Manifest manifest;
        manifest.n = n;
        manifest.views = {"view_0.csv", "view_1.csv"};
        manifest.labels = "labels.csv";
        write_manifest(dir / "manifest.json", manifest);

        PipelineConfig config;
        config.manifest = dir / "manifest.json";
        config.output_dir = dir / "out";
        config.seed = 1;
        const PipelineResult result = run_pipeline(config);

        for (const char* name : {"delta.csv", "coords.csv", "labels.csv", "metrics.json",
                                 "timing.json", "config.json"}) {
            require(fs::exists(config.output_dir / name), std::string(name) + " missing");
        }
        std::ifstream in(config.output_dir / "metrics.json");
        const auto metrics = nlohmann::json::parse(in);
        require(metrics["ccr"].is_number() && metrics["nmi"].is_number(),
                "metric report lacks ccr/nmi numbers");
        require(result.metrics.has_value(), "pipeline returned no metric report");

        std::error_code ec;
        fs::remove_all(dir, ec);
        return "all artifacts written, ccr " + fmt(metrics["ccr"].get<double>()) + "%";
    });

    harness.criterion(11, "C-RSP at n=500, m=5 finishes within 60 s", [] {
        const SbmSample sample =
            generate_sbm(SbmParams{500, 3, 10.0, 0.9, 5, 1}, CullRule::UnionComponent);
        const auto start = std::chrono::steady_clock::now();
        const DissimilarityMatrix delta =
            crsp_dissimilarity(sample.graph, RspParams{0.02, 1e-6}, FusionMode::Union);
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        require(elapsed.count() < 60.0, "took " + fmt(elapsed.count()) + " s");
        return "n = " + std::to_string(delta.size()) + ", " + fmt(elapsed.count()) + " s";
    });

    return harness.finish();
}
