// SPDX-License-Identifier: Apache-2.0
#include "crsp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace crsp {

namespace {

std::vector<int> compact_labels(const std::vector<int>& labels) {
    std::map<int, int> remap;
    for (int v : labels) remap.emplace(v, 0);
    int next = 0;
    for (auto& [value, index] : remap) index = next++;
    std::vector<int> out;
    out.reserve(labels.size());
    for (int v : labels) out.push_back(remap[v]);
    return out;
}

// Kuhn-Munkres on a square cost matrix, O(n^3). Returns the column assigned
// to each row.
std::vector<int> min_cost_assignment(const Matrix& cost) {
    const int n = static_cast<int>(cost.rows());
    std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0), v(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<int> match(static_cast<std::size_t>(n) + 1, 0), way(static_cast<std::size_t>(n) + 1, 0);

    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(n) + 1, std::numeric_limits<double>::infinity());
        std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
        do {
            used[static_cast<std::size_t>(j0)] = true;
            const int i0 = match[static_cast<std::size_t>(j0)];
            int j1 = 0;
            double delta = std::numeric_limits<double>::infinity();
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (match[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> row_to_col(static_cast<std::size_t>(n), -1);
    for (int j = 1; j <= n; ++j) {
        if (match[static_cast<std::size_t>(j)] > 0) row_to_col[static_cast<std::size_t>(match[static_cast<std::size_t>(j)]) - 1] = j - 1;
    }
    return row_to_col;
}

void check_lengths(const std::vector<int>& pred, const std::vector<int>& truth) {
    if (pred.size() != truth.size()) {
        throw ValidationError("label vectors differ in length: " + std::to_string(pred.size()) +
                              " vs " + std::to_string(truth.size()));
    }
    if (pred.empty()) throw ValidationError("label vectors are empty");
}

}  // namespace

Eigen::MatrixXi contingency_table(const std::vector<int>& pred, const std::vector<int>& truth) {
    check_lengths(pred, truth);
    const std::vector<int> p = compact_labels(pred);
    const std::vector<int> t = compact_labels(truth);
    const int kp = *std::max_element(p.begin(), p.end()) + 1;
    const int kt = *std::max_element(t.begin(), t.end()) + 1;
    Eigen::MatrixXi table = Eigen::MatrixXi::Zero(kp, kt);
    for (std::size_t i = 0; i < p.size(); ++i) ++table(p[i], t[i]);
    return table;
}

double ccr(const std::vector<int>& pred, const std::vector<int>& truth) {
    const Eigen::MatrixXi table = contingency_table(pred, truth);
    const int side = static_cast<int>(std::max(table.rows(), table.cols()));

    // pad to square and negate counts: min-cost assignment == max agreement
    Matrix cost = Matrix::Zero(side, side);
    cost.topLeftCorner(table.rows(), table.cols()) = -table.cast<double>();
    const std::vector<int> assignment = min_cost_assignment(cost);

    long matched = 0;
    for (int i = 0; i < table.rows(); ++i) {
        const int j = assignment[static_cast<std::size_t>(i)];
        if (j < table.cols()) matched += table(i, j);
    }
    return 100.0 * static_cast<double>(matched) / static_cast<double>(pred.size());
}

double nmi(const std::vector<int>& pred, const std::vector<int>& truth,
           NmiNormalization normalization) {
    const Eigen::MatrixXi table = contingency_table(pred, truth);
    const double n = static_cast<double>(pred.size());

    const Eigen::VectorXi row_sums = table.rowwise().sum();
    const Eigen::VectorXi col_sums = table.colwise().sum();

    double h_pred = 0.0, h_truth = 0.0, mutual = 0.0;
    for (int i = 0; i < row_sums.size(); ++i) {
        if (row_sums(i) > 0) h_pred -= row_sums(i) / n * std::log(row_sums(i) / n);
    }
    for (int j = 0; j < col_sums.size(); ++j) {
        if (col_sums(j) > 0) h_truth -= col_sums(j) / n * std::log(col_sums(j) / n);
    }
    for (int i = 0; i < table.rows(); ++i) {
        for (int j = 0; j < table.cols(); ++j) {
            if (table(i, j) == 0) continue;
            mutual += table(i, j) / n *
                      std::log(table(i, j) * n / (static_cast<double>(row_sums(i)) * col_sums(j)));
        }
    }

    if (h_pred == 0.0 && h_truth == 0.0) return 1.0;  // two single-cluster partitions
    if (h_pred == 0.0 || h_truth == 0.0) return 0.0;

    const double denom = normalization == NmiNormalization::Geometric
                             ? std::sqrt(h_pred * h_truth)
                             : 0.5 * (h_pred + h_truth);
    return std::clamp(mutual / denom, 0.0, 1.0);
}

MetricReport evaluate_clustering(const std::vector<int>& pred, const std::vector<int>& truth) {
    MetricReport report;
    report.ccr_percent = ccr(pred, truth);
    report.nmi = nmi(pred, truth);
    report.contingency = contingency_table(pred, truth);
    return report;
}

}  // namespace crsp
