// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "crsp/common.hpp"

namespace crsp {

/// Contingency table between two labelings. Distinct label values of each
/// argument are remapped to consecutive indices in sorted order, so metrics
/// built on the table are invariant under relabeling.
Eigen::MatrixXi contingency_table(const std::vector<int>& pred, const std::vector<int>& truth);

/// Correct classification rate in percent: the maximum fraction of agreeing
/// nodes over all one-to-one assignments of predicted to true labels
/// (optimal assignment on the contingency table).
double ccr(const std::vector<int>& pred, const std::vector<int>& truth);

enum class NmiNormalization { Geometric, Arithmetic };

/// Normalized mutual information, natural logarithms. Geometric mean
/// normalization I / sqrt(H_pred H_truth) by default. Two identical
/// single-cluster partitions score 1; if exactly one entropy is zero the
/// score is 0.
double nmi(const std::vector<int>& pred, const std::vector<int>& truth,
           NmiNormalization normalization = NmiNormalization::Geometric);

struct MetricReport {
    double ccr_percent = 0.0;
    double nmi = 0.0;
    Eigen::MatrixXi contingency;
};

MetricReport evaluate_clustering(const std::vector<int>& pred, const std::vector<int>& truth);

}  // namespace crsp
