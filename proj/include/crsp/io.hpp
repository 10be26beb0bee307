// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "crsp/common.hpp"
#include "crsp/graph.hpp"

namespace crsp {

// File formats
//   manifest:  JSON {"n": int, "views": [path, ...], "labels": path?}
//              relative paths resolve against the manifest's directory
//   view:      dense CSV (n rows of n comma-separated reals) or coordinate
//              triplets ("i j value" per line, 1-based, '%' comments); a
//              view line containing a comma is parsed as dense CSV
//   labels:    one integer per line, line k = node k
// Writers print doubles with 17 significant digits so load -> save -> load
// round-trips bit-identically.

struct Manifest {
    int n = 0;
    std::vector<std::filesystem::path> views;
    std::optional<std::filesystem::path> labels;
};

Manifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const Manifest& manifest);

/// Any rectangular comma-separated numeric matrix.
Matrix load_matrix_csv(const std::filesystem::path& path);
void save_matrix_csv(const std::filesystem::path& path, const Matrix& matrix);

/// One affinity view, auto-detecting dense CSV vs coordinate triplets.
/// `n` is the node count declared by the manifest.
Matrix load_view_file(const std::filesystem::path& path, int n);
void save_view_triplets(const std::filesystem::path& path, const Matrix& matrix);

std::vector<int> load_labels(const std::filesystem::path& path);
void save_labels(const std::filesystem::path& path, const std::vector<int>& labels);

struct LoadedDataset {
    MultiViewGraph graph;
    std::optional<std::vector<int>> labels;
};

/// Graph plus optional ground-truth labels per the manifest.
LoadedDataset load_dataset(const std::filesystem::path& manifest_path);

/// Views in manifest order, self-loops stripped.
MultiViewGraph load_multiview_graph(const std::filesystem::path& manifest_path);

}  // namespace crsp
