// SPDX-License-Identifier: Apache-2.0
#include "crsp/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace crsp {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

double parse_double(const std::string& token, const std::filesystem::path& path) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &used);
    } catch (const std::exception&) {
        throw IoError("cannot parse number '" + token + "' in " + path.string());
    }
    while (used < token.size() && std::isspace(static_cast<unsigned char>(token[used]))) ++used;
    if (used != token.size()) {
        throw IoError("trailing characters after number '" + token + "' in " + path.string());
    }
    return value;
}

std::string format_double(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string token;
    std::istringstream in(line);
    while (std::getline(in, token, delim)) out.push_back(token);
    return out;
}

bool blank(const std::string& line) {
    return line.find_first_not_of(" \t\r\n") == std::string::npos;
}

}  // namespace

Manifest read_manifest(const std::filesystem::path& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw IoError("manifest " + path.string() + " is not valid JSON: " + e.what());
    }
    Manifest manifest;
    try {
        manifest.n = doc.at("n").get<int>();
        const auto base = path.parent_path();
        for (const auto& view : doc.at("views")) {
            std::filesystem::path p = view.get<std::string>();
            manifest.views.push_back(p.is_absolute() ? p : base / p);
        }
        if (doc.contains("labels") && !doc["labels"].is_null()) {
            std::filesystem::path p = doc["labels"].get<std::string>();
            manifest.labels = p.is_absolute() ? p : base / p;
        }
    } catch (const nlohmann::json::exception& e) {
        throw IoError("manifest " + path.string() + " is malformed: " + e.what());
    }
    if (manifest.n < 1) throw ValidationError("manifest declares n < 1");
    if (manifest.views.empty()) throw ValidationError("manifest lists no views");
    return manifest;
}

void write_manifest(const std::filesystem::path& path, const Manifest& manifest) {
    nlohmann::json doc;
    doc["n"] = manifest.n;
    doc["views"] = nlohmann::json::array();
    for (const auto& view : manifest.views) doc["views"].push_back(view.string());
    if (manifest.labels) doc["labels"] = manifest.labels->string();
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << doc.dump(2) << "\n";
}

Matrix load_matrix_csv(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (blank(line)) continue;
        std::vector<double> row;
        for (const std::string& token : split(line, ',')) row.push_back(parse_double(token, path));
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw IoError("ragged CSV row in " + path.string());
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError("empty matrix file " + path.string());
    Matrix out(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.front().size(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return out;
}

void save_matrix_csv(const std::filesystem::path& path, const Matrix& matrix) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
        for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
            if (j) out << ',';
            out << format_double(matrix(i, j));
        }
        out << '\n';
    }
}

Matrix load_view_file(const std::filesystem::path& path, int n) {
    const std::string content = read_file(path);
    std::istringstream in(content);
    std::string line;

    // sniff: first content line with a comma means dense CSV
    bool dense = false;
    while (std::getline(in, line)) {
        if (blank(line) || line[line.find_first_not_of(" \t")] == '%') continue;
        dense = line.find(',') != std::string::npos;
        break;
    }

    if (dense) {
        Matrix a = load_matrix_csv(path);
        if (a.rows() != n || a.cols() != n) {
            throw ValidationError("view size mismatch: " + path.string() + " is " +
                                  std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                  ", manifest declares n=" + std::to_string(n));
        }
        return a;
    }

    Matrix a = Matrix::Zero(n, n);
    std::istringstream again(content);
    while (std::getline(again, line)) {
        if (blank(line)) continue;
        const std::size_t start = line.find_first_not_of(" \t");
        if (line[start] == '%') continue;
        std::istringstream fields(line);
        long i = 0, j = 0;
        std::string value_token;
        if (!(fields >> i >> j >> value_token)) {
            throw IoError("malformed triplet line '" + line + "' in " + path.string());
        }
        std::string rest;
        if (fields >> rest) throw IoError("extra fields on triplet line '" + line + "'");
        if (i < 1 || i > n || j < 1 || j > n) {
            throw ValidationError("triplet index (" + std::to_string(i) + "," + std::to_string(j) +
                                  ") outside 1.." + std::to_string(n) + " in " + path.string());
        }
        a(i - 1, j - 1) = parse_double(value_token, path);
    }
    return a;
}

void save_view_triplets(const std::filesystem::path& path, const Matrix& matrix) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "% coordinate triplets, 1-based: i j value\n";
    for (Eigen::Index i = 0; i < matrix.rows(); ++i)
        for (Eigen::Index j = 0; j < matrix.cols(); ++j)
            if (matrix(i, j) != 0.0)
                out << (i + 1) << ' ' << (j + 1) << ' ' << format_double(matrix(i, j)) << '\n';
}

std::vector<int> load_labels(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    std::vector<int> labels;
    std::string line;
    while (std::getline(in, line)) {
        if (blank(line)) continue;
        labels.push_back(static_cast<int>(parse_double(line, path)));
    }
    if (labels.empty()) throw IoError("empty labels file " + path.string());
    return labels;
}

void save_labels(const std::filesystem::path& path, const std::vector<int>& labels) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    for (int label : labels) out << label << '\n';
}

LoadedDataset load_dataset(const std::filesystem::path& manifest_path) {
    const Manifest manifest = read_manifest(manifest_path);
    std::vector<ViewAffinity> views;
    views.reserve(manifest.views.size());
    for (const auto& view_path : manifest.views) {
        views.emplace_back(load_view_file(view_path, manifest.n));
    }
    LoadedDataset dataset{MultiViewGraph(std::move(views)), std::nullopt};
    if (manifest.labels) {
        std::vector<int> labels = load_labels(*manifest.labels);
        if (static_cast<int>(labels.size()) != manifest.n) {
            throw ValidationError("labels file has " + std::to_string(labels.size()) +
                                  " entries, manifest declares n=" + std::to_string(manifest.n));
        }
        dataset.labels = std::move(labels);
    }
    return dataset;
}

MultiViewGraph load_multiview_graph(const std::filesystem::path& manifest_path) {
    return load_dataset(manifest_path).graph;
}

}  // namespace crsp
