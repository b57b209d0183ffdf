#include "atlas/point_cloud.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace atlas {

namespace {

void check_unique(const std::vector<std::string>& labels, const char* what) {
    std::unordered_set<std::string> seen;
    for (const auto& s : labels) {
        if (!seen.insert(s).second) {
            throw std::invalid_argument(std::string("duplicate ") + what + " label: " + s);
        }
    }
}

bool parse_double(const std::string& cell, double& out) {
    const char* first = cell.data();
    const char* last = first + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, delim)) cells.push_back(cell);
    if (!line.empty() && line.back() == delim) cells.emplace_back();
    return cells;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace

PointCloud::PointCloud(Matrix pts, std::vector<std::string> cols, std::vector<std::string> rows)
    : points(std::move(pts)), column_names(std::move(cols)), row_ids(std::move(rows)) {
    validate();
}

PointCloud PointCloud::from_matrix(Matrix pts) {
    PointCloud pc;
    pc.points = std::move(pts);
    pc.column_names.reserve(pc.points.cols());
    for (Eigen::Index j = 0; j < pc.points.cols(); ++j) pc.column_names.push_back("c" + std::to_string(j));
    pc.row_ids.reserve(pc.points.rows());
    for (Eigen::Index i = 0; i < pc.points.rows(); ++i) pc.row_ids.push_back("r" + std::to_string(i));
    pc.validate();
    return pc;
}

void PointCloud::validate() const {
    if (points.rows() < 1 || points.cols() < 1) {
        throw std::invalid_argument("point cloud must be at least 1x1");
    }
    if (!points.allFinite()) {
        for (Eigen::Index i = 0; i < points.rows(); ++i) {
            for (Eigen::Index j = 0; j < points.cols(); ++j) {
                if (!std::isfinite(points(i, j))) {
                    throw std::invalid_argument("non-finite entry at row " + std::to_string(i) +
                                                ", column " + std::to_string(j));
                }
            }
        }
    }
    if (static_cast<Eigen::Index>(column_names.size()) != points.cols()) {
        throw std::invalid_argument("column_names length does not match matrix width");
    }
    if (static_cast<Eigen::Index>(row_ids.size()) != points.rows()) {
        throw std::invalid_argument("row_ids length does not match matrix height");
    }
    check_unique(column_names, "column");
    check_unique(row_ids, "row");
}

PointCloud load_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    if (lines.empty()) throw std::runtime_error(path.string() + ": empty file");

    const char delim = lines[0].find('\t') != std::string::npos ? '\t' : ',';

    // Header detection: a first row with any non-numeric cell is a header.
    auto first_cells = split_line(lines[0], delim);
    bool has_header = false;
    for (const auto& c : first_cells) {
        double v;
        if (!parse_double(c, v)) {
            has_header = true;
            break;
        }
    }

    std::vector<std::string> column_names;
    size_t data_start = 0;
    if (has_header) {
        column_names = first_cells;
        data_start = 1;
        if (lines.size() == 1) throw std::runtime_error(path.string() + ": header but no data rows");
    }

    const size_t n_rows = lines.size() - data_start;
    const size_t n_cols = split_line(lines[data_start], delim).size();
    if (has_header && column_names.size() != n_cols) {
        throw std::runtime_error(path.string() + ": header has " + std::to_string(column_names.size()) +
                                 " columns but row 1 has " + std::to_string(n_cols));
    }

    Matrix m(n_rows, n_cols);
    for (size_t r = 0; r < n_rows; ++r) {
        auto cells = split_line(lines[data_start + r], delim);
        if (cells.size() != n_cols) {
            throw std::runtime_error(path.string() + ": row " + std::to_string(r + 1) + " has " +
                                     std::to_string(cells.size()) + " columns, expected " +
                                     std::to_string(n_cols));
        }
        for (size_t c = 0; c < n_cols; ++c) {
            double v;
            if (!parse_double(cells[c], v) || !std::isfinite(v)) {
                throw std::runtime_error(path.string() + ": cannot parse cell at row " +
                                         std::to_string(r + 1) + ", column " + std::to_string(c + 1) +
                                         ": '" + cells[c] + "'");
            }
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
        }
    }

    PointCloud pc = PointCloud::from_matrix(std::move(m));
    if (has_header) pc.column_names = std::move(column_names);
    pc.validate();
    return pc;
}

void save_matrix(const PointCloud& pc, const std::filesystem::path& path, char delimiter) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (size_t j = 0; j < pc.column_names.size(); ++j) {
        if (j) out << delimiter;
        out << pc.column_names[j];
    }
    out << '\n';
    for (Eigen::Index i = 0; i < pc.points.rows(); ++i) {
        for (Eigen::Index j = 0; j < pc.points.cols(); ++j) {
            if (j) out << delimiter;
            out << format_double(pc.points(i, j));
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace atlas
