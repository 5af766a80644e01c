#include "tomoqa/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace tomoqa {

namespace {

constexpr double kAxisEps = 1e-12;   // direction component treated as zero
constexpr double kChordEps = 1e-12;  // intervals shorter than this are corner touches

// Chord lengths of the line p(t) = (ox, oy) + t*(dx, dy), |d| = 1, through
// the pixels of the [0, n]^2 grid. Appends (pixel index, length) pairs.
void trace_ray(double ox, double oy, double dx, double dy, int n,
               std::vector<MatrixEntry>& out) {
    if (std::abs(dx) < kAxisEps) {
        // Vertical ray x = ox. floor() puts boundary hits on the positive side.
        const double x = ox;
        if (x < 0.0 || x >= static_cast<double>(n)) return;
        const int col = static_cast<int>(std::floor(x));
        for (int r = 0; r < n; ++r) out.push_back({r * n + col, 1.0});
        return;
    }
    if (std::abs(dy) < kAxisEps) {
        const double y = oy;
        if (y < 0.0 || y >= static_cast<double>(n)) return;
        const int row = static_cast<int>(std::floor(y));
        for (int c = 0; c < n; ++c) out.push_back({row * n + c, 1.0});
        return;
    }

    const double tx0 = (0.0 - ox) / dx, tx1 = (n - ox) / dx;
    const double ty0 = (0.0 - oy) / dy, ty1 = (n - oy) / dy;
    const double tmin = std::max(std::min(tx0, tx1), std::min(ty0, ty1));
    const double tmax = std::min(std::max(tx0, tx1), std::max(ty0, ty1));
    if (tmax - tmin <= kChordEps) return;

    std::vector<double> crossings;
    crossings.reserve(2 * n + 4);
    crossings.push_back(tmin);
    crossings.push_back(tmax);
    for (int k = 0; k <= n; ++k) {
        const double tx = (k - ox) / dx;
        if (tx > tmin && tx < tmax) crossings.push_back(tx);
        const double ty = (k - oy) / dy;
        if (ty > tmin && ty < tmax) crossings.push_back(ty);
    }
    std::sort(crossings.begin(), crossings.end());

    for (std::size_t i = 0; i + 1 < crossings.size(); ++i) {
        const double len = crossings[i + 1] - crossings[i];
        if (len <= kChordEps) continue;
        const double tm = 0.5 * (crossings[i] + crossings[i + 1]);
        const int col = static_cast<int>(std::floor(ox + tm * dx));
        const int row = static_cast<int>(std::floor(oy + tm * dy));
        if (col < 0 || col >= n || row < 0 || row >= n) continue;
        out.push_back({row * n + col, len});
    }
}

}  // namespace

std::vector<double> angle_set(int views) {
    if (views < 1) throw std::invalid_argument("view count must be positive");
    std::vector<double> angles(views);
    for (int k = 0; k < views; ++k) angles[k] = k * 180.0 / views;
    return angles;
}

SystemMatrix build_system_matrix(int side, std::span<const double> angles_deg) {
    if (side < 1) throw std::invalid_argument("image side must be positive");
    SystemMatrix m;
    m.views = static_cast<int>(angles_deg.size());
    m.bins = side;
    m.rows = m.views * m.bins;
    m.cols = side * side;
    m.row_entries.resize(m.rows);

    const double center = side / 2.0;
    for (int v = 0; v < m.views; ++v) {
        const double theta = angles_deg[v] * std::numbers::pi / 180.0;
        // Detector axis u, ray direction d (perpendicular). At 0 degrees the
        // detector runs along +x and rays travel down the columns.
        const double ux = std::cos(theta), uy = std::sin(theta);
        const double dx = -std::sin(theta), dy = std::cos(theta);
        for (int t = 0; t < side; ++t) {
            const double s = t - (side - 1) / 2.0;
            auto& row = m.row_entries[static_cast<std::size_t>(v) * side + t];
            trace_ray(center + s * ux, center + s * uy, dx, dy, side, row);
            std::sort(row.begin(), row.end(),
                      [](const MatrixEntry& a, const MatrixEntry& b) { return a.col < b.col; });
            // merge duplicate pixels from repeated crossings
            std::vector<MatrixEntry> merged;
            for (const MatrixEntry& e : row) {
                if (!merged.empty() && merged.back().col == e.col)
                    merged.back().weight += e.weight;
                else
                    merged.push_back(e);
            }
            row = std::move(merged);
        }
    }
    return m;
}

Sinogram project(const SystemMatrix& m, std::span<const double> x) {
    if (static_cast<int>(x.size()) != m.cols)
        throw std::invalid_argument("image vector length does not match matrix columns");
    Sinogram y;
    y.views = m.views;
    y.bins = m.bins;
    y.values.assign(m.rows, 0.0);
    for (int r = 0; r < m.rows; ++r) {
        double sum = 0.0;
        for (const MatrixEntry& e : m.row_entries[r]) sum += e.weight * x[e.col];
        y.values[r] = sum;
    }
    return y;
}

std::vector<double> backproject(const SystemMatrix& m, std::span<const double> y) {
    if (static_cast<int>(y.size()) != m.rows)
        throw std::invalid_argument("sinogram length does not match matrix rows");
    std::vector<double> x(m.cols, 0.0);
    for (int r = 0; r < m.rows; ++r)
        for (const MatrixEntry& e : m.row_entries[r]) x[e.col] += e.weight * y[r];
    return x;
}

void save_system_matrix(const SystemMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << m.rows << ' ' << m.cols << ' ' << m.nnz() << '\n';
    char buf[64];
    for (int r = 0; r < m.rows; ++r) {
        for (const MatrixEntry& e : m.row_entries[r]) {
            std::snprintf(buf, sizeof buf, "%.17g", e.weight);
            out << r << ' ' << e.col << ' ' << buf << '\n';
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

SystemMatrix load_system_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ":1: empty file");
    std::istringstream header(line);
    long rows = 0, cols = 0;
    std::size_t nnz = 0;
    if (!(header >> rows >> cols >> nnz) || rows < 0 || cols < 0)
        throw std::runtime_error(path + ":1: malformed header, expected 'm n nnz'");
    SystemMatrix m;
    m.rows = static_cast<int>(rows);
    m.cols = static_cast<int>(cols);
    m.row_entries.resize(m.rows);
    int line_no = 1;
    std::size_t read = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        long r = 0, c = 0;
        double w = 0.0;
        if (!(ls >> r >> c >> w) || r < 0 || r >= rows || c < 0 || c >= cols)
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": bad triple");
        m.row_entries[r].push_back({static_cast<int>(c), w});
        ++read;
    }
    if (read != nnz)
        throw std::runtime_error(path + ": header promised " + std::to_string(nnz) +
                                 " entries, found " + std::to_string(read));
    // views/bins are not part of the dump; callers that need the view
    // structure must rebuild from geometry.
    m.views = 0;
    m.bins = 0;
    return m;
}

}  // namespace tomoqa
