#pragma once

#include <span>
#include <string>
#include <vector>

namespace tomoqa {

struct MatrixEntry {
    int col;
    double weight;  // ray-pixel intersection length in pixel units, > 0
};

// Sparse Radon system matrix. Rows are view-major: row v*bins + t is ray t
// of view v. All-zero rows are kept (stored empty) so the layout is dense
// in rows.
struct SystemMatrix {
    int rows = 0;
    int cols = 0;
    int views = 0;
    int bins = 0;
    std::vector<std::vector<MatrixEntry>> row_entries;  // entries sorted by col

    std::size_t nnz() const {
        std::size_t n = 0;
        for (const auto& r : row_entries) n += r.size();
        return n;
    }
};

// Projection measurements, view-major: all bins of view 0, then view 1, ...
struct Sinogram {
    int views = 0;
    int bins = 0;
    std::vector<double> values;
};

// Angles k*180/V for k = 0..V-1, in degrees. 0 degrees projects from the
// top of the image (rays travel vertically); increasing angles rotate
// clockwise.
std::vector<double> angle_set(int views);

// N parallel rays per view at 1-pixel spacing, centered on the grid.
// Weights are exact chord lengths through each pixel (Siddon traversal).
// Rays lying exactly on a pixel boundary assign the chord to the pixel on
// the positive side of the boundary.
SystemMatrix build_system_matrix(int side, std::span<const double> angles_deg);

Sinogram project(const SystemMatrix& m, std::span<const double> x);

// Adjoint M^T y.
std::vector<double> backproject(const SystemMatrix& m, std::span<const double> y);

// Text dump: "m n nnz" header, then "row col weight" triples with
// 17-significant-digit weights.
void save_system_matrix(const SystemMatrix& m, const std::string& path);
SystemMatrix load_system_matrix(const std::string& path);

}  // namespace tomoqa
