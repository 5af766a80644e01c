#include "tomoqa/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace tomoqa {

double rmse(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("rmse: shape mismatch");
    if (a.empty()) throw std::invalid_argument("rmse: empty input");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(a.size()));
}

double rmse(const Image& a, const Image& b) {
    if (a.side != b.side) throw std::invalid_argument("rmse: shape mismatch");
    return rmse(to_doubles(a), to_doubles(b));
}

double rmse(const Image& a, const FloatImage& b) {
    if (a.side != b.side) throw std::invalid_argument("rmse: shape mismatch");
    return rmse(to_doubles(a), b.pixels);
}

namespace {

struct WindowStats {
    double mean_a, mean_b, var_a, var_b, cov;
};

WindowStats window_stats(std::span<const double> a, std::span<const double> b, int side,
                         int r0, int c0, int w) {
    double sa = 0.0, sb = 0.0;
    for (int r = r0; r < r0 + w; ++r) {
        for (int c = c0; c < c0 + w; ++c) {
            sa += a[static_cast<std::size_t>(r) * side + c];
            sb += b[static_cast<std::size_t>(r) * side + c];
        }
    }
    const double count = static_cast<double>(w) * w;
    const double ma = sa / count, mb = sb / count;
    double va = 0.0, vb = 0.0, cov = 0.0;
    for (int r = r0; r < r0 + w; ++r) {
        for (int c = c0; c < c0 + w; ++c) {
            const double da = a[static_cast<std::size_t>(r) * side + c] - ma;
            const double db = b[static_cast<std::size_t>(r) * side + c] - mb;
            va += da * da;
            vb += db * db;
            cov += da * db;
        }
    }
    return {ma, mb, va / count, vb / count, cov / count};
}

}  // namespace

double ssim(std::span<const double> a, std::span<const double> b, int side,
            double dynamic_range) {
    if (a.size() != b.size() || static_cast<int>(a.size()) != side * side)
        throw std::invalid_argument("ssim: shape mismatch");
    if (!(dynamic_range > 0.0)) throw std::invalid_argument("ssim: dynamic range must be positive");

    const double c1 = (0.01 * dynamic_range) * (0.01 * dynamic_range);
    const double c2 = (0.03 * dynamic_range) * (0.03 * dynamic_range);
    const int w = side >= 7 ? 7 : side;

    double total = 0.0;
    int windows = 0;
    for (int r0 = 0; r0 + w <= side; ++r0) {
        for (int c0 = 0; c0 + w <= side; ++c0) {
            const WindowStats s = window_stats(a, b, side, r0, c0, w);
            const double numerator = (2.0 * s.mean_a * s.mean_b + c1) * (2.0 * s.cov + c2);
            const double denominator =
                (s.mean_a * s.mean_a + s.mean_b * s.mean_b + c1) * (s.var_a + s.var_b + c2);
            total += numerator / denominator;
            ++windows;
        }
    }
    return total / windows;
}

double ssim(const Image& a, const Image& b) {
    if (a.side != b.side || a.bit_depth != b.bit_depth)
        throw std::invalid_argument("ssim: shape or depth mismatch");
    return ssim(to_doubles(a), to_doubles(b), a.side, static_cast<double>(a.max_value()));
}

double stability_ratio(std::span<const double> x1, std::span<const double> x2,
                       std::span<const double> y1, std::span<const double> y2) {
    if (x1.size() != x2.size() || y1.size() != y2.size())
        throw std::invalid_argument("stability_ratio: shape mismatch");
    double dx = 0.0, dy = 0.0;
    for (std::size_t i = 0; i < x1.size(); ++i) dx += (x1[i] - x2[i]) * (x1[i] - x2[i]);
    for (std::size_t i = 0; i < y1.size(); ++i) dy += (y1[i] - y2[i]) * (y1[i] - y2[i]);
    if (dy == 0.0) throw std::invalid_argument("stability_ratio: measurements are identical");
    return std::sqrt(dx) / std::sqrt(dy);
}

}  // namespace tomoqa
