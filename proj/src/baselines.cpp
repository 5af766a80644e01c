#include "tomoqa/baselines.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace tomoqa {

namespace {

Eigen::MatrixXd to_dense(const SystemMatrix& m) {
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(m.rows, m.cols);
    for (int r = 0; r < m.rows; ++r)
        for (const MatrixEntry& e : m.row_entries[r]) dense(r, e.col) += e.weight;
    return dense;
}

int image_side_from_cols(int cols) {
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(cols))));
    if (side * side != cols)
        throw std::invalid_argument("matrix columns do not form a square image");
    return side;
}

int next_pow2_at_least(int n) {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace

std::vector<double> moore_penrose_pseudoinverse(const SystemMatrix& m, double rcond) {
    const Eigen::MatrixXd dense = to_dense(m);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(dense, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    const double cutoff = sigma.size() > 0 ? rcond * sigma(0) : 0.0;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(sigma.size());
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
        if (sigma(i) > cutoff && sigma(i) > 0.0) inv(i) = 1.0 / sigma(i);
    const Eigen::MatrixXd pinv = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();

    std::vector<double> out(static_cast<std::size_t>(m.cols) * m.rows);
    for (int i = 0; i < m.cols; ++i)
        for (int j = 0; j < m.rows; ++j) out[static_cast<std::size_t>(i) * m.rows + j] = pinv(i, j);
    return out;
}

std::vector<double> pinv_solve(const SystemMatrix& m, std::span<const double> y,
                               PinvOptions opts) {
    if (static_cast<int>(y.size()) != m.rows)
        throw std::invalid_argument("measurement length does not match matrix rows");
    const Eigen::MatrixXd dense = to_dense(m);
    const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(y.data(), y.size());
    Eigen::BDCSVD<Eigen::MatrixXd> svd(dense, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    const double cutoff = sigma.size() > 0 ? opts.rcond * sigma(0) : 0.0;
    Eigen::VectorXd coeffs = svd.matrixU().transpose() * rhs;
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
        coeffs(i) = (sigma(i) > cutoff && sigma(i) > 0.0) ? coeffs(i) / sigma(i) : 0.0;
    const Eigen::VectorXd x = svd.matrixV() * coeffs;
    return {x.data(), x.data() + x.size()};
}

FloatImage pinv_reconstruct(const SystemMatrix& m, std::span<const double> y, PinvOptions opts) {
    FloatImage img;
    img.side = image_side_from_cols(m.cols);
    img.pixels = pinv_solve(m, y, opts);
    return img;
}

FloatImage fbp_reconstruct(const Sinogram& sino, std::span<const double> angles_deg, int side) {
    if (sino.bins != side)
        throw std::invalid_argument("sinogram bin count does not match image side");
    if (sino.views != static_cast<int>(angles_deg.size()))
        throw std::invalid_argument("sinogram view count does not match angle list");
    if (sino.values.size() != static_cast<std::size_t>(sino.views) * sino.bins)
        throw std::invalid_argument("sinogram value count does not match layout");

    const int views = sino.views;
    const int padded = next_pow2_at_least(2 * side);

    // Ramp response 2*f (f in cycles/sample) so the Nyquist gain is 1.
    std::vector<double> ramp(padded);
    for (int k = 0; k < padded; ++k)
        ramp[k] = 2.0 * std::min(k, padded - k) / static_cast<double>(padded);

    Eigen::FFT<double> fft;
    std::vector<std::vector<double>> filtered(views);
    for (int v = 0; v < views; ++v) {
        std::vector<double> padded_proj(padded, 0.0);
        for (int t = 0; t < side; ++t) padded_proj[t] = sino.values[static_cast<std::size_t>(v) * side + t];
        std::vector<std::complex<double>> freq;
        fft.fwd(freq, padded_proj);
        for (int k = 0; k < padded; ++k) freq[k] *= ramp[k];
        std::vector<double> back;
        fft.inv(back, freq);
        filtered[v].assign(back.begin(), back.begin() + side);
    }

    FloatImage img;
    img.side = side;
    img.pixels.assign(static_cast<std::size_t>(side) * side, 0.0);
    const double center = side / 2.0;
    const double scale = std::numbers::pi / (2.0 * views);
    for (int v = 0; v < views; ++v) {
        const double theta = angles_deg[v] * std::numbers::pi / 180.0;
        const double ux = std::cos(theta), uy = std::sin(theta);
        for (int r = 0; r < side; ++r) {
            for (int c = 0; c < side; ++c) {
                const double px = c + 0.5 - center;
                const double py = r + 0.5 - center;
                const double t = px * ux + py * uy + (side - 1) / 2.0;
                if (t <= -1.0 || t >= static_cast<double>(side)) continue;
                const int t0 = static_cast<int>(std::floor(t));
                const double frac = t - t0;
                double value = 0.0;
                if (t0 >= 0) value += filtered[v][t0] * (1.0 - frac);
                if (t0 + 1 < side) value += filtered[v][t0 + 1] * frac;
                img.pixels[static_cast<std::size_t>(r) * side + c] += value;
            }
        }
    }
    for (double& p : img.pixels) p *= scale;
    return img;
}

namespace {

FloatImage sart_run(const SystemMatrix& m, std::span<const double> y, SartOptions opts,
                    std::vector<double>* residual_trace) {
    if (static_cast<int>(y.size()) != m.rows)
        throw std::invalid_argument("measurement length does not match matrix rows");
    if (!(opts.relaxation > 0.0) || !(opts.relaxation < 2.0))
        throw std::invalid_argument("relaxation must be in (0, 2)");
    if (opts.iterations < 0) throw std::invalid_argument("iterations must be non-negative");
    if (m.views <= 0 || m.bins <= 0 || m.views * m.bins != m.rows)
        throw std::invalid_argument("system matrix lacks view structure");

    std::vector<double> row_sum(m.rows, 0.0);
    for (int r = 0; r < m.rows; ++r)
        for (const MatrixEntry& e : m.row_entries[r]) row_sum[r] += e.weight;

    // Per-view column sums.
    std::vector<std::vector<double>> col_sum(m.views, std::vector<double>(m.cols, 0.0));
    for (int v = 0; v < m.views; ++v)
        for (int t = 0; t < m.bins; ++t)
            for (const MatrixEntry& e : m.row_entries[static_cast<std::size_t>(v) * m.bins + t])
                col_sum[v][e.col] += e.weight;

    std::vector<double> x(m.cols, 0.0);
    std::vector<double> update(m.cols);
    for (int it = 0; it < opts.iterations; ++it) {
        for (int v = 0; v < m.views; ++v) {
            std::fill(update.begin(), update.end(), 0.0);
            for (int t = 0; t < m.bins; ++t) {
                const int row = v * m.bins + t;
                if (row_sum[row] == 0.0) continue;
                double mx = 0.0;
                for (const MatrixEntry& e : m.row_entries[row]) mx += e.weight * x[e.col];
                const double scaled_residual = (y[row] - mx) / row_sum[row];
                for (const MatrixEntry& e : m.row_entries[row])
                    update[e.col] += e.weight * scaled_residual;
            }
            for (int j = 0; j < m.cols; ++j)
                if (col_sum[v][j] > 0.0) x[j] += opts.relaxation * update[j] / col_sum[v][j];
        }
        if (residual_trace) {
            double norm2 = 0.0;
            for (int r = 0; r < m.rows; ++r) {
                double mx = 0.0;
                for (const MatrixEntry& e : m.row_entries[r]) mx += e.weight * x[e.col];
                norm2 += (mx - y[r]) * (mx - y[r]);
            }
            residual_trace->push_back(std::sqrt(norm2));
        }
    }

    FloatImage img;
    img.side = image_side_from_cols(m.cols);
    img.pixels = std::move(x);
    return img;
}

}  // namespace

FloatImage sart_reconstruct(const SystemMatrix& m, std::span<const double> y, SartOptions opts) {
    return sart_run(m, y, opts, nullptr);
}

std::vector<double> sart_residual_trace(const SystemMatrix& m, std::span<const double> y,
                                        SartOptions opts) {
    std::vector<double> trace;
    sart_run(m, y, opts, &trace);
    return trace;
}

Image discretize(const FloatImage& img, int bits) {
    if (bits < 1) throw std::invalid_argument("bits must be positive");
    for (double p : img.pixels)
        if (!std::isfinite(p)) throw std::invalid_argument("non-finite pixel in discretize");
    Image out = make_image(img.side, bits);
    if (bits == 1) {
        for (std::size_t i = 0; i < img.pixels.size(); ++i)
            out.pixels[i] = img.pixels[i] >= 0.5 ? 1 : 0;
    } else {
        out.pixels = quantize_to_bits(img.pixels, bits);
    }
    return out;
}

}  // namespace tomoqa
