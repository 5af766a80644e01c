#include "tomoqa/noise.hpp"

#include <algorithm>
#include <stdexcept>

#include "tomoqa/rng.hpp"

namespace tomoqa {

NoiseRealization draw_noise(const Image& x, int views, std::uint64_t seed) {
    validate_image(x);
    if (views < 1) throw std::invalid_argument("view count must be positive");
    NoiseRealization noise;
    noise.seed = seed;
    noise.per_view.resize(views);
    for (int v = 0; v < views; ++v) {
        Rng rng(substream_seed(seed, stream_domain::kNoiseView, static_cast<std::uint64_t>(v)));
        auto& n_v = noise.per_view[v];
        n_v.resize(x.pixels.size());
        for (std::size_t i = 0; i < x.pixels.size(); ++i)
            n_v[i] = x.pixels[i] != 0 ? rng.bounded(3) - 1 : rng.bounded(2);
    }
    return noise;
}

Sinogram apply_noise(const Image& x, const SystemMatrix& m, int views, std::uint64_t seed) {
    if (m.views != views)
        throw std::invalid_argument("view count does not match system matrix");
    if (static_cast<int>(x.pixels.size()) != m.cols)
        throw std::invalid_argument("image size does not match matrix columns");

    const NoiseRealization noise = draw_noise(x, views, seed);
    const int maxv = x.max_value();

    Sinogram y;
    y.views = m.views;
    y.bins = m.bins;
    y.values.assign(m.rows, 0.0);
    std::vector<double> noisy(x.pixels.size());
    for (int v = 0; v < views; ++v) {
        const auto& n_v = noise.per_view[v];
        for (std::size_t i = 0; i < noisy.size(); ++i)
            noisy[i] = std::clamp(x.pixels[i] + n_v[i], 0, maxv);
        for (int t = 0; t < m.bins; ++t) {
            const int row = v * m.bins + t;
            double sum = 0.0;
            for (const MatrixEntry& e : m.row_entries[row]) sum += e.weight * noisy[e.col];
            y.values[row] = sum;
        }
    }
    return y;
}

}  // namespace tomoqa
