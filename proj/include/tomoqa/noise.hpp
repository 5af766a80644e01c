#pragma once

#include <cstdint>
#include <vector>

#include "tomoqa/geometry.hpp"
#include "tomoqa/image.hpp"

namespace tomoqa {

// Signal-dependent additive noise imitating low-count emission statistics.
// Per pixel the noise value is uniform over {-1, 0, 1} where the pixel is
// nonzero and over {0, 1} where it is zero; each view gets an independent
// realization.
struct NoiseRealization {
    std::uint64_t seed = 0;
    std::vector<std::vector<int>> per_view;  // one noise image per view
};

NoiseRealization draw_noise(const Image& x, int views, std::uint64_t seed);

// For each view v: y_v = M_v clip(x + n_v, 0, 2^R - 1), concatenated
// view-major.
Sinogram apply_noise(const Image& x, const SystemMatrix& m, int views, std::uint64_t seed);

}  // namespace tomoqa
