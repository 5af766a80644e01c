#include "tomoqa/image.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tomoqa {

Image make_image(int side, int bit_depth) {
    if (side < 1) throw std::invalid_argument("image side must be positive");
    if (bit_depth < 1 || bit_depth > 30)
        throw std::invalid_argument("bit depth must be in [1, 30]");
    Image img;
    img.side = side;
    img.bit_depth = bit_depth;
    img.pixels.assign(static_cast<std::size_t>(side) * side, 0);
    return img;
}

void validate_image(const Image& img) {
    if (img.side < 1) throw std::invalid_argument("image side must be positive");
    if (img.bit_depth < 1) throw std::invalid_argument("bit depth must be positive");
    if (img.pixels.size() != static_cast<std::size_t>(img.side) * img.side)
        throw std::invalid_argument("pixel count does not match side*side");
    const int maxv = img.max_value();
    for (int v : img.pixels) {
        if (v < 0 || v > maxv)
            throw std::invalid_argument("pixel value " + std::to_string(v) +
                                        " outside [0, " + std::to_string(maxv) + "]");
    }
}

namespace {

int round_half_up_clip(double v, int maxv) {
    const double rounded = std::floor(v + 0.5);
    if (rounded < 0.0) return 0;
    if (rounded > maxv) return maxv;
    return static_cast<int>(rounded);
}

}  // namespace

std::vector<int> quantize_to_bits(std::span<const double> values, int bits) {
    if (bits < 1) throw std::invalid_argument("bits must be positive");
    const int maxv = (1 << bits) - 1;
    std::vector<int> out;
    out.reserve(values.size());
    for (double v : values) {
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite value in quantize_to_bits");
        out.push_back(round_half_up_clip(v, maxv));
    }
    return out;
}

Image downsample_local_mean(const Image& img, int factor) {
    if (factor < 1) throw std::invalid_argument("factor must be positive");
    if (img.side % factor != 0)
        throw std::invalid_argument("factor " + std::to_string(factor) +
                                    " does not divide image side " + std::to_string(img.side));
    const int out_side = img.side / factor;
    Image out = make_image(out_side, img.bit_depth);
    const double inv_count = 1.0 / (static_cast<double>(factor) * factor);
    for (int r = 0; r < out_side; ++r) {
        for (int c = 0; c < out_side; ++c) {
            double sum = 0.0;
            for (int dr = 0; dr < factor; ++dr)
                for (int dc = 0; dc < factor; ++dc)
                    sum += img.at(r * factor + dr, c * factor + dc);
            out.at(r, c) = round_half_up_clip(sum * inv_count, img.max_value());
        }
    }
    return out;
}

std::vector<double> to_doubles(const Image& img) {
    return {img.pixels.begin(), img.pixels.end()};
}

FloatImage to_float_image(const Image& img) {
    return FloatImage{img.side, to_doubles(img)};
}

}  // namespace tomoqa
