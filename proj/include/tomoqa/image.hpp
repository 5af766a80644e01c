#pragma once

#include <span>
#include <vector>

namespace tomoqa {

// Square image of non-negative integers with a declared bit depth R.
// Every pixel satisfies 0 <= v <= 2^R - 1.
struct Image {
    int side = 0;
    int bit_depth = 1;
    std::vector<int> pixels;  // row-major, side*side entries

    int max_value() const { return (1 << bit_depth) - 1; }
    int at(int row, int col) const { return pixels[static_cast<std::size_t>(row) * side + col]; }
    int& at(int row, int col) { return pixels[static_cast<std::size_t>(row) * side + col]; }
};

// Real-valued image used by the classical reconstructions before
// discretization; pixels may be negative.
struct FloatImage {
    int side = 0;
    std::vector<double> pixels;
};

Image make_image(int side, int bit_depth);

// Throws std::invalid_argument if the invariants do not hold.
void validate_image(const Image& img);

// Round-half-up, clip to [0, 2^bits - 1]. Throws on non-finite input.
std::vector<int> quantize_to_bits(std::span<const double> values, int bits);

// Block means over factor x factor blocks, rounded half-up and clipped to
// the image's bit range. factor must divide the side.
Image downsample_local_mean(const Image& img, int factor);

std::vector<double> to_doubles(const Image& img);
FloatImage to_float_image(const Image& img);

}  // namespace tomoqa
