#pragma once

#include <span>

#include "tomoqa/image.hpp"

namespace tomoqa {

double rmse(std::span<const double> a, std::span<const double> b);
double rmse(const Image& a, const Image& b);
double rmse(const Image& a, const FloatImage& b);

// Standard SSIM with C1 = (0.01 L)^2, C2 = (0.03 L)^2 and population
// window statistics. Sliding 7x7 uniform window when side >= 7, otherwise
// a single full-image window.
double ssim(std::span<const double> a, std::span<const double> b, int side,
            double dynamic_range);
double ssim(const Image& a, const Image& b);  // L = 2^R - 1

// ||x1 - x2||_2 / ||y1 - y2||_2; the caller compares against its tolerance.
// Throws when y1 == y2.
double stability_ratio(std::span<const double> x1, std::span<const double> x2,
                       std::span<const double> y1, std::span<const double> y2);

}  // namespace tomoqa
