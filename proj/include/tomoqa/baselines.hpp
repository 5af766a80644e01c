#pragma once

#include <span>
#include <vector>

#include "tomoqa/geometry.hpp"
#include "tomoqa/image.hpp"

namespace tomoqa {

struct PinvOptions {
    double rcond = 1e-10;  // singular values below rcond * sigma_max become zero
};

// Dense Moore-Penrose pseudoinverse of M, returned row-major with shape
// cols x rows.
std::vector<double> moore_penrose_pseudoinverse(const SystemMatrix& m,
                                                double rcond = 1e-10);

// Minimum-norm least-squares solution M^+ y via SVD.
std::vector<double> pinv_solve(const SystemMatrix& m, std::span<const double> y,
                               PinvOptions opts = {});

FloatImage pinv_reconstruct(const SystemMatrix& m, std::span<const double> y,
                            PinvOptions opts = {});

// Filtered backprojection: per view, FFT of the projection zero-padded to
// the next power of two >= 2N, ramp filter, inverse FFT, then linear
// interpolation backprojection scaled by pi / (2 V).
FloatImage fbp_reconstruct(const Sinogram& sino, std::span<const double> angles_deg, int side);

struct SartOptions {
    int iterations = 2;
    double relaxation = 0.15;  // must be in (0, 2)
};

// Per-view relaxed updates with row-sum and per-view column-sum
// normalization, starting from zero.
FloatImage sart_reconstruct(const SystemMatrix& m, std::span<const double> y,
                            SartOptions opts = {});

// Residual ||Mx - y||_2 after each full iteration, for convergence checks.
std::vector<double> sart_residual_trace(const SystemMatrix& m, std::span<const double> y,
                                        SartOptions opts = {});

// For bits == 1 threshold at 0.5, otherwise round half-up; always clip to
// [0, 2^bits - 1]. Throws on non-finite pixels.
Image discretize(const FloatImage& img, int bits);

}  // namespace tomoqa
