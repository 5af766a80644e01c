#include <doctest.h>

#include <cmath>

#include "tomoqa/baselines.hpp"
#include "tomoqa/metrics.hpp"
#include "tomoqa/noise.hpp"
#include "tomoqa/phantoms.hpp"
#include "tomoqa/rng.hpp"

using namespace tomoqa;

namespace {

// Direct two-pass SSIM translation with its own accumulation order.
double reference_ssim(const std::vector<double>& a, const std::vector<double>& b, int side,
                      double range) {
    const double c1 = 0.0001 * range * range;
    const double c2 = 0.0009 * range * range;
    const int w = side >= 7 ? 7 : side;
    std::vector<double> scores;
    for (int r0 = 0; r0 + w <= side; ++r0) {
        for (int c0 = 0; c0 + w <= side; ++c0) {
            std::vector<double> wa, wb;
            for (int r = r0; r < r0 + w; ++r)
                for (int c = c0; c < c0 + w; ++c) {
                    wa.push_back(a[r * side + c]);
                    wb.push_back(b[r * side + c]);
                }
            double ma = 0.0, mb = 0.0;
            for (std::size_t i = 0; i < wa.size(); ++i) {
                ma += wa[i];
                mb += wb[i];
            }
            ma /= wa.size();
            mb /= wb.size();
            double va = 0.0, vb = 0.0, cov = 0.0;
            for (std::size_t i = 0; i < wa.size(); ++i) {
                va += (wa[i] - ma) * (wa[i] - ma);
                vb += (wb[i] - mb) * (wb[i] - mb);
                cov += (wa[i] - ma) * (wb[i] - mb);
            }
            va /= wa.size();
            vb /= wb.size();
            cov /= wa.size();
            scores.push_back(((2 * ma * mb + c1) * (2 * cov + c2)) /
                             ((ma * ma + mb * mb + c1) * (va + vb + c2)));
        }
    }
    double total = 0.0;
    for (const double s : scores) total += s;
    return total / scores.size();
}

}  // namespace

TEST_CASE("rmse basics") {
    const std::vector<double> a = {0.0, 1.0};
    const std::vector<double> b = {1.0, 1.0};
    CHECK(rmse(a, a) == 0.0);
    CHECK(rmse(a, b) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(rmse(b, a) == rmse(a, b));
    const std::vector<double> c = {1.0};
    CHECK_THROWS_AS((void)rmse(a, c), std::invalid_argument);
}

TEST_CASE("rmse against an independent two-pass computation") {
    Rng rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> a(64), b(64);
        for (std::size_t i = 0; i < 64; ++i) {
            a[i] = rng.uniform01() * 15.0;
            b[i] = rng.uniform01() * 15.0;
        }
        double acc = 0.0;
        for (std::size_t i = 0; i < 64; ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
        const double expected = std::sqrt(acc / 64.0);
        CHECK(std::abs(rmse(a, b) - expected) <= 1e-12);
    }
}

TEST_CASE("rmse is zero only for identical images") {
    Rng rng(2);
    Image a = make_image(8, 4);
    for (int& v : a.pixels) v = rng.bounded(16);
    Image b = a;
    CHECK(rmse(a, b) == 0.0);
    b.pixels[17] = (b.pixels[17] + 1) % 16;
    CHECK(rmse(a, b) > 0.0);
}

TEST_CASE("ssim of an image with itself is one") {
    const Image img = generate_phantom(PhantomKind::SheppLogan, 16);
    CHECK(std::abs(ssim(img, img) - 1.0) <= 1e-12);
}

TEST_CASE("ssim closed form for constant images") {
    const int side = 8;
    const double range = 15.0;
    std::vector<double> a(side * side, 3.0), b(side * side, 9.0);
    const double c1 = 0.0001 * range * range;
    const double expected = (2.0 * 3.0 * 9.0 + c1) / (9.0 + 81.0 + c1);
    CHECK(ssim(a, b, side, range) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("ssim matches an independent reference implementation") {
    Rng rng(33);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> a(256), b(256);
        for (std::size_t i = 0; i < 256; ++i) {
            a[i] = rng.uniform01() * 15.0;
            b[i] = rng.uniform01() * 15.0;
        }
        CHECK(std::abs(ssim(a, b, 16, 15.0) - reference_ssim(a, b, 16, 15.0)) <= 1e-6);
    }
}

TEST_CASE("ssim uses a single window below 7 pixels") {
    Rng rng(44);
    std::vector<double> a(16), b(16);
    for (std::size_t i = 0; i < 16; ++i) {
        a[i] = rng.uniform01();
        b[i] = rng.uniform01();
    }
    CHECK(ssim(a, b, 4, 1.0) == doctest::Approx(reference_ssim(a, b, 4, 1.0)).epsilon(1e-12));
}

TEST_CASE("ssim symmetry and shift sensitivity") {
    Rng rng(55);
    std::vector<double> a(256), b(256);
    for (std::size_t i = 0; i < 256; ++i) {
        a[i] = rng.uniform01() * 15.0;
        b[i] = a[i];
    }
    for (double& v : b) v = std::min(15.0, v + 2.0);
    CHECK(ssim(a, b, 16, 15.0) == doctest::Approx(ssim(b, a, 16, 15.0)).epsilon(1e-12));
    CHECK(ssim(a, b, 16, 15.0) < 1.0);
    CHECK(ssim(a, b, 16, 15.0) <= 1.0);
}

TEST_CASE("ssim validates arguments") {
    const std::vector<double> a(16, 0.0);
    CHECK_THROWS_AS((void)ssim(a, a, 5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)ssim(a, a, 4, 0.0), std::invalid_argument);
}

TEST_CASE("stability ratio arithmetic") {
    const std::vector<double> x1 = {1.0, 0.0}, x2 = {1.0, 2.0};
    const std::vector<double> y1 = {0.0, 0.0, 0.0, 0.0}, y2 = {2.0, 2.0, 2.0, 2.0};
    CHECK(stability_ratio(x1, x1, y1, y2) == 0.0);
    CHECK(stability_ratio(x1, x2, y1, y2) == doctest::Approx(0.5));
    CHECK_THROWS_AS((void)stability_ratio(x1, x2, y1, y1), std::invalid_argument);
}

TEST_CASE("stability ratio over two seeded noise realizations") {
    const Image gt = digit_glyph(3);
    const SystemMatrix m = build_system_matrix(8, angle_set(8));
    const Sinogram y1 = apply_noise(gt, m, 8, 100);
    const Sinogram y2 = apply_noise(gt, m, 8, 200);
    const FloatImage x1 = pinv_reconstruct(m, y1.values);
    const FloatImage x2 = pinv_reconstruct(m, y2.values);
    const double ratio = stability_ratio(x1.pixels, x2.pixels, y1.values, y2.values);
    CHECK(std::isfinite(ratio));
    CHECK(ratio > 0.0);
}
