#include "tomoqa/phantoms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace tomoqa {

namespace {

// Standard Shepp-Logan head phantom: semi-axes, center, rotation (degrees,
// counterclockwise) and additive gray level per ellipse.
struct Ellipse {
    double a, b, x0, y0, phi_deg, gray;
};

constexpr std::array<Ellipse, 10> kSheppLogan = {{
    {0.69, 0.92, 0.0, 0.0, 0.0, 2.0},
    {0.6624, 0.8740, 0.0, -0.0184, 0.0, -0.98},
    {0.11, 0.31, 0.22, 0.0, -18.0, -0.02},
    {0.16, 0.41, -0.22, 0.0, 18.0, -0.02},
    {0.21, 0.25, 0.0, 0.35, 0.0, 0.01},
    {0.046, 0.046, 0.0, 0.1, 0.0, 0.01},
    {0.046, 0.046, 0.0, -0.1, 0.0, 0.01},
    {0.046, 0.023, -0.08, -0.605, 0.0, 0.01},
    {0.023, 0.023, 0.0, -0.606, 0.0, 0.01},
    {0.023, 0.046, 0.06, -0.605, 0.0, 0.01},
}};

double shepp_logan_value(double u, double v) {
    double sum = 0.0;
    for (const Ellipse& e : kSheppLogan) {
        const double phi = e.phi_deg * std::numbers::pi / 180.0;
        const double du = u - e.x0;
        const double dv = v - e.y0;
        const double xr = du * std::cos(phi) + dv * std::sin(phi);
        const double yr = -du * std::sin(phi) + dv * std::cos(phi);
        if ((xr / e.a) * (xr / e.a) + (yr / e.b) * (yr / e.b) <= 1.0) sum += e.gray;
    }
    return sum;
}

bool foam_mask(double u, double v) {
    const double du = u - 0.5, dv = v - 0.5;
    if (du * du + dv * dv > 0.42 * 0.42) return false;
    struct Hole {
        double u, v, r;
    };
    constexpr std::array<Hole, 5> holes = {{{0.36, 0.34, 0.10},
                                            {0.64, 0.45, 0.075},
                                            {0.44, 0.66, 0.09},
                                            {0.62, 0.68, 0.05},
                                            {0.30, 0.55, 0.045}}};
    for (const Hole& h : holes) {
        const double hu = u - h.u, hv = v - h.v;
        if (hu * hu + hv * hv <= h.r * h.r) return false;
    }
    return true;
}

bool tree_mask(double u, double v) {
    if (u >= 0.45 && u <= 0.55 && v >= 0.62 && v <= 0.95) return true;
    struct Tier {
        double top, bottom, half_width;
    };
    constexpr std::array<Tier, 3> tiers = {{{0.06, 0.36, 0.20},
                                            {0.24, 0.56, 0.28},
                                            {0.44, 0.80, 0.36}}};
    for (const Tier& t : tiers) {
        if (v >= t.top && v <= t.bottom) {
            const double w = t.half_width * (v - t.top) / (t.bottom - t.top);
            if (std::abs(u - 0.5) <= w) return true;
        }
    }
    return false;
}

bool snowflake_mask(double u, double v) {
    const double du = u - 0.5, dv = v - 0.5;
    const double r = std::hypot(du, dv);
    if (r <= 0.10) return true;
    if (r > 0.46) return false;
    for (int k = 0; k < 6; ++k) {
        const double a = k * std::numbers::pi / 3.0;
        const double ca = std::cos(a), sa = std::sin(a);
        const double along = du * ca + dv * sa;
        const double across = std::abs(-du * sa + dv * ca);
        if (along >= 0.0 && across <= 0.055) return true;
    }
    return false;
}

bool molecule_mask(double u, double v) {
    const double du = u - 0.5, dv = v - 0.5;
    const double r = std::hypot(du, dv);
    if (std::abs(r - 0.30) <= 0.035) return true;
    if (r <= 0.07) return true;
    for (int k = 0; k < 6; ++k) {
        const double a = k * std::numbers::pi / 3.0 + std::numbers::pi / 6.0;
        const double nu = 0.30 * std::cos(a), nv = 0.30 * std::sin(a);
        const double pu = du - nu, pv = dv - nv;
        if (pu * pu + pv * pv <= 0.085 * 0.085) return true;
    }
    return false;
}

// Rasterize at a multiple of n no smaller than base_res, then reduce by
// local means so every output size is consistent with the base definition.
int raster_resolution(int n, int base_res) {
    if (n >= base_res) return n;
    return n * ((base_res + n - 1) / n);
}

Image rasterize_binary(bool (*mask)(double, double), int n) {
    const int res = raster_resolution(n, 32);
    const int factor = res / n;
    Image base = make_image(res, 1);
    for (int r = 0; r < res; ++r) {
        for (int c = 0; c < res; ++c) {
            const double u = (c + 0.5) / res;
            const double v = (r + 0.5) / res;
            base.at(r, c) = mask(u, v) ? 1 : 0;
        }
    }
    return factor == 1 ? base : downsample_local_mean(base, factor);
}

Image rasterize_shepp_logan(int n) {
    const int res = raster_resolution(n, 256);
    const int factor = res / n;
    std::vector<double> values(static_cast<std::size_t>(res) * res);
    double vmax = 0.0;
    for (int r = 0; r < res; ++r) {
        for (int c = 0; c < res; ++c) {
            const double u = (c + 0.5) / res * 2.0 - 1.0;
            const double v = 1.0 - (r + 0.5) / res * 2.0;
            const double s = shepp_logan_value(u, v);
            values[static_cast<std::size_t>(r) * res + c] = s;
            vmax = std::max(vmax, s);
        }
    }
    const double scale = vmax > 0.0 ? 15.0 / vmax : 0.0;
    for (double& s : values) s *= scale;

    std::vector<double> block_means(static_cast<std::size_t>(n) * n, 0.0);
    const double inv = 1.0 / (static_cast<double>(factor) * factor);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            double sum = 0.0;
            for (int dr = 0; dr < factor; ++dr)
                for (int dc = 0; dc < factor; ++dc)
                    sum += values[static_cast<std::size_t>(r * factor + dr) * res + c * factor + dc];
            block_means[static_cast<std::size_t>(r) * n + c] = sum * inv;
        }
    }
    Image out = make_image(n, 4);
    out.pixels = quantize_to_bits(block_means, 4);
    return out;
}

// CP437-style 8x8 glyph bitmaps for the digits 0..9, one byte per row,
// most significant bit on the left.
constexpr std::array<std::array<std::uint8_t, 8>, 10> kDigitGlyphs = {{
    {0x7C, 0xC6, 0xCE, 0xDE, 0xF6, 0xE6, 0x7C, 0x00},
    {0x30, 0x70, 0x30, 0x30, 0x30, 0x30, 0xFC, 0x00},
    {0x78, 0xCC, 0x0C, 0x38, 0x60, 0xCC, 0xFC, 0x00},
    {0x78, 0xCC, 0x0C, 0x38, 0x0C, 0xCC, 0x78, 0x00},
    {0x1C, 0x3C, 0x6C, 0xCC, 0xFE, 0x0C, 0x1E, 0x00},
    {0xFC, 0xC0, 0xF8, 0x0C, 0x0C, 0xCC, 0x78, 0x00},
    {0x38, 0x60, 0xC0, 0xF8, 0xCC, 0xCC, 0x78, 0x00},
    {0xFC, 0xCC, 0x0C, 0x18, 0x30, 0x30, 0x30, 0x00},
    {0x78, 0xCC, 0xCC, 0x78, 0xCC, 0xCC, 0x78, 0x00},
    {0x78, 0xCC, 0xCC, 0x7C, 0x0C, 0x18, 0x70, 0x00},
}};

}  // namespace

Image generate_phantom(PhantomKind kind, int n) {
    if (n < 1) throw std::invalid_argument("phantom size must be positive");
    switch (kind) {
        case PhantomKind::SheppLogan:
            return rasterize_shepp_logan(n);
        case PhantomKind::Foam:
            return rasterize_binary(foam_mask, n);
        case PhantomKind::Tree:
            return rasterize_binary(tree_mask, n);
        case PhantomKind::Snowflake:
            return rasterize_binary(snowflake_mask, n);
        case PhantomKind::Molecule:
            return rasterize_binary(molecule_mask, n);
    }
    throw std::invalid_argument("unknown phantom kind");
}

Image digit_glyph(int digit) {
    if (digit < 0 || digit > 9) throw std::invalid_argument("digit must be in [0, 9]");
    Image img = make_image(8, 4);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c)
            img.at(r, c) = (kDigitGlyphs[digit][r] >> (7 - c)) & 1 ? 13 : 0;
    return img;
}

PhantomKind parse_phantom_kind(const std::string& name) {
    if (name == "shepp_logan") return PhantomKind::SheppLogan;
    if (name == "foam") return PhantomKind::Foam;
    if (name == "tree") return PhantomKind::Tree;
    if (name == "snowflake") return PhantomKind::Snowflake;
    if (name == "molecule") return PhantomKind::Molecule;
    throw std::invalid_argument("unknown phantom kind: " + name);
}

std::string phantom_kind_name(PhantomKind kind) {
    switch (kind) {
        case PhantomKind::SheppLogan: return "shepp_logan";
        case PhantomKind::Foam: return "foam";
        case PhantomKind::Tree: return "tree";
        case PhantomKind::Snowflake: return "snowflake";
        case PhantomKind::Molecule: return "molecule";
    }
    return "unknown";
}

}  // namespace tomoqa
