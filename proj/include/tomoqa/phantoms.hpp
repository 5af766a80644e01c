#pragma once

#include <string>

#include "tomoqa/image.hpp"

namespace tomoqa {

// Test objects. SheppLogan is 4-bit; the others are binary masks chosen to
// span low- and high-frequency content.
enum class PhantomKind { SheppLogan, Foam, Tree, Snowflake, Molecule };

// Deterministic phantom of side n. SheppLogan rasterizes the standard
// ten-ellipse table at 256x256 (or the next multiple of n above that),
// rescales to [0, 15] and reduces by local means. The binary kinds are
// procedural masks defined on the unit square, rasterized at 32x32 (or the
// next multiple of n) and reduced the same way.
Image generate_phantom(PhantomKind kind, int n);

// Embedded 8x8 4-bit digit glyphs (0..9), used as digit-style test images
// for the noise study.
Image digit_glyph(int digit);

PhantomKind parse_phantom_kind(const std::string& name);
std::string phantom_kind_name(PhantomKind kind);

}  // namespace tomoqa
