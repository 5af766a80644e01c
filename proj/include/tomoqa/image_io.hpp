#pragma once

#include <string>

#include "tomoqa/image.hpp"

namespace tomoqa {

// ASCII PGM (magic "P2"). The maxval is 2^R - 1 and determines the bit
// depth on load. Parse errors report the offending line number.
void save_pgm(const Image& img, const std::string& path);
Image load_pgm(const std::string& path);

// One CSV row of 64 integer pixel values (an optional 65th label column is
// ignored) becomes an 8x8, 4-bit image; values pass through
// quantize_to_bits, so out-of-range entries such as 16 clip to 15.
Image load_digits_csv(const std::string& path, int row_index);

}  // namespace tomoqa
