#include "tomoqa/image_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tomoqa {

namespace {

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& msg) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
}

// maxval of the form 2^R - 1 -> R, else 0.
int bit_depth_from_maxval(long maxval) {
    for (int r = 1; r <= 30; ++r)
        if (((1L << r) - 1) == maxval) return r;
    return 0;
}

}  // namespace

void save_pgm(const Image& img, const std::string& path) {
    validate_image(img);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "P2\n" << img.side << ' ' << img.side << '\n' << img.max_value() << '\n';
    for (int r = 0; r < img.side; ++r) {
        for (int c = 0; c < img.side; ++c) {
            if (c) out << ' ';
            out << img.at(r, c);
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

Image load_pgm(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);

    // Tokenize, tracking line numbers; '#' starts a comment.
    std::vector<std::pair<std::string, int>> tokens;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) tokens.emplace_back(tok, line_no);
    }
    std::size_t pos = 0;
    auto next = [&](const char* what) -> const std::pair<std::string, int>& {
        if (pos >= tokens.size())
            parse_fail(path, line_no, std::string("unexpected end of file, expected ") + what);
        return tokens[pos++];
    };
    auto next_int = [&](const char* what) -> long {
        const auto& [tok, ln] = next(what);
        try {
            std::size_t used = 0;
            const long v = std::stol(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            parse_fail(path, ln, std::string("invalid ") + what + " '" + tok + "'");
        }
    };

    const auto& [magic, magic_line] = next("magic");
    if (magic != "P2") parse_fail(path, magic_line, "unsupported magic '" + magic + "', expected P2");
    const long width = next_int("width");
    const long height = next_int("height");
    if (width < 1 || height < 1 || width != height)
        parse_fail(path, tokens[pos - 1].second, "image must be square and non-empty");
    const long maxval = next_int("maxval");
    const int bits = bit_depth_from_maxval(maxval);
    if (bits == 0)
        parse_fail(path, tokens[pos - 1].second,
                   "maxval " + std::to_string(maxval) + " is not of the form 2^R - 1");

    Image img = make_image(static_cast<int>(width), bits);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        const long v = next_int("pixel");
        if (v < 0 || v > maxval)
            parse_fail(path, tokens[pos - 1].second,
                       "pixel value " + std::to_string(v) + " outside [0, " + std::to_string(maxval) + "]");
        img.pixels[i] = static_cast<int>(v);
    }
    if (pos != tokens.size()) parse_fail(path, tokens[pos].second, "trailing data after pixels");
    return img;
}

Image load_digits_csv(const std::string& path, int row_index) {
    if (row_index < 0) throw std::invalid_argument("row index must be non-negative");
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    int current = 0;
    while (std::getline(in, line)) {
        if (current++ != row_index) continue;
        std::vector<double> values;
        std::stringstream ls(line);
        std::string cell;
        int col = 0;
        while (std::getline(ls, cell, ',')) {
            ++col;
            try {
                std::size_t used = 0;
                const long v = std::stol(cell, &used);
                while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
                if (used != cell.size()) throw std::invalid_argument(cell);
                values.push_back(static_cast<double>(v));
            } catch (const std::exception&) {
                parse_fail(path, row_index + 1,
                           "non-integer cell '" + cell + "' in column " + std::to_string(col));
            }
        }
        if (values.size() == 65) values.pop_back();  // trailing label column
        if (values.size() != 64)
            parse_fail(path, row_index + 1,
                       "expected 64 pixel columns, got " + std::to_string(values.size()));
        Image img = make_image(8, 4);
        img.pixels = quantize_to_bits(values, 4);
        return img;
    }
    throw std::runtime_error(path + ": row " + std::to_string(row_index) + " not found (" +
                             std::to_string(current) + " rows)");
}

}  // namespace tomoqa
