#include "tomoqa/qubo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace tomoqa {

namespace {

std::uint64_t pair_key(int i, int j) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
           static_cast<std::uint32_t>(j);
}

QuboModel finish_model(int n, std::vector<double> linear,
                       std::unordered_map<std::uint64_t, double>& quad, double offset,
                       double drop_threshold) {
    QuboModel q;
    q.n = n;
    q.offset = offset;
    for (double& v : linear)
        if (std::abs(v) < drop_threshold) v = 0.0;
    q.linear = std::move(linear);
    q.quadratic.reserve(quad.size());
    for (const auto& [key, value] : quad) {
        if (std::abs(value) < drop_threshold) continue;
        q.quadratic.push_back({static_cast<int>(key >> 32), static_cast<int>(key & 0xffffffffu), value});
    }
    std::sort(q.quadratic.begin(), q.quadratic.end(), [](const QuadTerm& a, const QuadTerm& b) {
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
    return q;
}

// Shared core over an abstract sparse row stream: each row contributes
// w_a^2 - 2 y_k w_a to linear[col_a] and 2 w_a w_b to quad[(col_a, col_b)].
QuboModel build_from_rows(int cols, std::span<const double> y,
                          const std::vector<std::vector<MatrixEntry>>& rows,
                          double drop_threshold) {
    std::vector<double> linear(cols, 0.0);
    std::unordered_map<std::uint64_t, double> quad;
    double offset = 0.0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const double yk = y[k];
        offset += yk * yk;
        const auto& row = rows[k];
        for (std::size_t a = 0; a < row.size(); ++a) {
            const double wa = row[a].weight;
            linear[row[a].col] += wa * wa - 2.0 * yk * wa;
            for (std::size_t b = a + 1; b < row.size(); ++b)
                quad[pair_key(row[a].col, row[b].col)] += 2.0 * wa * row[b].weight;
        }
    }
    return finish_model(cols, std::move(linear), quad, offset, drop_threshold);
}

}  // namespace

std::vector<int> IntegerEncoding::decode(std::span<const std::uint8_t> assignment) const {
    if (static_cast<int>(assignment.size()) != num_binary())
        throw std::invalid_argument("assignment length does not match encoding");
    std::vector<int> values(num_values, 0);
    for (int i = 0; i < num_values; ++i)
        for (int r = 0; r < bits; ++r)
            values[i] += (assignment[static_cast<std::size_t>(i) * bits + r] ? 1 : 0) << r;
    return values;
}

std::vector<std::uint8_t> IntegerEncoding::encode(std::span<const int> values) const {
    if (static_cast<int>(values.size()) != num_values)
        throw std::invalid_argument("value count does not match encoding");
    std::vector<std::uint8_t> assignment(num_binary(), 0);
    for (int i = 0; i < num_values; ++i) {
        const int v = values[i];
        if (v < 0 || v >= (1 << bits))
            throw std::invalid_argument("value outside the encodable range");
        for (int r = 0; r < bits; ++r)
            assignment[static_cast<std::size_t>(i) * bits + r] = (v >> r) & 1;
    }
    return assignment;
}

QuboModel build_binary_qubo(const SystemMatrix& m, std::span<const double> y,
                            double drop_threshold) {
    if (static_cast<int>(y.size()) != m.rows)
        throw std::invalid_argument("measurement length does not match matrix rows");
    return build_from_rows(m.cols, y, m.row_entries, drop_threshold);
}

std::pair<QuboModel, IntegerEncoding> build_integer_qubo(const SystemMatrix& m,
                                                         std::span<const double> y, int bits,
                                                         double drop_threshold) {
    if (bits < 1) throw std::invalid_argument("bits must be positive");
    if (static_cast<int>(y.size()) != m.rows)
        throw std::invalid_argument("measurement length does not match matrix rows");
    // Expanded matrix: column (i, r) is 2^r * column_i.
    std::vector<std::vector<MatrixEntry>> rows(m.row_entries.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        rows[k].reserve(m.row_entries[k].size() * bits);
        for (const MatrixEntry& e : m.row_entries[k])
            for (int r = 0; r < bits; ++r)
                rows[k].push_back({e.col * bits + r, std::ldexp(e.weight, r)});
        std::sort(rows[k].begin(), rows[k].end(),
                  [](const MatrixEntry& a, const MatrixEntry& b) { return a.col < b.col; });
    }
    IntegerEncoding enc{m.cols, bits};
    return {build_from_rows(m.cols * bits, y, rows, drop_threshold), enc};
}

double qubo_energy(const QuboModel& q, std::span<const std::uint8_t> x) {
    if (static_cast<int>(x.size()) != q.n)
        throw std::invalid_argument("assignment length does not match model");
    for (std::uint8_t v : x)
        if (v > 1) throw std::invalid_argument("assignment entries must be 0 or 1");
    double e = q.offset;
    for (int i = 0; i < q.n; ++i)
        if (x[i]) e += q.linear[i];
    for (const QuadTerm& t : q.quadratic)
        if (x[t.i] && x[t.j]) e += t.value;
    return e;
}

double ising_energy(const IsingModel& m, std::span<const std::int8_t> s) {
    if (static_cast<int>(s.size()) != m.n)
        throw std::invalid_argument("spin vector length does not match model");
    for (std::int8_t v : s)
        if (v != 1 && v != -1) throw std::invalid_argument("spins must be -1 or +1");
    double e = m.offset;
    for (int i = 0; i < m.n; ++i) e += m.h[i] * s[i];
    for (const QuadTerm& t : m.couplings) e += t.value * s[t.i] * s[t.j];
    return e;
}

IsingModel qubo_to_ising(const QuboModel& q) {
    IsingModel m;
    m.n = q.n;
    m.offset = q.offset;
    m.h.assign(q.n, 0.0);
    for (int i = 0; i < q.n; ++i) {
        m.h[i] = q.linear[i] / 2.0;
        m.offset += q.linear[i] / 2.0;
    }
    m.couplings.reserve(q.quadratic.size());
    for (const QuadTerm& t : q.quadratic) {
        const double j = t.value / 4.0;
        m.couplings.push_back({t.i, t.j, j});
        m.h[t.i] += j;
        m.h[t.j] += j;
        m.offset += j;
    }
    return m;
}

QuboModel ising_to_qubo(const IsingModel& m) {
    QuboModel q;
    q.n = m.n;
    q.offset = m.offset;
    q.linear.assign(m.n, 0.0);
    for (int i = 0; i < m.n; ++i) {
        q.linear[i] = 2.0 * m.h[i];
        q.offset -= m.h[i];
    }
    q.quadratic.reserve(m.couplings.size());
    for (const QuadTerm& t : m.couplings) {
        q.quadratic.push_back({t.i, t.j, 4.0 * t.value});
        q.linear[t.i] -= 2.0 * t.value;
        q.linear[t.j] -= 2.0 * t.value;
        q.offset += t.value;
    }
    std::sort(q.quadratic.begin(), q.quadratic.end(), [](const QuadTerm& a, const QuadTerm& b) {
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
    return q;
}

void export_qubo(const QuboModel& q, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", q.offset);
    out << q.n << ' ' << buf << '\n';
    for (int i = 0; i < q.n; ++i) {
        if (q.linear[i] == 0.0) continue;
        std::snprintf(buf, sizeof buf, "%.17g", q.linear[i]);
        out << i << ' ' << i << ' ' << buf << '\n';
    }
    for (const QuadTerm& t : q.quadratic) {
        std::snprintf(buf, sizeof buf, "%.17g", t.value);
        out << t.i << ' ' << t.j << ' ' << buf << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

QuboModel import_qubo(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ":1: empty file");
    std::istringstream header(line);
    long n = -1;
    double offset = 0.0;
    std::string extra;
    if (!(header >> n >> offset) || n < 0 || (header >> extra))
        throw std::runtime_error(path + ":1: malformed header, expected 'n offset'");

    QuboModel q;
    q.n = static_cast<int>(n);
    q.offset = offset;
    q.linear.assign(q.n, 0.0);
    std::vector<bool> linear_seen(q.n, false);
    std::unordered_map<std::uint64_t, bool> quad_seen;

    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        long i = 0, j = 0;
        double value = 0.0;
        if (!(ls >> i >> j >> value) || (ls >> extra))
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected 'i j value'");
        if (i < 0 || i >= n || j < 0 || j >= n)
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": index out of range");
        if (i == j) {
            if (linear_seen[i])
                throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                         ": duplicate linear term for variable " + std::to_string(i));
            linear_seen[i] = true;
            q.linear[i] = value;
        } else if (j < i) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": quadratic term requires i < j");
        } else {
            const std::uint64_t key = pair_key(static_cast<int>(i), static_cast<int>(j));
            if (quad_seen[key])
                throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                         ": duplicate quadratic term (" + std::to_string(i) + ", " +
                                         std::to_string(j) + ")");
            quad_seen[key] = true;
            q.quadratic.push_back({static_cast<int>(i), static_cast<int>(j), value});
        }
    }
    std::sort(q.quadratic.begin(), q.quadratic.end(), [](const QuadTerm& a, const QuadTerm& b) {
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
    return q;
}

}  // namespace tomoqa
