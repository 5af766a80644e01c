#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "tomoqa/qubo.hpp"
#include "tomoqa/rng.hpp"

using namespace tomoqa;

namespace {

SystemMatrix random_sparse_matrix(Rng& rng, int rows, int cols, double density = 0.4) {
    SystemMatrix m;
    m.rows = rows;
    m.cols = cols;
    m.views = rows;
    m.bins = 1;
    m.row_entries.resize(rows);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            if (rng.uniform01() < density) m.row_entries[r].push_back({c, rng.uniform01() * 1.4});
    return m;
}

std::vector<double> random_vector(Rng& rng, int n, double lo, double hi) {
    std::vector<double> v(n);
    for (double& x : v) x = lo + (hi - lo) * rng.uniform01();
    return v;
}

double residual_norm2(const SystemMatrix& m, std::span<const double> y,
                      std::span<const double> x) {
    double total = 0.0;
    for (int r = 0; r < m.rows; ++r) {
        double sum = 0.0;
        for (const auto& e : m.row_entries[r]) sum += e.weight * x[e.col];
        const double d = sum - y[r];
        total += d * d;
    }
    return total;
}

// Dense oracle: x^T Q x + c with Q as a full matrix (linear on the
// diagonal), evaluated with plain loops.
double dense_energy(const QuboModel& q, std::span<const std::uint8_t> x) {
    std::vector<std::vector<double>> full(q.n, std::vector<double>(q.n, 0.0));
    for (int i = 0; i < q.n; ++i) full[i][i] = q.linear[i];
    for (const QuadTerm& t : q.quadratic) full[t.i][t.j] = t.value;
    double e = q.offset;
    for (int i = 0; i < q.n; ++i)
        for (int j = 0; j < q.n; ++j) e += full[i][j] * x[i] * x[j];
    return e;
}

SystemMatrix identity_matrix(int n) {
    SystemMatrix m;
    m.rows = n;
    m.cols = n;
    m.views = n;
    m.bins = 1;
    m.row_entries.resize(n);
    for (int i = 0; i < n; ++i) m.row_entries[i].push_back({i, 1.0});
    return m;
}

}  // namespace

TEST_CASE("binary qubo for the identity system") {
    const SystemMatrix m = identity_matrix(2);
    const std::vector<double> y = {1.0, 0.0};
    const QuboModel q = build_binary_qubo(m, y);
    CHECK(q.n == 2);
    CHECK(q.linear[0] == doctest::Approx(-1.0));
    CHECK(q.linear[1] == doctest::Approx(1.0));
    CHECK(q.quadratic.empty());
    CHECK(q.offset == doctest::Approx(1.0));
    const std::vector<std::uint8_t> best = {1, 0};
    CHECK(qubo_energy(q, best) == doctest::Approx(0.0));
}

TEST_CASE("binary qubo with a degenerate two-solution row") {
    SystemMatrix m;
    m.rows = 1;
    m.cols = 2;
    m.views = 1;
    m.bins = 1;
    m.row_entries = {{{0, 1.0}, {1, 1.0}}};
    const std::vector<double> y = {1.0};
    const QuboModel q = build_binary_qubo(m, y);
    CHECK(q.linear[0] == doctest::Approx(-1.0));
    CHECK(q.linear[1] == doctest::Approx(-1.0));
    REQUIRE(q.quadratic.size() == 1);
    CHECK(q.quadratic[0].i == 0);
    CHECK(q.quadratic[0].j == 1);
    CHECK(q.quadratic[0].value == doctest::Approx(2.0));
    CHECK(q.offset == doctest::Approx(1.0));
    const std::vector<std::uint8_t> a = {1, 0}, b = {0, 1};
    CHECK(qubo_energy(q, a) == doctest::Approx(0.0));
    CHECK(qubo_energy(q, b) == doctest::Approx(0.0));
}

TEST_CASE("defining identity: qubo energy equals the squared residual") {
    Rng rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        const int cols = 2 + rng.bounded(7);
        const int rows = 1 + rng.bounded(10);
        const SystemMatrix m = random_sparse_matrix(rng, rows, cols);
        const auto y = random_vector(rng, rows, -2.0, 6.0);
        const QuboModel q = build_binary_qubo(m, y);
        std::vector<std::uint8_t> x(cols);
        for (auto& b : x) b = rng.coin();
        const std::vector<double> xd(x.begin(), x.end());
        CHECK(std::abs(qubo_energy(q, x) - residual_norm2(m, y, xd)) <= 1e-9);
    }
}

TEST_CASE("exhaustive argmin of the qubo matches brute-force least squares") {
    Rng rng(555);
    for (int trial = 0; trial < 40; ++trial) {
        const int cols = 2 + rng.bounded(5);  // up to 6 variables here
        const int rows = 1 + rng.bounded(6);
        const SystemMatrix m = random_sparse_matrix(rng, rows, cols);
        const auto y = random_vector(rng, rows, -1.0, 3.0);
        const QuboModel q = build_binary_qubo(m, y);

        double best_direct = std::numeric_limits<double>::infinity();
        double best_qubo = std::numeric_limits<double>::infinity();
        for (std::uint32_t mask = 0; mask < (1u << cols); ++mask) {
            std::vector<std::uint8_t> x(cols);
            std::vector<double> xd(cols);
            for (int i = 0; i < cols; ++i) xd[i] = x[i] = (mask >> i) & 1;
            best_direct = std::min(best_direct, residual_norm2(m, y, xd));
            best_qubo = std::min(best_qubo, qubo_energy(q, x));
        }
        CHECK(std::abs(best_direct - best_qubo) <= 1e-9);
    }
}

TEST_CASE("qubo energy against a dense-matrix oracle") {
    Rng rng(808);
    QuboModel q;
    q.n = 4;
    q.linear = {0.5, -1.25, 2.0, -0.75};
    q.quadratic = {{0, 1, 1.5}, {0, 3, -2.0}, {1, 2, 0.25}, {2, 3, 3.0}};
    q.offset = 0.125;
    for (std::uint32_t mask = 0; mask < 16; ++mask) {
        std::vector<std::uint8_t> x(4);
        for (int i = 0; i < 4; ++i) x[i] = (mask >> i) & 1;
        CHECK(qubo_energy(q, x) == doctest::Approx(dense_energy(q, x)).epsilon(1e-12));
    }
}

TEST_CASE("empty model energy is the offset") {
    QuboModel q;
    q.offset = 2.5;
    CHECK(qubo_energy(q, {}) == doctest::Approx(2.5));
}

TEST_CASE("qubo_energy validates input") {
    QuboModel q;
    q.n = 2;
    q.linear = {0.0, 0.0};
    const std::vector<std::uint8_t> wrong_len = {1};
    CHECK_THROWS_AS((void)qubo_energy(q, wrong_len), std::invalid_argument);
    const std::vector<std::uint8_t> non_binary = {2, 0};
    CHECK_THROWS_AS((void)qubo_energy(q, non_binary), std::invalid_argument);
}

TEST_CASE("integer qubo with one bit reduces to the binary qubo") {
    Rng rng(7);
    const SystemMatrix m = random_sparse_matrix(rng, 5, 4);
    const auto y = random_vector(rng, 5, 0.0, 3.0);
    const QuboModel binary = build_binary_qubo(m, y);
    const auto [integer, enc] = build_integer_qubo(m, y, 1);
    CHECK(enc.bits == 1);
    CHECK(integer.n == binary.n);
    CHECK(integer.offset == doctest::Approx(binary.offset));
    for (int i = 0; i < binary.n; ++i)
        CHECK(integer.linear[i] == doctest::Approx(binary.linear[i]));
    REQUIRE(integer.quadratic.size() == binary.quadratic.size());
    for (std::size_t i = 0; i < binary.quadratic.size(); ++i)
        CHECK(integer.quadratic[i].value == doctest::Approx(binary.quadratic[i].value));
}

TEST_CASE("integer qubo ground state encodes the target value") {
    // M = [1], y = (3), R = 2: bits (1,1) decode to 3 at energy 0
    const SystemMatrix m = identity_matrix(1);
    const std::vector<double> y = {3.0};
    const auto [q, enc] = build_integer_qubo(m, y, 2);
    CHECK(q.n == 2);
    const std::vector<std::uint8_t> bits = {1, 1};
    CHECK(qubo_energy(q, bits) == doctest::Approx(0.0));
    CHECK(enc.decode(bits) == std::vector<int>{3});
}

TEST_CASE("integer qubo exhaustive ground state over the 4-bit range") {
    const SystemMatrix m = identity_matrix(1);
    for (int target = 0; target <= 15; ++target) {
        const std::vector<double> y = {static_cast<double>(target)};
        const auto [q, enc] = build_integer_qubo(m, y, 4);
        double best = std::numeric_limits<double>::infinity();
        int best_value = -1;
        for (std::uint32_t mask = 0; mask < 16; ++mask) {
            std::vector<std::uint8_t> bits(4);
            for (int i = 0; i < 4; ++i) bits[i] = (mask >> i) & 1;
            const double e = qubo_energy(q, bits);
            if (e < best) {
                best = e;
                best_value = enc.decode(bits)[0];
            }
        }
        CHECK(best_value == target);
        CHECK(best == doctest::Approx(0.0));
    }
}

TEST_CASE("integer encoding decode/encode is the identity on the value range") {
    IntegerEncoding enc{3, 4};
    Rng rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<int> values(3);
        for (int& v : values) v = rng.bounded(16);
        CHECK(enc.decode(enc.encode(values)) == values);
    }
    const std::vector<int> out_of_range = {16, 0, 0};
    CHECK_THROWS_AS((void)enc.encode(out_of_range), std::invalid_argument);
}

TEST_CASE("integer qubo energy equals the squared residual after decoding") {
    Rng rng(4242);
    for (int trial = 0; trial < 50; ++trial) {
        const int cols = 1 + rng.bounded(3);
        const int rows = 1 + rng.bounded(4);
        const int bits = 1 + rng.bounded(3);
        const SystemMatrix m = random_sparse_matrix(rng, rows, cols, 0.7);
        const auto y = random_vector(rng, rows, 0.0, 6.0);
        const auto [q, enc] = build_integer_qubo(m, y, bits);
        std::vector<std::uint8_t> assignment(enc.num_binary());
        for (auto& b : assignment) b = rng.coin();
        const auto decoded = enc.decode(assignment);
        const std::vector<double> xd(decoded.begin(), decoded.end());
        CHECK(std::abs(qubo_energy(q, assignment) - residual_norm2(m, y, xd)) <= 1e-9);
    }
}

TEST_CASE("single-variable ising conversion") {
    QuboModel q;
    q.n = 1;
    q.linear = {0.8};
    const IsingModel ising = qubo_to_ising(q);
    CHECK(ising.h[0] == doctest::Approx(0.4));
    CHECK(ising.offset == doctest::Approx(0.4));
}

TEST_CASE("ising round trip reproduces coefficients") {
    Rng rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        QuboModel q;
        q.n = 6;
        q.linear = random_vector(rng, 6, -3.0, 3.0);
        for (int i = 0; i < 6; ++i)
            for (int j = i + 1; j < 6; ++j)
                if (rng.coin()) q.quadratic.push_back({i, j, rng.uniform01() * 4.0 - 2.0});
        q.offset = rng.uniform01();
        const QuboModel back = ising_to_qubo(qubo_to_ising(q));
        CHECK(back.offset == doctest::Approx(q.offset).epsilon(1e-12));
        for (int i = 0; i < q.n; ++i)
            CHECK(back.linear[i] == doctest::Approx(q.linear[i]).epsilon(1e-12));
        REQUIRE(back.quadratic.size() == q.quadratic.size());
        for (std::size_t i = 0; i < q.quadratic.size(); ++i)
            CHECK(back.quadratic[i].value == doctest::Approx(q.quadratic[i].value).epsilon(1e-12));
    }
}

TEST_CASE("qubo and ising energies agree on the full assignment space") {
    Rng rng(77);
    QuboModel q;
    q.n = 4;
    q.linear = random_vector(rng, 4, -2.0, 2.0);
    q.quadratic = {{0, 1, 1.0}, {0, 2, -0.5}, {1, 3, 0.75}, {2, 3, -1.25}};
    q.offset = 0.5;
    const IsingModel ising = qubo_to_ising(q);
    for (std::uint32_t mask = 0; mask < 16; ++mask) {
        std::vector<std::uint8_t> x(4);
        std::vector<std::int8_t> s(4);
        for (int i = 0; i < 4; ++i) {
            x[i] = (mask >> i) & 1;
            s[i] = static_cast<std::int8_t>(2 * x[i] - 1);
        }
        CHECK(std::abs(qubo_energy(q, x) - ising_energy(ising, s)) <= 1e-12);
    }
}

TEST_CASE("qubo file round trip") {
    Rng rng(64);
    QuboModel q;
    q.n = 5;
    q.linear = random_vector(rng, 5, -10.0, 10.0);
    q.linear[2] = 0.0;  // zero linear terms are omitted from the file
    q.quadratic = {{0, 1, 0.1234567890123456}, {1, 4, -3.75}, {2, 3, 1e-8}};
    q.offset = -0.875;
    const auto path = (std::filesystem::temp_directory_path() / "model.qubo").string();
    export_qubo(q, path);
    const QuboModel back = import_qubo(path);
    CHECK(back.n == q.n);
    CHECK(back.offset == q.offset);
    CHECK(back.linear == q.linear);
    REQUIRE(back.quadratic.size() == q.quadratic.size());
    for (std::size_t i = 0; i < q.quadratic.size(); ++i) {
        CHECK(back.quadratic[i].i == q.quadratic[i].i);
        CHECK(back.quadratic[i].j == q.quadratic[i].j);
        CHECK(back.quadratic[i].value == q.quadratic[i].value);
    }
}

TEST_CASE("empty model exports as a bare header") {
    QuboModel q;
    q.offset = 1.5;
    const auto path = (std::filesystem::temp_directory_path() / "empty.qubo").string();
    export_qubo(q, path);
    std::ifstream in(path);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content == "0 1.5\n");
}

TEST_CASE("qubo import rejects malformed files") {
    const auto dir = std::filesystem::temp_directory_path();
    const auto write = [&](const char* name, const std::string& content) {
        const auto path = (dir / name).string();
        std::ofstream out(path);
        out << content;
        return path;
    };
    CHECK_THROWS_WITH_AS((void)import_qubo(write("bad1.qubo", "3 0.0\n2 1 5.0\n")),
                         doctest::Contains("i < j"), std::runtime_error);
    CHECK_THROWS_WITH_AS((void)import_qubo(write("bad2.qubo", "3 0.0\n0 1 1.0\n0 1 2.0\n")),
                         doctest::Contains("duplicate"), std::runtime_error);
    CHECK_THROWS_WITH_AS((void)import_qubo(write("bad3.qubo", "3 0.0\n0 x 1.0\n")),
                         doctest::Contains(":2:"), std::runtime_error);
    CHECK_THROWS_AS((void)import_qubo(write("bad4.qubo", "not a header\n")), std::runtime_error);
    CHECK_THROWS_WITH_AS((void)import_qubo(write("bad5.qubo", "2 0.0\n0 3 1.0\n")),
                         doctest::Contains("range"), std::runtime_error);
}
