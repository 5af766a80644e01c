#include <doctest.h>

#include <cmath>
#include <limits>

#include "tomoqa/baselines.hpp"
#include "tomoqa/metrics.hpp"
#include "tomoqa/noise.hpp"
#include "tomoqa/phantoms.hpp"
#include "tomoqa/qubo.hpp"
#include "tomoqa/rng.hpp"
#include "tomoqa/samplers.hpp"

using namespace tomoqa;

namespace {

QuboModel random_model(Rng& rng, int n, double density = 0.5) {
    QuboModel q;
    q.n = n;
    q.linear.resize(n);
    for (double& v : q.linear) v = rng.uniform01() * 4.0 - 2.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform01() < density) q.quadratic.push_back({i, j, rng.uniform01() * 4.0 - 2.0});
    q.offset = rng.uniform01() - 0.5;
    return q;
}

// Plain full scan with dense evaluation, independent of the Gray-code path.
double dense_minimum(const QuboModel& q) {
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 0; mask < (1u << q.n); ++mask) {
        std::vector<std::uint8_t> x(q.n);
        for (int i = 0; i < q.n; ++i) x[i] = (mask >> i) & 1;
        best = std::min(best, qubo_energy(q, x));
    }
    return best;
}

SystemMatrix single_entry_matrix(double w) {
    SystemMatrix m;
    m.rows = 1;
    m.cols = 1;
    m.views = 1;
    m.bins = 1;
    m.row_entries = {{{0, w}}};
    return m;
}

}  // namespace

TEST_CASE("exhaustive solve on a one-variable model") {
    QuboModel q;
    q.n = 1;
    q.linear = {-1.0};
    const SampleSet s = exhaustive_solve(q);
    REQUIRE(s.records.size() == 1);
    CHECK(s.records[0].assignment == std::vector<std::uint8_t>{1});
    CHECK(s.records[0].energy == doctest::Approx(-1.0));
}

TEST_CASE("exhaustive solve returns every tied ground state") {
    // ||x0 + x1 - 1||^2: both (1,0) and (0,1) sit at zero
    QuboModel q;
    q.n = 2;
    q.linear = {-1.0, -1.0};
    q.quadratic = {{0, 1, 2.0}};
    q.offset = 1.0;
    const SampleSet s = exhaustive_solve(q);
    REQUIRE(s.records.size() == 2);
    CHECK(s.records[0].assignment == std::vector<std::uint8_t>{0, 1});
    CHECK(s.records[1].assignment == std::vector<std::uint8_t>{1, 0});
    CHECK(s.records[0].energy == doctest::Approx(0.0));
    CHECK(s.records[1].energy == doctest::Approx(0.0));
}

TEST_CASE("exhaustive solve matches a dense scan on random 8-variable models") {
    Rng rng(90210);
    for (int trial = 0; trial < 20; ++trial) {
        const QuboModel q = random_model(rng, 8);
        const SampleSet s = exhaustive_solve(q);
        CHECK(std::abs(s.records[0].energy - dense_minimum(q)) <= 1e-9);
    }
}

TEST_CASE("exhaustive solve enforces the size guard") {
    QuboModel q;
    q.n = 25;
    q.linear.assign(25, 0.0);
    CHECK_THROWS_AS((void)exhaustive_solve(q), std::invalid_argument);
}

TEST_CASE("annealer finds the trivial single-variable optimum") {
    QuboModel q;
    q.n = 1;
    q.linear = {-1.0};
    const SampleSet s = simulated_annealing_sample(q, 10, AnnealSchedule{100, 0.1, 10.0}, 3);
    CHECK(s.best().assignment == std::vector<std::uint8_t>{1});
    CHECK(s.best().energy == doctest::Approx(-1.0));
}

TEST_CASE("annealer is deterministic for a fixed seed") {
    Rng rng(5150);
    const QuboModel q = random_model(rng, 12);
    const SampleSet a = simulated_annealing_sample(q, 25, AnnealSchedule{}, 99);
    const SampleSet b = simulated_annealing_sample(q, 25, AnnealSchedule{}, 99);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].assignment == b.records[i].assignment);
        CHECK(a.records[i].energy == b.records[i].energy);
        CHECK(a.records[i].occurrences == b.records[i].occurrences);
    }
}

TEST_CASE("sample set bookkeeping: sorted energies, occurrences sum to reads") {
    Rng rng(2);
    const QuboModel q = random_model(rng, 6);
    const SampleSet s = simulated_annealing_sample(q, 40, AnnealSchedule{200, 0.1, 8.0}, 17);
    int total = 0;
    for (std::size_t i = 0; i < s.records.size(); ++i) {
        total += s.records[i].occurrences;
        if (i) CHECK(s.records[i].energy >= s.records[i - 1].energy);
        CHECK(std::abs(qubo_energy(q, s.records[i].assignment) - s.records[i].energy) <= 1e-9);
    }
    CHECK(total == 40);
    CHECK(s.num_reads == 40);
}

TEST_CASE("annealer reaches the exhaustive optimum on random 8-variable models") {
    Rng rng(31415);
    int matched = 0;
    const int instances = 100;
    for (int trial = 0; trial < instances; ++trial) {
        const QuboModel q = random_model(rng, 8);
        const double target = exhaustive_solve(q).records[0].energy;
        const SampleSet s =
            simulated_annealing_sample(q, 100, AnnealSchedule{200, 0.1, 10.0}, 7000 + trial);
        if (std::abs(s.best().energy - target) <= 1e-9) ++matched;
    }
    CHECK(matched >= 99);
}

TEST_CASE("annealer rejects invalid schedules") {
    QuboModel q;
    q.n = 1;
    q.linear = {1.0};
    CHECK_THROWS_AS((void)simulated_annealing_sample(q, 1, AnnealSchedule{0, 0.1, 1.0}, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)simulated_annealing_sample(q, 1, AnnealSchedule{10, 1.0, 0.5}, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)simulated_annealing_sample(q, 1, AnnealSchedule{10, -1.0, 1.0}, 0),
                    std::invalid_argument);
}

TEST_CASE("coordinate descent solves the scalar case in closed form") {
    const SystemMatrix m = single_entry_matrix(2.0);
    const std::vector<double> y = {6.0};
    const auto x = coordinate_descent_sweep(m, y, {0}, 0, 15);
    CHECK(x == std::vector<int>{3});
}

TEST_CASE("coordinate descent breaks exact ties toward the smaller value") {
    const SystemMatrix m = single_entry_matrix(2.0);
    const std::vector<double> y = {7.0};  // 3 and 4 both leave residual 1
    const auto x = coordinate_descent_sweep(m, y, {0}, 0, 15);
    CHECK(x == std::vector<int>{3});
}

TEST_CASE("coordinate descent is a fixed point at the rounded optimum") {
    const SystemMatrix m = single_entry_matrix(2.0);
    const std::vector<double> y = {6.0};
    const auto x = coordinate_descent_sweep(m, y, {3}, 0, 15);
    CHECK(x == std::vector<int>{3});
}

TEST_CASE("coordinate descent never increases the objective") {
    Rng rng(606);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 3 + rng.bounded(3);
        const SystemMatrix m = build_system_matrix(n, angle_set(2 + rng.bounded(3)));
        std::vector<double> y(m.rows);
        for (double& v : y) v = rng.uniform01() * n;
        std::vector<int> x(m.cols);
        for (int& v : x) v = rng.bounded(4);

        const auto energy_of = [&](const std::vector<int>& v) {
            const std::vector<double> vd(v.begin(), v.end());
            const Sinogram p = project(m, vd);
            double e = 0.0;
            for (int i = 0; i < m.rows; ++i) e += (p.values[i] - y[i]) * (p.values[i] - y[i]);
            return e;
        };
        const double before = energy_of(x);
        const auto improved = coordinate_descent_sweep(m, y, x, 0, 3);
        CHECK(energy_of(improved) <= before + 1e-12);
    }
}

TEST_CASE("coordinate descent leaves zero columns unchanged") {
    SystemMatrix m;
    m.rows = 1;
    m.cols = 2;
    m.views = 1;
    m.bins = 1;
    m.row_entries = {{{0, 1.0}}};  // column 1 is empty
    const std::vector<double> y = {5.0};
    const auto x = coordinate_descent_sweep(m, y, {0, 9}, 0, 15);
    CHECK(x[0] == 5);
    CHECK(x[1] == 9);
}

TEST_CASE("hybrid recovers an identity system exactly and stops early") {
    SystemMatrix m;
    m.rows = 4;
    m.cols = 4;
    m.views = 4;
    m.bins = 1;
    m.row_entries.resize(4);
    for (int i = 0; i < 4; ++i) m.row_entries[i].push_back({i, 1.0});
    const std::vector<double> y = {3.0, 0.0, 15.0, 7.0};
    HybridOptions opts;
    opts.time_limit_s = 10.0;
    opts.seed = 1;
    const HybridResult r = hybrid_cqm_solve(m, y, 4, opts);
    CHECK(r.x == std::vector<int>{3, 0, 15, 7});
    CHECK(r.energy == doctest::Approx(0.0));
    CHECK(r.wall_time_s < 5.0);  // convergence detection beats the limit
}

TEST_CASE("hybrid beats or ties the discretized pseudoinverse on 4x4 shepp-logan") {
    const Image gt = generate_phantom(PhantomKind::SheppLogan, 4);
    const SystemMatrix m = build_system_matrix(4, angle_set(4));
    const Sinogram y = project(m, to_doubles(gt));
    const Image pinv_img = discretize(pinv_reconstruct(m, y.values), 4);
    const double pinv_rmse = rmse(gt, pinv_img);

    HybridOptions opts;
    opts.time_limit_s = 5.0;
    opts.seed = 3;
    const HybridResult r = hybrid_cqm_solve(m, y.values, 4, opts);
    Image recon = make_image(4, 4);
    recon.pixels = r.x;
    CHECK(rmse(gt, recon) <= pinv_rmse + 1e-12);
}

TEST_CASE("hybrid respects bounds and reports a recomputable energy") {
    const Image gt = generate_phantom(PhantomKind::Foam, 8);
    const SystemMatrix m = build_system_matrix(8, angle_set(4));
    const Sinogram y = apply_noise(gt, m, 4, 9);
    HybridOptions opts;
    opts.max_iterations = 8;
    opts.seed = 5;
    const HybridResult r = hybrid_cqm_solve(m, y.values, 1, opts);
    for (int v : r.x) CHECK((v == 0 || v == 1));
    const std::vector<double> xd(r.x.begin(), r.x.end());
    const Sinogram p = project(m, xd);
    double energy = 0.0;
    for (int i = 0; i < m.rows; ++i) energy += (p.values[i] - y.values[i]) * (p.values[i] - y.values[i]);
    CHECK(std::abs(energy - r.energy) <= 1e-9);
}

TEST_CASE("hybrid best-energy trace is non-increasing") {
    const Image gt = generate_phantom(PhantomKind::Tree, 8);
    const SystemMatrix m = build_system_matrix(8, angle_set(2));
    const Sinogram y = apply_noise(gt, m, 2, 21);
    HybridOptions opts;
    opts.max_iterations = 12;
    opts.seed = 2;
    const HybridResult r = hybrid_cqm_solve(m, y.values, 1, opts);
    for (std::size_t i = 1; i < r.best_energy_trace.size(); ++i)
        CHECK(r.best_energy_trace[i] <= r.best_energy_trace[i - 1] + 1e-15);
}

TEST_CASE("hybrid iteration mode is bit-reproducible") {
    const Image gt = generate_phantom(PhantomKind::Molecule, 8);
    const SystemMatrix m = build_system_matrix(8, angle_set(3));
    const Sinogram y = apply_noise(gt, m, 3, 4);
    HybridOptions opts;
    opts.max_iterations = 6;
    opts.seed = 11;
    const HybridResult a = hybrid_cqm_solve(m, y.values, 1, opts);
    const HybridResult b = hybrid_cqm_solve(m, y.values, 1, opts);
    CHECK(a.x == b.x);
    CHECK(a.energy == b.energy);
    CHECK(a.best_energy_trace == b.best_energy_trace);
}
