#include "tomoqa/samplers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "parallel.hpp"
#include "tomoqa/rng.hpp"

namespace tomoqa {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Symmetric adjacency view of the upper-triangular quadratic terms.
struct Adjacency {
    std::vector<std::vector<std::pair<int, double>>> neighbors;

    explicit Adjacency(const QuboModel& q) : neighbors(q.n) {
        for (const QuadTerm& t : q.quadratic) {
            neighbors[t.i].emplace_back(t.j, t.value);
            neighbors[t.j].emplace_back(t.i, t.value);
        }
    }
};

void sort_records(std::vector<SampleRecord>& records) {
    std::sort(records.begin(), records.end(), [](const SampleRecord& a, const SampleRecord& b) {
        if (a.energy != b.energy) return a.energy < b.energy;
        return a.assignment < b.assignment;
    });
}

}  // namespace

const SampleRecord& SampleSet::best() const {
    if (records.empty()) throw std::logic_error("empty sample set");
    return records.front();
}

void validate_schedule(const AnnealSchedule& s) {
    if (s.sweeps < 1) throw std::invalid_argument("schedule must have at least one sweep");
    if (!(s.beta_start > 0.0) || !(s.beta_end > 0.0))
        throw std::invalid_argument("inverse temperatures must be positive");
    if (!(s.beta_start < s.beta_end))
        throw std::invalid_argument("beta_start must be below beta_end");
}

SampleSet exhaustive_solve(const QuboModel& q) {
    if (q.n > 24) throw std::invalid_argument("exhaustive_solve is limited to n <= 24");

    SampleSet result;
    result.num_reads = 1;
    const auto start = Clock::now();

    if (q.n == 0) {
        result.records.push_back({{}, q.offset, 1});
        result.wall_time_s = seconds_since(start);
        return result;
    }

    const Adjacency adj(q);
    std::vector<std::uint8_t> x(q.n, 0);
    std::vector<double> field = q.linear;  // field[i] = dE of setting x_i, given others
    double energy = q.offset;

    double best = energy;
    std::vector<std::uint32_t> candidates{0};
    const double band = 1e-9;

    // Gray-code walk: step m flips the lowest set bit of m.
    const std::uint64_t total = 1ULL << q.n;
    std::uint32_t gray = 0;
    for (std::uint64_t m = 1; m < total; ++m) {
        const int bit = static_cast<int>(__builtin_ctzll(m));
        gray ^= 1u << bit;
        const double delta = x[bit] ? -field[bit] : field[bit];
        energy += delta;
        x[bit] ^= 1;
        const double step = x[bit] ? 1.0 : -1.0;
        for (const auto& [j, w] : adj.neighbors[bit]) field[j] += w * step;

        if (energy < best - band) {
            best = energy;
            candidates.clear();
            candidates.push_back(gray);
        } else if (energy <= best + band) {
            candidates.push_back(gray);
        }
    }

    // Recompute candidate energies canonically; incremental sums drift.
    double exact_best = std::numeric_limits<double>::infinity();
    std::vector<std::pair<std::uint32_t, double>> exact;
    exact.reserve(candidates.size());
    for (std::uint32_t mask : candidates) {
        std::vector<std::uint8_t> a(q.n);
        for (int i = 0; i < q.n; ++i) a[i] = (mask >> i) & 1;
        const double e = qubo_energy(q, a);
        exact.emplace_back(mask, e);
        exact_best = std::min(exact_best, e);
    }
    const double tol = 1e-9 * (1.0 + std::abs(exact_best));
    std::sort(exact.begin(), exact.end());
    exact.erase(std::unique(exact.begin(), exact.end()), exact.end());
    for (const auto& [mask, e] : exact) {
        if (e > exact_best + tol) continue;
        std::vector<std::uint8_t> a(q.n);
        for (int i = 0; i < q.n; ++i) a[i] = (mask >> i) & 1;
        result.records.push_back({std::move(a), e, 1});
    }
    sort_records(result.records);
    result.wall_time_s = seconds_since(start);
    return result;
}

SampleSet simulated_annealing_sample(const QuboModel& q, int num_reads,
                                     const AnnealSchedule& schedule, std::uint64_t seed) {
    if (q.n < 1) throw std::invalid_argument("model must have at least one variable");
    if (num_reads < 1) throw std::invalid_argument("num_reads must be positive");
    validate_schedule(schedule);

    const auto start = Clock::now();
    const Adjacency adj(q);

    std::vector<double> betas(schedule.sweeps);
    if (schedule.sweeps == 1) {
        betas[0] = schedule.beta_end;
    } else {
        const double ratio = schedule.beta_end / schedule.beta_start;
        for (int s = 0; s < schedule.sweeps; ++s)
            betas[s] = schedule.beta_start *
                       std::pow(ratio, static_cast<double>(s) / (schedule.sweeps - 1));
    }

    std::vector<std::vector<std::uint8_t>> finals(num_reads);
    detail::parallel_for(num_reads, [&](int read) {
        Rng rng(substream_seed(seed, stream_domain::kAnnealRead, static_cast<std::uint64_t>(read)));
        std::vector<std::uint8_t> x(q.n);
        for (int i = 0; i < q.n; ++i) x[i] = rng.coin() ? 1 : 0;

        std::vector<double> field = q.linear;
        for (const QuadTerm& t : q.quadratic) {
            if (x[t.j]) field[t.i] += t.value;
            if (x[t.i]) field[t.j] += t.value;
        }

        for (double beta : betas) {
            for (int i = 0; i < q.n; ++i) {
                const double delta = x[i] ? -field[i] : field[i];
                if (delta > 0.0 && rng.uniform01() >= std::exp(-beta * delta)) continue;
                x[i] ^= 1;
                const double step = x[i] ? 1.0 : -1.0;
                for (const auto& [j, w] : adj.neighbors[i]) field[j] += w * step;
            }
        }
        finals[read] = std::move(x);
    });

    std::map<std::vector<std::uint8_t>, int> occurrences;
    for (const auto& x : finals) ++occurrences[x];

    SampleSet result;
    result.seed = seed;
    result.num_reads = num_reads;
    result.records.reserve(occurrences.size());
    for (const auto& [x, count] : occurrences)
        result.records.push_back({x, qubo_energy(q, x), count});
    sort_records(result.records);
    result.wall_time_s = seconds_since(start);
    return result;
}

namespace {

// Column view of the system matrix with cached squared norms; shared by
// coordinate descent and the hybrid loop.
struct ColumnCache {
    std::vector<std::vector<std::pair<int, double>>> cols;  // (row, weight)
    std::vector<double> norm2;

    explicit ColumnCache(const SystemMatrix& m) : cols(m.cols), norm2(m.cols, 0.0) {
        for (int r = 0; r < m.rows; ++r) {
            for (const MatrixEntry& e : m.row_entries[r]) {
                cols[e.col].emplace_back(r, e.weight);
                norm2[e.col] += e.weight * e.weight;
            }
        }
    }
};

// One pass over the coordinates; residual r = Mx - y kept in step.
// Returns true if any coordinate moved.
bool cd_pass(const ColumnCache& cache, std::vector<int>& x, std::vector<double>& residual,
             int lo, int hi) {
    bool moved = false;
    const int n = static_cast<int>(x.size());
    for (int j = 0; j < n; ++j) {
        const double a = cache.norm2[j];
        if (a == 0.0) continue;
        double g = 0.0;
        for (const auto& [row, w] : cache.cols[j]) g += w * residual[row];
        const double t_star = x[j] - g / a;
        const double t_clamped = std::clamp(t_star, static_cast<double>(lo), static_cast<double>(hi));
        int ta = static_cast<int>(std::floor(t_clamped));
        int tb = ta + 1;
        ta = std::clamp(ta, lo, hi);
        tb = std::clamp(tb, lo, hi);
        // dE(t) = a*(t - x_j)^2 + 2 g (t - x_j); ties break toward the smaller t.
        const double da = static_cast<double>(ta - x[j]);
        const double db = static_cast<double>(tb - x[j]);
        const double ea = a * da * da + 2.0 * g * da;
        const double eb = a * db * db + 2.0 * g * db;
        const int t = ea <= eb ? ta : tb;
        if (t == x[j]) continue;
        const double step = static_cast<double>(t - x[j]);
        for (const auto& [row, w] : cache.cols[j]) residual[row] += step * w;
        x[j] = t;
        moved = true;
    }
    return moved;
}

double squared_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

std::vector<double> compute_residual(const SystemMatrix& m, std::span<const double> y,
                                     const std::vector<int>& x) {
    std::vector<double> r(m.rows, 0.0);
    for (int row = 0; row < m.rows; ++row) {
        double sum = 0.0;
        for (const MatrixEntry& e : m.row_entries[row]) sum += e.weight * x[e.col];
        r[row] = sum - y[row];
    }
    return r;
}

// Classical warm start: projected Landweber iterations toward the box
// least-squares point (the minimum-norm solution when the system is
// consistent), rounded to integers. Matrix-free and deterministic.
std::vector<int> landweber_start(const SystemMatrix& m, const ColumnCache& cache,
                                 std::span<const double> y, int lo, int hi) {
    const int n = m.cols;
    // spectral norm of M^T M via power iteration
    std::vector<double> v(n, 1.0), mv(m.rows), mtmv(n);
    double lambda = 1.0;
    for (int it = 0; it < 30; ++it) {
        std::fill(mv.begin(), mv.end(), 0.0);
        for (int r = 0; r < m.rows; ++r)
            for (const MatrixEntry& e : m.row_entries[r]) mv[r] += e.weight * v[e.col];
        std::fill(mtmv.begin(), mtmv.end(), 0.0);
        for (int r = 0; r < m.rows; ++r)
            for (const MatrixEntry& e : m.row_entries[r]) mtmv[e.col] += e.weight * mv[r];
        lambda = std::sqrt(squared_norm(mtmv));
        if (lambda == 0.0) return std::vector<int>(n, 0);
        for (int j = 0; j < n; ++j) v[j] = mtmv[j] / lambda;
    }
    const double step = 1.0 / lambda;

    std::vector<double> x(n, 0.0), grad(n);
    for (int it = 0; it < 400; ++it) {
        std::fill(mv.begin(), mv.end(), 0.0);
        for (int r = 0; r < m.rows; ++r)
            for (const MatrixEntry& e : m.row_entries[r]) mv[r] += e.weight * x[e.col];
        for (int r = 0; r < m.rows; ++r) mv[r] -= y[r];
        std::fill(grad.begin(), grad.end(), 0.0);
        for (int r = 0; r < m.rows; ++r)
            for (const MatrixEntry& e : m.row_entries[r]) grad[e.col] += e.weight * mv[r];
        double change = 0.0;
        for (int j = 0; j < n; ++j) {
            if (cache.norm2[j] == 0.0) continue;
            const double next =
                std::clamp(x[j] - step * grad[j], static_cast<double>(lo), static_cast<double>(hi));
            change += std::abs(next - x[j]);
            x[j] = next;
        }
        if (change < 1e-12 * n) break;
    }
    std::vector<int> rounded(n, 0);
    for (int j = 0; j < n; ++j)
        rounded[j] = std::clamp(static_cast<int>(std::floor(x[j] + 0.5)), lo, hi);
    return rounded;
}

}  // namespace

std::vector<int> coordinate_descent_sweep(const SystemMatrix& m, std::span<const double> y,
                                          std::vector<int> x, int lo, int hi) {
    if (static_cast<int>(x.size()) != m.cols)
        throw std::invalid_argument("start vector length does not match matrix columns");
    if (static_cast<int>(y.size()) != m.rows)
        throw std::invalid_argument("measurement length does not match matrix rows");
    if (lo > hi) throw std::invalid_argument("empty bounds");
    for (int v : x)
        if (v < lo || v > hi) throw std::invalid_argument("start vector violates bounds");
    const ColumnCache cache(m);
    std::vector<double> residual = compute_residual(m, y, x);
    cd_pass(cache, x, residual, lo, hi);
    return x;
}

HybridResult hybrid_cqm_solve(const SystemMatrix& m, std::span<const double> y, int bits,
                              const HybridOptions& opts) {
    if (bits < 1) throw std::invalid_argument("bits must be positive");
    if (static_cast<int>(y.size()) != m.rows)
        throw std::invalid_argument("measurement length does not match matrix rows");
    if (opts.max_iterations <= 0 && !(opts.time_limit_s > 0.0))
        throw std::invalid_argument("time limit must be positive");

    const auto start = Clock::now();
    const int n = m.cols;
    const int lo = 0, hi = (1 << bits) - 1;
    const ColumnCache cache(m);

    std::vector<int> x = landweber_start(m, cache, y, lo, hi);
    std::vector<double> residual = compute_residual(m, y, x);
    double energy = squared_norm(residual);
    {
        const std::vector<int> zeros(n, 0);
        const std::vector<double> zero_residual = compute_residual(m, y, zeros);
        if (squared_norm(zero_residual) < energy) {
            x = zeros;
            residual = zero_residual;
            energy = squared_norm(residual);
        }
    }

    HybridResult result;
    result.x = x;
    result.energy = energy;

    Rng rng(substream_seed(opts.seed, stream_domain::kHybrid, 0));

    const auto budget_left = [&](int iter) {
        if (opts.max_iterations > 0) return iter < opts.max_iterations;
        return seconds_since(start) < opts.time_limit_s;
    };

    int iter = 0;
    for (; budget_left(iter); ++iter) {
        // (a) coordinate descent to a local optimum
        while (cd_pass(cache, x, residual, lo, hi)) {
        }
        energy = squared_norm(residual);
        if (energy < result.energy) {
            result.energy = energy;
            result.x = x;
        }
        result.best_energy_trace.push_back(result.energy);
        if (result.energy <= opts.stop_energy) {
            ++iter;
            break;
        }

        // (b) rank pixels by the 1-D relaxation drop plus the residual mass
        // on their rays; joint moves inside that set are what the sub-QUBO
        // can exploit.
        std::vector<double> score(n, 0.0);
        for (int j = 0; j < n; ++j) {
            if (cache.norm2[j] == 0.0) continue;
            double g = 0.0, mass = 0.0;
            for (const auto& [row, w] : cache.cols[j]) {
                g += w * residual[row];
                mass += residual[row] * residual[row];
            }
            score[j] = g * g / cache.norm2[j] + mass;
        }
        const int k = std::min(opts.subproblem_vars, n);
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](int a, int b) {
            if (score[a] != score[b]) return score[a] > score[b];
            return a < b;
        });
        std::vector<int> selected(order.begin(), order.begin() + k);
        std::sort(selected.begin(), selected.end());

        // (c) sub-QUBO over the selected pixels, every other pixel frozen
        SystemMatrix sub;
        sub.rows = m.rows;
        sub.cols = k;
        sub.views = m.views;
        sub.bins = m.bins;
        sub.row_entries.resize(m.rows);
        std::vector<int> col_of(n, -1);
        for (int idx = 0; idx < k; ++idx) col_of[selected[idx]] = idx;
        for (int r = 0; r < m.rows; ++r)
            for (const MatrixEntry& e : m.row_entries[r])
                if (col_of[e.col] >= 0) sub.row_entries[r].push_back({col_of[e.col], e.weight});

        std::vector<double> y_sub(m.rows);  // y - M x_frozen = -(r - sum_sel x_j c_j)
        for (int r = 0; r < m.rows; ++r) y_sub[r] = -residual[r];
        for (int idx = 0; idx < k; ++idx) {
            const int j = selected[idx];
            if (x[j] == 0) continue;
            for (const auto& [row, w] : cache.cols[j]) y_sub[row] += x[j] * w;
        }

        auto [sub_qubo, encoding] = build_integer_qubo(sub, y_sub, bits);
        if (!opts.debug_qubo_dir.empty()) {
            char name[64];
            std::snprintf(name, sizeof name, "/subqubo_%04d.txt", iter);
            export_qubo(sub_qubo, opts.debug_qubo_dir + name);
        }
        const SampleSet samples = simulated_annealing_sample(
            sub_qubo, opts.sub_reads, opts.sub_schedule,
            substream_seed(opts.seed, stream_domain::kHybrid, 1 + static_cast<std::uint64_t>(iter)));
        const std::vector<int> sub_values = encoding.decode(samples.best().assignment);

        std::vector<int> candidate = x;
        for (int idx = 0; idx < k; ++idx) candidate[selected[idx]] = sub_values[idx];
        std::vector<double> cand_residual = compute_residual(m, y, candidate);
        const double cand_energy = squared_norm(cand_residual);

        // (d) accept strict improvements, otherwise perturb and move on
        if (cand_energy < energy) {
            x = std::move(candidate);
            residual = std::move(cand_residual);
            energy = cand_energy;
            if (energy < result.energy) {
                result.energy = energy;
                result.x = x;
            }
        } else {
            const int count = std::max(1, static_cast<int>(std::lround(opts.perturb_fraction * n)));
            for (int p = 0; p < count; ++p) {
                const int j = rng.bounded(n);
                x[j] = lo + rng.bounded(hi - lo + 1);
            }
            residual = compute_residual(m, y, x);
            energy = squared_norm(residual);
        }
    }

    result.iterations = iter;
    result.wall_time_s = seconds_since(start);
    // Recompute from scratch so the reported energy stands on its own.
    result.energy = squared_norm(compute_residual(m, y, result.x));
    return result;
}

}  // namespace tomoqa
