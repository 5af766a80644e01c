#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tomoqa/geometry.hpp"
#include "tomoqa/qubo.hpp"

namespace tomoqa {

struct SampleRecord {
    std::vector<std::uint8_t> assignment;
    double energy = 0.0;
    int occurrences = 1;
};

// Solver output, sorted ascending by energy (ties: lexicographic by
// assignment). Occurrences sum to the number of reads.
struct SampleSet {
    std::vector<SampleRecord> records;
    std::uint64_t seed = 0;
    int num_reads = 0;
    double wall_time_s = 0.0;

    const SampleRecord& best() const;
};

// Geometric inverse-temperature ramp over the sweeps of one read.
struct AnnealSchedule {
    int sweeps = 1000;
    double beta_start = 0.1;
    double beta_end = 10.0;
};

void validate_schedule(const AnnealSchedule& s);

// Ground-truth oracle: enumerates all 2^n assignments (n <= 24) and
// returns every assignment attaining the minimal energy.
SampleSet exhaustive_solve(const QuboModel& q);

// Classical stand-in for the annealing sampler: per read, random start and
// sweeps of single-variable Metropolis updates with O(1) energy deltas.
// Deterministic for fixed (model, reads, schedule, seed); reads run in
// parallel up to the TOMOQA_THREADS cap.
SampleSet simulated_annealing_sample(const QuboModel& q, int num_reads,
                                     const AnnealSchedule& schedule, std::uint64_t seed);

// One in-order pass setting each coordinate to the best integer in
// [lo, hi] of its 1-D quadratic section. Equal-energy ties break toward
// the smaller value; zero columns are left unchanged. Never increases
// ||Mx - y||^2.
std::vector<int> coordinate_descent_sweep(const SystemMatrix& m, std::span<const double> y,
                                          std::vector<int> x, int lo, int hi);

struct HybridOptions {
    double time_limit_s = 5.0;   // wall-clock budget
    int max_iterations = 0;      // > 0 switches to a deterministic iteration budget
    int subproblem_vars = 12;    // pixels re-optimized per sub-QUBO round
    int sub_reads = 20;
    AnnealSchedule sub_schedule{200, 0.1, 10.0};
    double perturb_fraction = 0.1;
    double stop_energy = 1e-16;  // early exit when the residual is this small
    std::uint64_t seed = 0;
    std::string debug_qubo_dir;  // when set, sub-QUBOs are exported here
};

struct HybridResult {
    std::vector<int> x;
    double energy = 0.0;  // ||Mx - y||^2, recomputed from scratch
    int iterations = 0;
    double wall_time_s = 0.0;
    std::vector<double> best_energy_trace;  // best-ever energy after each iteration
};

// Emulation of the hybrid integer workflow: coordinate descent to a local
// optimum, sub-QUBO rounds over the most promising pixels solved with the
// annealing sampler, seeded perturbation restarts on rejection. Bounds are
// [0, 2^bits - 1].
HybridResult hybrid_cqm_solve(const SystemMatrix& m, std::span<const double> y, int bits,
                              const HybridOptions& opts = {});

}  // namespace tomoqa
