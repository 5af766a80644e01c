#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tomoqa/image.hpp"
#include "tomoqa/samplers.hpp"

namespace tomoqa {

enum class ExperimentKind { SizeSweep, NoiseEval, Underdetermined };
enum class Method { Qa, Hybrid, Fbp, Sart, Pinv };

ExperimentKind parse_experiment_kind(const std::string& name);
std::string experiment_kind_name(ExperimentKind kind);
Method parse_method(const std::string& name);
std::string method_name(Method method);

// One test object: a named phantom ("foam", "shepp_logan", ...), an
// embedded digit glyph ("glyph:7"), or a digits CSV row
// ("digits:path.csv:42").
struct PhantomSpec {
    std::string spec;

    Image realize(int size) const;
    // Bit depth the spec produces (1 for binary masks, 4 for the rest).
    int bits() const;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::SizeSweep;
    std::vector<PhantomSpec> phantoms;
    std::vector<int> sizes;
    std::vector<int> views;  // empty: V = N (fully determined)
    std::vector<Method> methods;
    std::vector<std::uint64_t> seeds;
    int reads = 100;            // annealing reads for the qa method
    AnnealSchedule schedule{};  // qa schedule
    double time_limit_s = 5.0;  // hybrid budget (wall-clock mode)
    int iterations = 0;         // > 0: deterministic iteration budget for hybrid
};

// Parsed from the JSON file documented in the README; throws
// std::runtime_error with a description on any schema violation.
ExperimentConfig load_experiment_config(const std::string& path);

struct ResultRow {
    std::string experiment;
    std::string phantom;
    int size = 0;
    int views = 0;
    std::string method;
    std::uint64_t seed = 0;
    int noise = 0;  // 1 when the sinogram carried a noise realization
    double rmse = 0.0;
    double ssim = 0.0;
    double residual = 0.0;   // ||M x_hat - y||_2 of the discretized output
    double wall_time = 0.0;  // 0 in iteration-budget mode to keep output reproducible
};

struct ResultTable {
    std::vector<ResultRow> rows;
};

struct RunReport {
    ResultTable table;
    std::vector<std::string> errors;  // one entry per aborted row
};

RunReport run_experiment(const ExperimentConfig& config);

// Writes results.csv plus per-metric SVG plots (mean with sample-variance
// error bars, one polyline per method) into out_dir.
void emit_report(const ResultTable& table, const std::string& out_dir);

// results.csv round trip, used by the reproducibility checks.
ResultTable load_result_table(const std::string& path);

}  // namespace tomoqa
