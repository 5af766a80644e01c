#include "tomoqa/experiment.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "tomoqa/baselines.hpp"
#include "tomoqa/image_io.hpp"
#include "tomoqa/metrics.hpp"
#include "tomoqa/noise.hpp"
#include "tomoqa/phantoms.hpp"
#include "tomoqa/rng.hpp"

namespace tomoqa {

namespace {

using Clock = std::chrono::steady_clock;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

ExperimentKind parse_experiment_kind(const std::string& name) {
    if (name == "size_sweep") return ExperimentKind::SizeSweep;
    if (name == "noise_eval") return ExperimentKind::NoiseEval;
    if (name == "underdetermined") return ExperimentKind::Underdetermined;
    throw std::runtime_error("unknown experiment kind: " + name);
}

std::string experiment_kind_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::SizeSweep: return "size_sweep";
        case ExperimentKind::NoiseEval: return "noise_eval";
        case ExperimentKind::Underdetermined: return "underdetermined";
    }
    return "unknown";
}

Method parse_method(const std::string& name) {
    if (name == "qa") return Method::Qa;
    if (name == "hybrid") return Method::Hybrid;
    if (name == "fbp") return Method::Fbp;
    if (name == "sart") return Method::Sart;
    if (name == "pinv") return Method::Pinv;
    throw std::runtime_error("unknown method: " + name);
}

std::string method_name(Method method) {
    switch (method) {
        case Method::Qa: return "qa";
        case Method::Hybrid: return "hybrid";
        case Method::Fbp: return "fbp";
        case Method::Sart: return "sart";
        case Method::Pinv: return "pinv";
    }
    return "unknown";
}

Image PhantomSpec::realize(int size) const {
    if (spec.rfind("glyph:", 0) == 0) {
        const Image glyph = digit_glyph(std::stoi(spec.substr(6)));
        if (size != glyph.side)
            throw std::runtime_error("digit glyphs are 8x8; requested size " + std::to_string(size));
        return glyph;
    }
    if (spec.rfind("digits:", 0) == 0) {
        const auto last_colon = spec.rfind(':');
        if (last_colon == 6) throw std::runtime_error("digits spec needs 'digits:<path>:<row>'");
        const std::string path = spec.substr(7, last_colon - 7);
        const int row = std::stoi(spec.substr(last_colon + 1));
        const Image img = load_digits_csv(path, row);
        if (size != img.side)
            throw std::runtime_error("digits rows are 8x8; requested size " + std::to_string(size));
        return img;
    }
    return generate_phantom(parse_phantom_kind(spec), size);
}

int PhantomSpec::bits() const {
    if (spec.rfind("glyph:", 0) == 0 || spec.rfind("digits:", 0) == 0) return 4;
    return parse_phantom_kind(spec) == PhantomKind::SheppLogan ? 4 : 1;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": invalid JSON: " + e.what());
    }

    ExperimentConfig config;
    try {
        config.kind = parse_experiment_kind(j.at("experiment").get<std::string>());
        for (const auto& p : j.at("phantoms")) config.phantoms.push_back({p.get<std::string>()});
        config.sizes = j.at("sizes").get<std::vector<int>>();
        if (j.contains("views")) config.views = j.at("views").get<std::vector<int>>();
        for (const auto& m : j.at("methods")) config.methods.push_back(parse_method(m.get<std::string>()));
        config.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        if (j.contains("reads")) config.reads = j.at("reads").get<int>();
        if (j.contains("sweeps")) config.schedule.sweeps = j.at("sweeps").get<int>();
        if (j.contains("beta_start")) config.schedule.beta_start = j.at("beta_start").get<double>();
        if (j.contains("beta_end")) config.schedule.beta_end = j.at("beta_end").get<double>();
        if (j.contains("time_limit")) config.time_limit_s = j.at("time_limit").get<double>();
        if (j.contains("iterations")) config.iterations = j.at("iterations").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }

    if (config.phantoms.empty()) throw std::runtime_error(path + ": phantoms must be non-empty");
    if (config.sizes.empty()) throw std::runtime_error(path + ": sizes must be non-empty");
    if (config.methods.empty()) throw std::runtime_error(path + ": methods must be non-empty");
    if (config.seeds.empty()) throw std::runtime_error(path + ": seeds must be non-empty");
    for (int s : config.sizes)
        if (!is_power_of_two(s) || s < 4 || s > 32)
            throw std::runtime_error(path + ": sizes must be powers of two in [4, 32]");
    if (config.reads < 1) throw std::runtime_error(path + ": reads must be positive");
    return config;
}

namespace {

struct RowTask {
    PhantomSpec phantom;
    int size;
    int views;
    Method method;
    std::uint64_t seed;
    bool noisy;
};

ResultRow run_row(const ExperimentConfig& config, const RowTask& task) {
    const Image gt = task.phantom.realize(task.size);
    const int bits = gt.bit_depth;
    const SystemMatrix m = build_system_matrix(gt.side, angle_set(task.views));
    const Sinogram y = task.noisy ? apply_noise(gt, m, task.views, task.seed)
                                  : project(m, to_doubles(gt));

    const bool deterministic = config.iterations > 0;
    const auto start = Clock::now();
    Image recon;
    switch (task.method) {
        case Method::Qa: {
            if (bits == 1) {
                const QuboModel q = build_binary_qubo(m, y.values);
                const SampleSet samples =
                    simulated_annealing_sample(q, config.reads, config.schedule, task.seed);
                const auto& best = samples.best().assignment;
                recon = make_image(gt.side, 1);
                for (std::size_t i = 0; i < best.size(); ++i) recon.pixels[i] = best[i];
            } else {
                const auto [q, enc] = build_integer_qubo(m, y.values, bits);
                const SampleSet samples =
                    simulated_annealing_sample(q, config.reads, config.schedule, task.seed);
                recon = make_image(gt.side, bits);
                recon.pixels = enc.decode(samples.best().assignment);
            }
            break;
        }
        case Method::Hybrid: {
            HybridOptions opts;
            opts.time_limit_s = config.time_limit_s;
            opts.max_iterations = config.iterations;
            opts.seed = task.seed;
            const HybridResult r = hybrid_cqm_solve(m, y.values, bits, opts);
            recon = make_image(gt.side, bits);
            recon.pixels = r.x;
            break;
        }
        case Method::Fbp:
            recon = discretize(fbp_reconstruct(y, angle_set(task.views), gt.side), bits);
            break;
        case Method::Sart:
            recon = discretize(sart_reconstruct(m, y.values), bits);
            break;
        case Method::Pinv:
            recon = discretize(pinv_reconstruct(m, y.values), bits);
            break;
    }
    const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();

    const Sinogram reprojected = project(m, to_doubles(recon));
    double residual2 = 0.0;
    for (std::size_t i = 0; i < y.values.size(); ++i) {
        const double d = reprojected.values[i] - y.values[i];
        residual2 += d * d;
    }

    ResultRow row;
    row.experiment = experiment_kind_name(config.kind);
    row.phantom = task.phantom.spec;
    row.size = task.size;
    row.views = task.views;
    row.method = method_name(task.method);
    row.seed = task.seed;
    row.noise = task.noisy ? 1 : 0;
    row.rmse = rmse(gt, recon);
    row.ssim = ssim(gt, recon);
    row.residual = std::sqrt(residual2);
    row.wall_time = deterministic ? 0.0 : elapsed;
    return row;
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& config) {
    std::vector<RowTask> tasks;
    for (const PhantomSpec& phantom : config.phantoms) {
        for (int size : config.sizes) {
            std::vector<int> view_list = config.views;
            if (view_list.empty()) view_list.push_back(size);
            for (int views : view_list) {
                for (const Method method : config.methods) {
                    for (const std::uint64_t seed : config.seeds) {
                        if (config.kind == ExperimentKind::NoiseEval) {
                            tasks.push_back({phantom, size, views, method, seed, false});
                            tasks.push_back({phantom, size, views, method, seed, true});
                        } else {
                            tasks.push_back({phantom, size, views, method, seed, false});
                        }
                    }
                }
            }
        }
    }

    RunReport report;
    for (const RowTask& task : tasks) {
        try {
            report.table.rows.push_back(run_row(config, task));
        } catch (const std::exception& e) {
            report.errors.push_back(task.phantom.spec + " size=" + std::to_string(task.size) +
                                    " views=" + std::to_string(task.views) + " method=" +
                                    method_name(task.method) + " seed=" + std::to_string(task.seed) +
                                    ": " + e.what());
        }
    }
    return report;
}

}  // namespace tomoqa
