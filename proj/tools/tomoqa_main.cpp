// tomoqa: tomographic toy problems recast as QUBO/Ising optimization,
// with classical annealing samplers and FBP/SART/pseudoinverse baselines.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "tomoqa/baselines.hpp"
#include "tomoqa/experiment.hpp"
#include "tomoqa/image_io.hpp"
#include "tomoqa/metrics.hpp"
#include "tomoqa/noise.hpp"
#include "tomoqa/phantoms.hpp"
#include "tomoqa/qubo.hpp"
#include "tomoqa/samplers.hpp"

namespace {

using namespace tomoqa;

void save_sinogram_csv(const Sinogram& y, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    char buf[64];
    for (int v = 0; v < y.views; ++v) {
        for (int t = 0; t < y.bins; ++t) {
            if (t) out << ',';
            std::snprintf(buf, sizeof buf, "%.17g", y.values[static_cast<std::size_t>(v) * y.bins + t]);
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

Sinogram load_sinogram_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    Sinogram y;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::string cell;
        int cols = 0;
        while (std::getline(ls, cell, ',')) {
            try {
                y.values.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                         ": non-numeric cell '" + cell + "'");
            }
            ++cols;
        }
        if (y.bins == 0) y.bins = cols;
        if (cols != y.bins)
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": ragged row (" + std::to_string(cols) + " columns)");
        ++y.views;
    }
    if (y.views == 0) throw std::runtime_error(path + ": empty sinogram");
    return y;
}

int run_gen(const std::string& phantom, int size, const std::string& out) {
    const Image img = generate_phantom(parse_phantom_kind(phantom), size);
    save_pgm(img, out);
    return 0;
}

int run_project(const std::string& in, int views, bool has_noise_seed, std::uint64_t noise_seed,
                const std::string& out, const std::string& dump_matrix) {
    const Image img = load_pgm(in);
    const SystemMatrix m = build_system_matrix(img.side, angle_set(views));
    if (!dump_matrix.empty()) save_system_matrix(m, dump_matrix);
    const Sinogram y = has_noise_seed ? apply_noise(img, m, views, noise_seed)
                                      : project(m, to_doubles(img));
    save_sinogram_csv(y, out);
    return 0;
}

int run_recon(const std::string& method, int views, int reads, double time_limit, int iters,
              std::uint64_t seed, int bits, const std::string& in, const std::string& out,
              const std::string& dump_qubo) {
    const Sinogram y = load_sinogram_csv(in);
    if (y.views != views)
        throw std::runtime_error("sinogram has " + std::to_string(y.views) +
                                 " views, --views says " + std::to_string(views));
    const int side = y.bins;
    const SystemMatrix m = build_system_matrix(side, angle_set(views));

    Image recon;
    if (method == "qa") {
        SampleSet samples;
        if (bits == 1) {
            const QuboModel q = build_binary_qubo(m, y.values);
            if (!dump_qubo.empty()) export_qubo(q, dump_qubo);
            samples = simulated_annealing_sample(q, reads, AnnealSchedule{}, seed);
            recon = make_image(side, 1);
            const auto& best = samples.best().assignment;
            for (std::size_t i = 0; i < best.size(); ++i) recon.pixels[i] = best[i];
        } else {
            const auto [q, enc] = build_integer_qubo(m, y.values, bits);
            if (!dump_qubo.empty()) export_qubo(q, dump_qubo);
            samples = simulated_annealing_sample(q, reads, AnnealSchedule{}, seed);
            recon = make_image(side, bits);
            recon.pixels = enc.decode(samples.best().assignment);
        }
    } else if (method == "hybrid") {
        HybridOptions opts;
        opts.time_limit_s = time_limit;
        opts.max_iterations = iters;
        opts.seed = seed;
        const HybridResult r = hybrid_cqm_solve(m, y.values, bits, opts);
        recon = make_image(side, bits);
        recon.pixels = r.x;
    } else if (method == "fbp") {
        recon = discretize(fbp_reconstruct(y, angle_set(views), side), bits);
    } else if (method == "sart") {
        recon = discretize(sart_reconstruct(m, y.values), bits);
    } else if (method == "pinv") {
        recon = discretize(pinv_reconstruct(m, y.values), bits);
    } else {
        throw std::runtime_error("unknown method: " + method);
    }
    save_pgm(recon, out);
    return 0;
}

int run_experiment_cmd(const std::string& config_path, const std::string& out_dir) {
    ExperimentConfig config;
    try {
        config = load_experiment_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }
    const RunReport report = run_experiment(config);
    std::filesystem::create_directories(out_dir);
    if (!report.table.rows.empty()) emit_report(report.table, out_dir);
    if (!report.errors.empty()) {
        std::ofstream log(out_dir + "/errors.log");
        for (const std::string& e : report.errors) {
            log << e << '\n';
            std::cerr << "row failed: " << e << '\n';
        }
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"QUBO/Ising tomographic reconstruction toy problems"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a phantom image");
    std::string gen_phantom, gen_out;
    int gen_size = 8;
    gen->add_option("--phantom", gen_phantom,
                    "shepp_logan | foam | tree | snowflake | molecule")->required();
    gen->add_option("--size", gen_size, "image side N")->required();
    gen->add_option("--out", gen_out, "output PGM path")->required();

    // project
    auto* project_cmd = app.add_subcommand("project", "Project an image to a sinogram CSV");
    std::string proj_in, proj_out, proj_dump;
    int proj_views = 0;
    std::uint64_t proj_noise_seed = 0;
    auto* noise_opt = project_cmd->add_option("--noise-seed", proj_noise_seed,
                                              "apply per-view noise with this seed");
    project_cmd->add_option("--in", proj_in, "input PGM path")->required();
    project_cmd->add_option("--views", proj_views, "number of projection views")->required();
    project_cmd->add_option("--out", proj_out, "output sinogram CSV path")->required();
    project_cmd->add_option("--dump-matrix", proj_dump, "also dump the system matrix to this path");

    // recon
    auto* recon = app.add_subcommand("recon", "Reconstruct an image from a sinogram CSV");
    std::string recon_method, recon_in, recon_out, recon_dump_qubo;
    int recon_views = 0, recon_reads = 100, recon_iters = 0, recon_bits = 1;
    double recon_time_limit = 5.0;
    std::uint64_t recon_seed = 0;
    recon->add_option("--method", recon_method, "qa | hybrid | fbp | sart | pinv")->required();
    recon->add_option("--views", recon_views, "number of projection views")->required();
    recon->add_option("--reads", recon_reads, "annealing reads (qa)");
    recon->add_option("--time-limit", recon_time_limit, "hybrid wall-clock budget in seconds");
    recon->add_option("--iters", recon_iters, "hybrid iteration budget (deterministic mode)");
    recon->add_option("--seed", recon_seed, "solver seed");
    recon->add_option("--bits", recon_bits, "pixel bit depth R of the object");
    recon->add_option("--dump-qubo", recon_dump_qubo, "export the constructed QUBO to this path");
    recon->add_option("--in", recon_in, "input sinogram CSV")->required();
    recon->add_option("--out", recon_out, "output PGM path")->required();

    // experiment
    auto* experiment = app.add_subcommand("experiment", "Run a configured study");
    std::string exp_config, exp_out;
    experiment->add_option("--config", exp_config, "JSON config path")->required();
    experiment->add_option("--out", exp_out, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return run_gen(gen_phantom, gen_size, gen_out);
        if (project_cmd->parsed())
            return run_project(proj_in, proj_views, noise_opt->count() > 0, proj_noise_seed,
                               proj_out, proj_dump);
        if (recon->parsed())
            return run_recon(recon_method, recon_views, recon_reads, recon_time_limit, recon_iters,
                             recon_seed, recon_bits, recon_in, recon_out, recon_dump_qubo);
        if (experiment->parsed()) return run_experiment_cmd(exp_config, exp_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
