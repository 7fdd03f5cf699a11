// Command-line runner for the Euler-scheme experiments: configuration-driven
// tables and plots, reproducible from (config, master_seed).

#include <chrono>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "fraceuler/experiments.hpp"
#include "fraceuler/mc.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitToleranceNotMet = 2;

int emit_outcome(const fraceuler::ExperimentConfig& cfg,
                 const fraceuler::ExperimentOutcome& outcome, double wall_seconds) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.output_dir);
    const fs::path base = fs::path(cfg.output_dir) / cfg.experiment;
    fraceuler::emit_csv(outcome.table, (base.string() + ".csv"));
    std::cout << "wrote " << base.string() << ".csv\n";
    if (outcome.plot) {
        fraceuler::emit_svg(outcome.table, *outcome.plot, base.string() + ".svg");
        std::cout << "wrote " << base.string() << ".svg\n";
    }
    std::cout << outcome.summary << "\n";
    std::cout << "config_hash=" << outcome.table.metadata.config_hash
              << " seed=" << outcome.table.metadata.seed << " wall_time=" << wall_seconds
              << "s\n";
    if (!outcome.tolerance_ok) {
        std::cout << "tolerance check FAILED\n";
        return kExitToleranceNotMet;
    }
    return kExitOk;
}

int run_config(const fraceuler::ExperimentConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    fraceuler::ExperimentOutcome outcome = fraceuler::run_experiment(config);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    outcome.table.metadata.wall_time_seconds = wall;
    return emit_outcome(config, outcome, wall);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Euler schemes for SDEs driven by fractional Brownian motion"};
    app.set_help_flag("--help", "print help");  // keep `--h` free for the Hurst parameter
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::uint64_t seed_override = 0;
    bool seed_given = false;
    int threads = 0;

    auto* run = app.add_subcommand("run", "run an experiment from a config file");
    run->add_option("config", config_path, "flat key=value config file")->required();
    run->add_option("--out", out_dir, "output directory override");
    run->add_option("--seed", seed_override, "master seed override")
        ->each([&](const std::string&) { seed_given = true; });
    run->add_option("--threads", threads, "worker threads (fallback: FRACEULER_THREADS)");

    double h_value = 0.0, t_horizon = 1.0, tolerance = 1e-4;
    std::int64_t p_trunc = 512;
    auto* constants = app.add_subcommand("constants", "compute limit constants for one H");
    constants->set_help_flag("--help", "print help");
    constants->add_option("--h", h_value, "Hurst parameter")->required();
    constants->add_option("--t", t_horizon, "time horizon T");
    constants->add_option("--P", p_trunc, "lag truncation");
    constants->add_option("--tolerance", tolerance, "tail tolerance in q-units");
    constants->add_option("--out", out_dir, "also write CSV to this directory");
    constants->add_option("--threads", threads, "worker threads");

    CLI11_PARSE(app, argc, argv);

    try {
        fraceuler::set_thread_count(fraceuler::resolve_thread_count(threads));
        if (run->parsed()) {
            fraceuler::ExperimentConfig config = fraceuler::load_config(config_path);
            if (!out_dir.empty()) config.output_dir = out_dir;
            if (seed_given) config.master_seed = seed_override;
            if (config.threads > 0 && threads == 0)
                fraceuler::set_thread_count(config.threads);
            return run_config(config);
        }
        // constants quick mode
        fraceuler::ExperimentConfig config;
        config.experiment = "constants";
        config.h = h_value;
        config.t_horizon = t_horizon;
        config.p_truncation = p_trunc;
        config.tolerance = tolerance;
        fraceuler::validate_config(config);
        const auto start = std::chrono::steady_clock::now();
        const fraceuler::ExperimentOutcome outcome = fraceuler::run_constants(config);
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << outcome.summary;
        if (!out_dir.empty()) {
            config.output_dir = out_dir;
            return emit_outcome(config, outcome, wall);
        }
        std::cout << "wall_time=" << wall << "s\n";
        return kExitOk;
    } catch (const fraceuler::ToleranceError& err) {
        std::cerr << "tolerance not met: " << err.what() << "\n";
        return kExitToleranceNotMet;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitError;
    }
}
