#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hicon/harness.hpp"
#include "hicon/parallel.hpp"

namespace {

std::string default_out_dir() {
    const char* env = std::getenv("HICON_OUT");
    return env ? env : "";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"high-contrast finite-elasticity homogenization lab"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = default_out_dir();
    long long seed = -1;
    int threads = 0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("config", config_path, "experiment config file")->required();
        cmd->add_option("--seed", seed, "override the master seed");
        cmd->add_option("--out", out_dir, "output directory (default HICON_OUT or config)");
        cmd->add_option("--threads", threads, "OpenMP thread count (0 = runtime default)");
    };

    CLI::App* run = app.add_subcommand("run", "full epsilon sweep with reports");
    CLI::App* cell = app.add_subcommand("cell", "effective tensor only");
    CLI::App* check = app.add_subcommand("check", "invariant suites");
    add_common(run);
    add_common(cell);
    add_common(check);

    CLI11_PARSE(app, argc, argv);

    try {
        hicon::ExperimentConfig cfg = hicon::parse_config_file(config_path);
        if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (threads > 0) hicon::par::set_thread_count(threads);

        if (run->parsed()) {
            const hicon::ConvergenceReport report = hicon::run_experiment(cfg);
            hicon::emit_outputs(report, cfg, cfg.out_dir);
            std::printf("m0 = %.12g\n", report.m0);
            for (const auto& r : report.rows)
                std::printf("eps = %-10.6g scaled_infimum = %-14.8g gap = %-12.6g %s\n", r.eps,
                            r.scaled_infimum, r.gap_to_limit, r.status.c_str());
            std::printf("outputs written to %s\n", cfg.out_dir.c_str());
        } else if (cell->parsed()) {
            const hicon::QuadForm q = hicon::run_cell(cfg);
            std::fputs(hicon::format_tensor_csv(q).c_str(), stdout);
        } else if (check->parsed()) {
            const int failures = hicon::run_check_suite(cfg, std::cout);
            if (failures > 0) {
                std::printf("%d check(s) failed\n", failures);
                return 1;
            }
            std::printf("all checks passed\n");
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
