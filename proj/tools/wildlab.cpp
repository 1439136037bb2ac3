#include <chrono>
#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "wildlab/errors.hpp"
#include "wildlab/pipeline.hpp"
#include "wildlab/reduce.hpp"

namespace {

void write_timings(const wildlab::RunPaths& paths, const std::string& command, int threads,
                   double seconds) {
    wildlab::ordered_json j;
    j["command"] = command;
    j["threads"] = threads;
    j["wall_seconds"] = seconds;
    wildlab::write_json(paths.timings_file(), j);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for wild initial data of the barotropic Euler system"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_root = "runs";
    std::string run_dir;
    std::uint64_t seed = 0;
    int threads = 1;
    bool quiet = false;
    bool strict = false;
    bool dump_fields = false;

    app.add_option("--out", out_root, "root directory for run outputs")->capture_default_str();
    auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
    app.add_option("--threads", threads, "worker threads for field loops")
        ->check(CLI::Range(1, 1024))
        ->capture_default_str();
    app.add_flag("--quiet", quiet, "suppress informational output");
    app.add_flag("--strict", strict, "exit 4 when a certified candidate fails");

    auto add_config = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "experiment config file")
            ->required()
            ->check(CLI::ExistingFile);
    };
    CLI::App* c_solve = app.add_subcommand("solve", "integrate the smooth trajectory");
    add_config(c_solve);
    CLI::App* c_certify = app.add_subcommand("certify", "certify subsolution candidates");
    add_config(c_certify);
    c_certify->add_flag("--dump-fields", dump_fields, "write margin fields as WEF1 snapshots");
    CLI::App* c_window = app.add_subcommand("window", "compute the admissibility horizon");
    add_config(c_window);
    CLI::App* c_budget = app.add_subcommand("budget", "kinetic-energy budget for wave data");
    add_config(c_budget);
    CLI::App* c_report = app.add_subcommand("report", "render a run directory as text");
    c_report->add_option("run_dir", run_dir, "run directory")->required();
    // let the top-level options (--out, --threads, ...) appear after the subcommand
    for (CLI::App* sub : {c_solve, c_certify, c_window, c_budget, c_report})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    }

    try {
        wildlab::par::set_threads(threads);

        if (c_report->parsed()) {
            std::cout << wildlab::render_report(run_dir);
            return 0;
        }

        wildlab::ExperimentConfig cfg = wildlab::ExperimentConfig::load(config_path);
        if (seed_opt->count() > 0) cfg.seed = seed;
        const wildlab::RunPaths paths = wildlab::prepare_run_dir(cfg, out_root);
        if (!quiet) std::cout << "run directory: " << paths.dir.string() << "\n";
        const auto t0 = std::chrono::steady_clock::now();
        const auto elapsed = [&] {
            return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        };

        if (c_solve->parsed()) {
            const wildlab::SmoothSolution sol = wildlab::run_solve(cfg, paths);
            write_timings(paths, "solve", threads, elapsed());
            if (!quiet)
                std::cout << "t_reached = " << sol.t_reached << " in " << sol.steps
                          << " steps (" << wildlab::stop_reason_name(sol.reason) << ")\n";
            if (sol.blowup) {
                std::cerr << "error: numeric: trajectory stopped early ("
                          << wildlab::stop_reason_name(sol.reason) << ") at t = " << sol.t_reached
                          << "\n";
                return 3;
            }
        } else if (c_certify->parsed()) {
            const bool ok = wildlab::run_certify(cfg, paths, dump_fields);
            write_timings(paths, "certify", threads, elapsed());
            if (!quiet) std::cout << "certification: " << (ok ? "pass" : "fail") << "\n";
            if (!ok && strict) {
                std::cerr << "error: certification: a candidate failed the margin check\n";
                return 4;
            }
        } else if (c_window->parsed()) {
            const wildlab::EnergyWindow win = wildlab::run_window(cfg, paths);
            write_timings(paths, "window", threads, elapsed());
            if (!quiet)
                std::cout << "T_w = " << win.T_w << (win.empty ? " (empty window)" : "") << "\n";
        } else if (c_budget->parsed()) {
            const wildlab::BudgetReport rep = wildlab::run_budget(cfg, paths);
            write_timings(paths, "budget", threads, elapsed());
            if (!quiet)
                std::cout << "lambda0 = " << rep.lambda0 << ", N0 = " << rep.n0
                          << (rep.found ? "" : " (no passing suffix)") << "\n";
        }
        return 0;
    } catch (const wildlab::config_error& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    } catch (const wildlab::io_error& e) {
        std::cerr << "error: io: " << e.what() << "\n";
        return 2;
    } catch (const wildlab::numeric_error& e) {
        std::cerr << "error: numeric: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 3;
    }
}
