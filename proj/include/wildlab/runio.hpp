#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "wildlab/admissibility.hpp"
#include "wildlab/config.hpp"
#include "wildlab/solver.hpp"
#include "wildlab/subsolution.hpp"

namespace wildlab {

using ordered_json = nlohmann::ordered_json;

// One run directory per solve configuration, named by the solve hash so
// certify/window/budget invocations with the same trajectory share outputs.
// Everything except timings.json is a pure function of (config, seed) and is
// byte-identical across worker counts.
struct RunPaths {
    std::filesystem::path dir;

    std::filesystem::path config_file() const { return dir / "config.ini"; }
    std::filesystem::path solution_file() const { return dir / "solution.json"; }
    std::filesystem::path solve_curves_file() const { return dir / "solve_curves.csv"; }
    std::filesystem::path report_file() const { return dir / "report.json"; }
    std::filesystem::path timings_file() const { return dir / "timings.json"; }
    std::filesystem::path certification_file() const { return dir / "certification.json"; }
    std::filesystem::path margins_file() const { return dir / "margins.csv"; }
    std::filesystem::path window_file() const { return dir / "window.json"; }
    std::filesystem::path window_curve_file() const { return dir / "window_curve.csv"; }
    std::filesystem::path v_bound_file() const { return dir / "v_bound0.wef"; }
    std::filesystem::path budget_file() const { return dir / "budget.json"; }
    std::filesystem::path snap_file(std::size_t index) const;
};

std::string hash_hex(std::uint64_t h);

// Creates <out_root>/run_<solvehash> and writes the canonical config echo.
RunPaths prepare_run_dir(const ExperimentConfig& cfg, const std::filesystem::path& out_root);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const ordered_json& j);
ordered_json read_json(const std::filesystem::path& path);

// Snapshot series plus solution.json summary and solve_curves.csv
// (t, dt, norm_rho, norm_m per accepted step).
void save_solution(const RunPaths& paths, const ExperimentConfig& cfg, const SmoothSolution& sol);
bool solution_present(const RunPaths& paths, const ExperimentConfig& cfg);
// Rebuilds the snapshot series; per-step histories stay in the CSV and are
// not reloaded (nothing downstream consumes them).
SmoothSolution load_solution(const RunPaths& paths);

ordered_json solution_summary(const ExperimentConfig& cfg, const SmoothSolution& sol);
ordered_json certification_to_json(const CertificationReport& rep);
ordered_json search_to_json(const AmplitudeSearchResult& res);
ordered_json window_to_json(const EnergyWindow& win);
ordered_json budget_to_json(const BudgetReport& rep);
ordered_json closeness_to_json(const LpCloseness& c);

std::string window_curve_csv(const EnergyWindow& win);
std::string margins_csv(const CertificationReport& rep);

// Patches one section of report.json, keeping sections in the canonical
// order (config echo and hashes first, then solve/certification/window/
// budget as available).
void update_report(const RunPaths& paths, const ExperimentConfig& cfg, const std::string& section,
                   const ordered_json& content);

}  // namespace wildlab
