#pragma once

#include <string>

#include "wildlab/runio.hpp"

namespace wildlab {

// Experiment drivers shared by the CLI and the acceptance harness. Each
// writes its artifacts into the run directory and patches report.json.

SmoothSolution run_solve(const ExperimentConfig& cfg, const RunPaths& paths);

// Loads the trajectory when the directory already holds one for this solve
// hash, otherwise solves and persists it.
SmoothSolution ensure_solution(const ExperimentConfig& cfg, const RunPaths& paths);

// Zero candidate, fixed-amplitude wave sweep over [wave].harmonics, and the
// optional amplitude search. Returns false when any certified candidate
// fails.
bool run_certify(const ExperimentConfig& cfg, const RunPaths& paths, bool dump_fields = false);

EnergyWindow run_window(const ExperimentConfig& cfg, const RunPaths& paths);

BudgetReport run_budget(const ExperimentConfig& cfg, const RunPaths& paths);

// Renders report.json as aligned text.
std::string render_report(const std::filesystem::path& run_dir);

}  // namespace wildlab
