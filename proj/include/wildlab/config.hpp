#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "wildlab/flow_state.hpp"
#include "wildlab/pressure.hpp"
#include "wildlab/profile.hpp"
#include "wildlab/solver.hpp"
#include "wildlab/subsolution.hpp"

namespace wildlab {

// Flat key-value experiment description with [section] headers. Unknown keys
// are rejected; serialize() emits the canonical form and parse(serialize())
// is the identity.
struct ExperimentConfig {
    struct Grid {
        int d = 2;
        int n = 64;
        bool operator==(const Grid&) const = default;
    };
    struct Pressure {
        std::string kind = "gamma_law";  // gamma_law | table
        double coef = 1.0;
        double gamma = 2.0;
        std::string file;  // table: CSV rows "rho,p"
        bool operator==(const Pressure&) const = default;
    };
    struct Initial {
        // constant | acoustic | gaussian_bump | random_low_mode | file
        std::string family = "constant";
        double rho0 = 1.0;
        std::array<double, 3> m0{0.0, 0.0, 0.0};
        double amplitude = 0.0;
        double width = 0.25;                     // gaussian_bump
        std::array<double, 3> center{0.0, 0.0, 0.0};
        int max_mode = 2;                        // random_low_mode
        std::string path;                        // file: WEF1 snapshot
        bool operator==(const Initial&) const = default;
    };
    struct Solver {
        double cfl = 0.4;
        double t_end = 1.0;
        int snap_every = 1;
        int k_monitor = 0;
        bool dealias = true;
        double dt_fixed = 0.0;
        double blowup_factor = 1e3;
        double tail_threshold = 0.01;
        long max_steps = 2000000;
        bool operator==(const Solver&) const = default;
    };
    struct Profile {
        std::string kind = "exponential";  // exponential | table
        double eps = 0.1;
        std::string file;  // table: CSV rows "t,lambda"
        bool operator==(const Profile&) const = default;
    };
    struct Wave {
        std::array<int, 3> xi{1, 0, 0};
        std::array<double, 3> a_dir{0.0, 1.0, 0.0};
        std::vector<int> harmonics{2, 4, 8};
        double amplitude = 0.0;  // 0: certify only the searched amplitudes
        std::string envelope = "sin_squared";
        bool search = true;
        double margin_fraction = 0.5;
        bool operator==(const Wave&) const = default;
    };
    struct Budget {
        double target_eps = 0.1;
        double p = 2.0;
        double tau_fraction = 0.5;
        bool operator==(const Budget&) const = default;
    };

    std::uint64_t seed = 0;
    Grid grid;
    Pressure pressure;
    Initial initial;
    Solver solver;
    Profile profile;
    Wave wave;
    Budget budget;

    bool operator==(const ExperimentConfig&) const = default;

    static ExperimentConfig parse(const std::string& text);
    static ExperimentConfig load(const std::filesystem::path& file);
    std::string serialize() const;
    void save(const std::filesystem::path& file) const;

    void validate() const;

    // FNV-1a over the canonical text of the trajectory-relevant sections
    // (seed, grid, pressure, initial, solver); names the run directory so
    // certify/window/budget reuse solve outputs.
    std::uint64_t solve_hash() const;
    std::uint64_t full_hash() const;  // over the whole canonical text
};

TorusGrid make_grid(const ExperimentConfig& cfg);
PressureLaw make_pressure(const ExperimentConfig& cfg);
FlowState make_initial(const ExperimentConfig& cfg);
SolverConfig make_solver(const ExperimentConfig& cfg);
EnergyProfile make_profile(const ExperimentConfig& cfg);
Envelope make_envelope(const ExperimentConfig& cfg, double horizon);

}  // namespace wildlab
