#pragma once

#include <vector>

#include "wildlab/flow_state.hpp"
#include "wildlab/pressure.hpp"
#include "wildlab/spectral.hpp"

namespace wildlab {

struct SolverConfig {
    double cfl = 0.4;
    bool dealias = true;
    int k_monitor = 0;         // 0 selects the smallest integer > d/2 + 1
    double blowup_factor = 1e3;
    double t_end = 1.0;
    int snap_every = 1;        // snapshot cadence in accepted steps
    double dt_fixed = 0.0;     // > 0 overrides the CFL step (convergence studies)
    double tail_threshold = 0.01;
    long max_steps = 2000000;

    void validate(int d) const;
    int effective_k_monitor(int d) const;
};

enum class StopReason {
    reached_t_end,
    norm_growth,
    density_exit,
    tail_energy,
    max_steps,
};
const char* stop_reason_name(StopReason r);

struct SmoothSolution {
    std::vector<FlowState> snaps;    // includes t = 0 and the final state
    std::vector<double> step_times;  // t after each accepted step, starting at 0
    std::vector<double> dt_history;
    std::vector<double> norm_rho;    // W^{k,2} at each entry of step_times
    std::vector<double> norm_m;      // combined momentum components
    int k_monitor = 0;
    double t_reached = 0.0;
    long steps = 0;
    bool blowup = false;
    StopReason reason = StopReason::reached_t_end;
    double mean_rho_drift = 0.0;  // max |mean rho - initial mean| over steps
    double mean_m_drift = 0.0;
    double tail_fraction_max = 0.0;

    std::vector<double> times() const;
    const FlowState& snap_at(double t) const;      // nearest snapshot
    FlowState interpolate(double t) const;         // linear between snapshots
};

// drho/dt = -div m ; dm/dt = -div(m (x) m / rho + p(rho) I), pseudo-spectral
// with optional 2/3-rule masking of the flux divergence. Throws numeric_error
// when the density leaves the validity interval of the law.
void euler_rhs(const FlowState& state, const PressureLaw& law, SpectralWorkspace& ws,
               bool dealias, ScalarField& drho, VectorField& dm);

// Classical RK4 with CFL step dt = cfl * h / max(|u| + sqrt(p'(rho))).
// Stops at t_end or on the blow-up proxy (norm growth, density exit,
// spectral tail pile-up); a truncated run sets blowup and the reason.
SmoothSolution solve_smooth(const FlowState& data, const PressureLaw& law,
                            const SolverConfig& cfg, SpectralWorkspace& ws);

}  // namespace wildlab
