#pragma once

#include <functional>
#include <string>
#include <vector>

#include "wildlab/ansatz.hpp"
#include "wildlab/pressure.hpp"
#include "wildlab/solver.hpp"
#include "wildlab/spectral.hpp"
#include "wildlab/subsolution.hpp"

namespace wildlab {

// Pointwise energy-inequality residual for a divergence-free candidate v:
//   R(t,x) = L'(t) + L(t) div u~ + G . v,
//   G = grad[(1/2 |m~|^2/rho~ + P(rho~) + p(rho~)) / rho~] + L(t) grad(1/rho~).
// The state is the trajectory interpolated at t. Rejects candidates whose
// spectral divergence exceeds 1e-8.
ScalarField energy_residual(double t, const VectorField& v, const SmoothSolution& sol,
                            const PressureLaw& law, const EnergyProfile& prof,
                            SpectralWorkspace& ws);

// Pointwise speed bound V = sqrt(2 rho~ e) + |m~| per snapshot: any field with
// kinetic energy dominated by e satisfies |v + m~| <= sqrt(2 rho~ e).
std::vector<ScalarField> velocity_bound(const AnsatzFields& ans, const SmoothSolution& sol);

struct WindowSample {
    double t = 0.0;
    double sup_term = 0.0;  // sup_x [ L div u~ + V |G| ]
    double m = 0.0;         // L'(t) + sup_term
};

struct EnergyWindow {
    double T_w = 0.0;
    double eps = 0.0;  // profile parameter, 0 for non-exponential profiles
    double horizon = 0.0;
    bool empty = false;  // worst-case residual already positive at t = 0
    std::vector<WindowSample> residual_curve;
    ScalarField v_bound0;  // speed bound V(0,.) that entered the pessimization
    std::string note;
};

// Worst-case admissibility horizon: M(t) = L'(t) + sup_x[L div u~ + V |G|]
// pessimizes the residual over every |v| <= V at once. T_w is the largest
// prefix of [0, horizon] with M <= 0, refined by bisection at the first sign
// change; fields at off-snapshot times come from linear interpolation of the
// trajectory.
EnergyWindow wild_window(const SmoothSolution& sol, const AnsatzFields& ans,
                         const PressureLaw& law, const EnergyProfile& prof,
                         SpectralWorkspace& ws);

// Same root finding on a user-supplied curve t -> sup_term(t); used to check
// the solver-backed path against closed-form roots.
EnergyWindow wild_window_from_curve(const std::function<double(double)>& sup_term,
                                    const EnergyProfile& prof, double horizon, int samples);

// L(0) = target_eps^2 / (2 integral rho0): at energy-matched times
// |v|^2 = 2 rho~ L - 2 v . m~ pointwise and the cross term vanishes in the
// weak limit, so limsup ||v||_{L2}^2 <= 2 L(0) integral rho0.
double choose_lambda0(double target_eps, const ScalarField& rho0);

struct BudgetEntry {
    int harmonic = 0;
    double amplitude = 0.0;    // energy-matched amplitude at the match time
    double measured_l2 = 0.0;  // ||v(tau)||_{L2} at that amplitude
    bool pass = false;         // measured_l2 <= target_eps
};

struct BudgetReport {
    double target_eps = 0.0;
    double lambda0 = 0.0;       // L(0) of the supplied profile
    double predicted_l2 = 0.0;  // sqrt(2 L(0) integral rho0)
    double tau = 0.0;           // match time
    bool found = false;
    int n0 = 0;  // smallest sampled N from which every larger sampled N passes
    std::vector<BudgetEntry> entries;
    std::string note;
};

// For each harmonic N, pick the amplitude A that matches the kinetic-energy
// budget at tau = tau_fraction * horizon:
//   A^2 q2 + A q1 = q0,  q2 = 1/2 int |v1|^2/rho~,  q1 = int v1 . m~/rho~,
//   q0 = L(tau) |T^d|,   v1 the unit-amplitude enveloped wave at tau,
// then measure ||A v1||_{L2} against target_eps.
BudgetReport wave_budget(const SmoothSolution& sol, const EnergyProfile& prof, double target_eps,
                         const PlaneWaveSpec& shape, const std::vector<int>& harmonics,
                         const Envelope& env, double tau_fraction = 0.5);

struct LpCloseness {
    double p = 2.0;
    double rho_dist = 0.0;  // certified bound on ||rho_a - rho_b||_{Lp}
    double u_dist = 0.0;    // certified bound on ||u_a - u_b||_{Lp}, u = m/rho
    double rho_direct = 0.0;  // direct quadrature of the same norms
    double u_direct = 0.0;
    std::string route;
};

// p = 2 is measured directly; p > 2 transfers the L2 bound through
// ||f||_p <= ||f||_inf^{1-2/p} ||f||_2^{2/p}; 1 <= p < 2 uses Holder
// ||f||_p <= ||f||_2 |T^d|^{1/p - 1/2}. Direct quadrature values are kept as
// diagnostics alongside the certified route.
LpCloseness lp_closeness(const FlowState& a, const FlowState& b, double p);

}  // namespace wildlab
