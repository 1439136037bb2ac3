#include "wildlab/ansatz.hpp"

#include <cmath>

#include "wildlab/errors.hpp"
#include "wildlab/norms.hpp"
#include "wildlab/reduce.hpp"

namespace wildlab {

SymTensorField build_H(const FlowState& state) {
    const TorusGrid& g = state.grid();
    const int d = g.d;
    SymTensorField H(g, /*traceless=*/true);
    par::parallel_for(g.points(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const double inv_rho = 1.0 / state.rho[i];
            const double trace_part = state.m.magnitude_sq_at(i) * inv_rho / d;
            for (int a = 0; a < d; ++a)
                for (int b = a; b < d; ++b) {
                    double v = state.m.at(i, a) * state.m.at(i, b) * inv_rho;
                    if (a == b) v -= trace_part;
                    H.at(i, a, b) = v;
                }
        }
    });
    return H;
}

ScalarField build_e(const FlowState& state, const EnergyProfile& prof, double t) {
    const double lam = prof.lambda(t);
    if (!(lam > 0.0))
        throw config_error("energy profile must be positive at t = " + std::to_string(t));
    ScalarField e(state.grid());
    par::parallel_for(e.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            e[i] = 0.5 * state.m.magnitude_sq_at(i) / state.rho[i] + lam;
    });
    return e;
}

AnsatzFields AnsatzFields::build(const SmoothSolution& sol, const EnergyProfile& prof) {
    if (sol.snaps.empty()) throw config_error("ansatz needs a nonempty trajectory");
    prof.verify(sol.t_reached > 0.0 ? sol.t_reached : 1.0);
    AnsatzFields out;
    out.profile = prof;
    out.times = sol.times();
    out.H.reserve(sol.snaps.size());
    out.e.reserve(sol.snaps.size());
    for (const auto& s : sol.snaps) {
        out.H.push_back(build_H(s));
        out.e.push_back(build_e(s, prof, s.time));
    }
    return out;
}

ReformulationCheck reformulation_gap(const VectorField& v, const FlowState& state,
                                     const EnergyProfile& prof, double t,
                                     SpectralWorkspace& ws) {
    const TorusGrid& g = state.grid();
    require_same_grid(v.grid(), g, "reformulation_gap");
    const int d = g.d;
    const double lam = prof.lambda(t);

    ScalarField s(g);
    ScalarField dev(g);
    par::parallel_for(g.points(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            double w2 = 0.0;
            for (int c = 0; c < d; ++c) {
                const double w = v.at(i, c) + state.m.at(i, c);
                w2 += w * w;
            }
            const double m2 = state.m.magnitude_sq_at(i);
            s[i] = (w2 - m2) / state.rho[i];
            dev[i] = std::abs(0.5 * w2 / state.rho[i] - (0.5 * m2 / state.rho[i] + lam));
        }
    });

    ReformulationCheck out;
    const VectorField grad_s = ws.grad(s);
    out.gap = linf_norm(grad_s) / d;
    out.constraint_deviation = max_value(dev);
    out.div_v = linf_norm(ws.divergence(v));
    return out;
}

}  // namespace wildlab
