#include "wildlab/admissibility.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wildlab/errors.hpp"
#include "wildlab/norms.hpp"
#include "wildlab/reduce.hpp"

namespace wildlab {

namespace {

void require_law_covers(const PressureLaw& law, const ScalarField& rho) {
    law.potential(min_value(rho));
    law.potential(max_value(rho));
}

// sup_x [ L div u~ + V |G| ] with V = sqrt(|m~|^2 + 2 rho~ L) + |m~| and
// G = grad[(1/2 |m~|^2/rho~ + P + p)/rho~] + L grad(1/rho~).
double worst_case_sup(const FlowState& s, const PressureLaw& law, double L,
                      SpectralWorkspace& ws) {
    require_law_covers(law, s.rho);
    const TorusGrid& g = s.grid();
    const auto& p_fn = law.p_fn();
    const auto& pot_fn = law.potential_fn();

    ScalarField q(g), inv_rho(g);
    par::parallel_for(g.points(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const double r = s.rho[i];
            const double ir = 1.0 / r;
            q[i] = (0.5 * s.m.magnitude_sq_at(i) * ir + pot_fn(r) + p_fn(r)) * ir;
            inv_rho[i] = ir;
        }
    });
    const ScalarField divu = ws.divergence(s.velocity());
    const VectorField g0 = ws.grad(q);
    const VectorField g1 = ws.grad(inv_rho);

    return det::max_map(g.points(), [&](std::size_t i) {
        double gsq = 0.0;
        for (int a = 0; a < g.d; ++a) {
            const double ga = g0.at(i, a) + L * g1.at(i, a);
            gsq += ga * ga;
        }
        const double mmag = s.m.magnitude_at(i);
        const double v_bound = std::sqrt(s.m.magnitude_sq_at(i) + 2.0 * s.rho[i] * L) + mmag;
        return L * divu[i] + v_bound * std::sqrt(gsq);
    });
}

void require_cadence(const AnsatzFields& ans, const SmoothSolution& sol) {
    if (ans.times.size() != sol.snaps.size())
        throw config_error("ansatz cadence does not match the trajectory");
    for (std::size_t j = 0; j < ans.times.size(); ++j)
        if (ans.times[j] != sol.snaps[j].time)
            throw config_error("ansatz cadence does not match the trajectory");
}

EnergyWindow solve_window(const std::vector<double>& ts,
                          const std::function<double(double)>& sup_term,
                          const EnergyProfile& prof) {
    EnergyWindow win;
    win.eps = prof.eps();
    win.horizon = ts.back();

    const auto m_of = [&](double t) { return prof.dlambda(t) + sup_term(t); };
    for (double t : ts) {
        const double sup = sup_term(t);
        win.residual_curve.push_back({t, sup, prof.dlambda(t) + sup});
    }
    if (win.residual_curve.front().m > 0.0) {
        win.empty = true;
        win.T_w = 0.0;
        win.note = "worst-case residual positive already at t = 0; decrease the profile eps";
        return win;
    }
    std::size_t cross = ts.size();
    for (std::size_t k = 1; k < ts.size(); ++k)
        if (win.residual_curve[k].m > 0.0) {
            cross = k;
            break;
        }
    if (cross == ts.size()) {
        win.T_w = win.horizon;
        win.note = "worst-case residual nonpositive on the whole horizon";
        return win;
    }
    double lo = ts[cross - 1];
    double hi = ts[cross];
    for (int it = 0; it < 200 && (hi - lo) > 1e-9; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (m_of(mid) > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    win.T_w = lo;
    const double sup = sup_term(lo);
    win.residual_curve.push_back({lo, sup, prof.dlambda(lo) + sup});
    std::sort(win.residual_curve.begin(), win.residual_curve.end(),
              [](const WindowSample& a, const WindowSample& b) { return a.t < b.t; });
    std::ostringstream note;
    note << "worst-case residual crosses zero near t = " << hi;
    win.note = note.str();
    return win;
}

}  // namespace

ScalarField energy_residual(double t, const VectorField& v, const SmoothSolution& sol,
                            const PressureLaw& law, const EnergyProfile& prof,
                            SpectralWorkspace& ws) {
    const FlowState s = sol.interpolate(t);
    require_same_grid(v.grid(), s.grid(), "energy_residual");
    const double div_v = linf_norm(ws.divergence(v));
    if (div_v > 1e-8) throw config_error("energy residual requires a divergence-free candidate");
    require_law_covers(law, s.rho);

    const TorusGrid& g = s.grid();
    const double L = prof.lambda(t);
    const double dL = prof.dlambda(t);
    const auto& p_fn = law.p_fn();
    const auto& pot_fn = law.potential_fn();

    ScalarField q(g), inv_rho(g);
    par::parallel_for(g.points(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const double r = s.rho[i];
            const double ir = 1.0 / r;
            q[i] = (0.5 * s.m.magnitude_sq_at(i) * ir + pot_fn(r) + p_fn(r)) * ir;
            inv_rho[i] = ir;
        }
    });
    const ScalarField divu = ws.divergence(s.velocity());
    const VectorField g0 = ws.grad(q);
    const VectorField g1 = ws.grad(inv_rho);

    ScalarField r_out(g);
    par::parallel_for(g.points(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            double gv = 0.0;
            for (int a = 0; a < g.d; ++a) gv += (g0.at(i, a) + L * g1.at(i, a)) * v.at(i, a);
            r_out[i] = dL + L * divu[i] + gv;
        }
    });
    return r_out;
}

std::vector<ScalarField> velocity_bound(const AnsatzFields& ans, const SmoothSolution& sol) {
    require_cadence(ans, sol);
    std::vector<ScalarField> out;
    out.reserve(sol.snaps.size());
    for (std::size_t j = 0; j < sol.snaps.size(); ++j) {
        const FlowState& s = sol.snaps[j];
        const ScalarField& e = ans.e[j];
        ScalarField v(s.grid());
        par::parallel_for(v.size(), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i)
                v[i] = std::sqrt(2.0 * s.rho[i] * e[i]) + s.m.magnitude_at(i);
        });
        out.push_back(std::move(v));
    }
    return out;
}

EnergyWindow wild_window(const SmoothSolution& sol, const AnsatzFields& ans,
                         const PressureLaw& law, const EnergyProfile& prof,
                         SpectralWorkspace& ws) {
    require_cadence(ans, sol);
    if (sol.snaps.size() < 2)
        throw config_error("wild window needs a trajectory with at least two snapshots");
    require_same_grid(sol.snaps.front().grid(), ws.grid(), "wild_window");

    const auto sup_term = [&](double t) {
        const FlowState s = sol.interpolate(t);
        return worst_case_sup(s, law, prof.lambda(t), ws);
    };
    EnergyWindow win = solve_window(sol.times(), sup_term, prof);

    const FlowState& s0 = sol.snaps.front();
    const double L0 = prof.lambda(0.0);
    ScalarField v0(s0.grid());
    par::parallel_for(v0.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            v0[i] = std::sqrt(s0.m.magnitude_sq_at(i) + 2.0 * s0.rho[i] * L0) +
                    s0.m.magnitude_at(i);
    });
    win.v_bound0 = std::move(v0);
    return win;
}

EnergyWindow wild_window_from_curve(const std::function<double(double)>& sup_term,
                                    const EnergyProfile& prof, double horizon, int samples) {
    if (!(horizon > 0.0)) throw config_error("window horizon must be positive");
    if (samples < 2) throw config_error("window needs at least two samples");
    std::vector<double> ts(samples);
    for (int k = 0; k < samples; ++k) ts[k] = horizon * k / (samples - 1);
    ts.back() = horizon;
    return solve_window(ts, sup_term, prof);
}

double choose_lambda0(double target_eps, const ScalarField& rho0) {
    if (!(target_eps > 0.0)) throw config_error("target eps must be positive");
    const double mass = integral(rho0);
    if (!(mass > 0.0)) throw config_error("initial density must have positive mass");
    return target_eps * target_eps / (2.0 * mass);
}

BudgetReport wave_budget(const SmoothSolution& sol, const EnergyProfile& prof, double target_eps,
                         const PlaneWaveSpec& shape, const std::vector<int>& harmonics,
                         const Envelope& env, double tau_fraction) {
    if (!(target_eps > 0.0)) throw config_error("target eps must be positive");
    if (harmonics.empty()) throw config_error("budget needs at least one harmonic");
    if (!(tau_fraction > 0.0 && tau_fraction < 1.0))
        throw config_error("match time fraction must lie in (0,1)");

    const TorusGrid& g = sol.snaps.front().grid();
    const double T = sol.t_reached;
    const double tau = tau_fraction * T;
    const FlowState s = sol.interpolate(tau);
    const double L = prof.lambda(tau);
    const double vol = g.volume();
    const double cell = g.cell_volume();

    BudgetReport rep;
    rep.target_eps = target_eps;
    rep.lambda0 = prof.lambda(0.0);
    rep.predicted_l2 = std::sqrt(2.0 * rep.lambda0 * integral(sol.snaps.front().rho));
    rep.tau = tau;

    std::vector<int> ns = harmonics;
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

    for (int n : ns) {
        PlaneWaveSpec spec = shape;
        spec.harmonic = n;
        spec.amplitude = 1.0;
        const auto cand = SubsolutionCandidate::plane_wave(g, T, spec, env);
        const VectorField v1 = cand.v_at(tau);
        if (linf_norm(v1) == 0.0)
            throw config_error("envelope vanishes at the budget match time");

        const double q2 = 0.5 * cell * det::sum_map(g.points(), [&](std::size_t i) {
            return v1.magnitude_sq_at(i) / s.rho[i];
        });
        const double q1 = cell * det::sum_map(g.points(), [&](std::size_t i) {
            double dot = 0.0;
            for (int a = 0; a < g.d; ++a) dot += v1.at(i, a) * s.m.at(i, a);
            return dot / s.rho[i];
        });
        const double q0 = L * vol;
        const double amp = (-q1 + std::sqrt(q1 * q1 + 4.0 * q2 * q0)) / (2.0 * q2);

        BudgetEntry entry;
        entry.harmonic = n;
        entry.amplitude = amp;
        entry.measured_l2 = amp * lp_norm(v1, 2.0);
        entry.pass = entry.measured_l2 <= target_eps;
        rep.entries.push_back(entry);
    }

    std::size_t first_of_suffix = rep.entries.size();
    for (std::size_t j = rep.entries.size(); j-- > 0;) {
        if (!rep.entries[j].pass) break;
        first_of_suffix = j;
    }
    if (first_of_suffix < rep.entries.size()) {
        rep.found = true;
        rep.n0 = rep.entries[first_of_suffix].harmonic;
        std::ostringstream note;
        note << "budget holds for every sampled harmonic N >= " << rep.n0;
        rep.note = note.str();
    } else {
        rep.note = "no sampled harmonic suffix meets the budget";
    }
    return rep;
}

LpCloseness lp_closeness(const FlowState& a, const FlowState& b, double p) {
    require_same_grid(a.grid(), b.grid(), "lp_closeness");
    if (!(p >= 1.0)) throw config_error("lp_closeness needs p >= 1");
    if (!(min_value(a.rho) > 0.0 && min_value(b.rho) > 0.0))
        throw numeric_error("lp_closeness needs positive densities");

    const TorusGrid& g = a.grid();
    ScalarField drho(g);
    VectorField du(g);
    par::parallel_for(g.points(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            drho[i] = a.rho[i] - b.rho[i];
            for (int c = 0; c < g.d; ++c)
                du.at(i, c) = a.m.at(i, c) / a.rho[i] - b.m.at(i, c) / b.rho[i];
        }
    });

    LpCloseness out;
    out.p = p;
    const double l2r = lp_norm(drho, 2.0);
    const double l2u = lp_norm(du, 2.0);
    if (p == 2.0) {
        out.rho_dist = l2r;
        out.u_dist = l2u;
        out.rho_direct = l2r;
        out.u_direct = l2u;
        out.route = "direct L2";
    } else if (p > 2.0) {
        const double e_inf = 1.0 - 2.0 / p;
        const double e_l2 = 2.0 / p;
        out.rho_dist = std::pow(linf_norm(drho), e_inf) * std::pow(l2r, e_l2);
        out.u_dist = std::pow(linf_norm(du), e_inf) * std::pow(l2u, e_l2);
        out.rho_direct = lp_norm(drho, p);
        out.u_direct = lp_norm(du, p);
        out.route = "interpolation via Linf and L2";
    } else {
        const double factor = std::pow(g.volume(), 1.0 / p - 0.5);
        out.rho_dist = l2r * factor;
        out.u_dist = l2u * factor;
        out.rho_direct = lp_norm(drho, p);
        out.u_direct = lp_norm(du, p);
        out.route = "Holder from L2";
    }
    return out;
}

}  // namespace wildlab
