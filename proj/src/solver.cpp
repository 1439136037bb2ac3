#include "wildlab/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "wildlab/errors.hpp"
#include "wildlab/reduce.hpp"

namespace wildlab {

void SolverConfig::validate(int d) const {
    if (!(cfl > 0.0 && cfl <= 1.0)) throw config_error("cfl must be in (0,1]");
    if (!(t_end > 0.0)) throw config_error("t_end must be positive");
    if (snap_every < 1) throw config_error("snap_every must be >= 1");
    if (!(blowup_factor > 1.0)) throw config_error("blowup_factor must exceed 1");
    if (dt_fixed < 0.0) throw config_error("dt_fixed must be nonnegative");
    if (!(tail_threshold > 0.0)) throw config_error("tail_threshold must be positive");
    if (max_steps < 1) throw config_error("max_steps must be >= 1");
    if (k_monitor != 0 && 2 * k_monitor <= d + 2)
        throw config_error("k_monitor must exceed d/2 + 1");
}

int SolverConfig::effective_k_monitor(int d) const {
    if (k_monitor != 0) return k_monitor;
    int k = 0;
    while (2 * k <= d + 2) ++k;
    return k;
}

const char* stop_reason_name(StopReason r) {
    switch (r) {
        case StopReason::reached_t_end: return "reached_t_end";
        case StopReason::norm_growth: return "norm_growth";
        case StopReason::density_exit: return "density_exit";
        case StopReason::tail_energy: return "tail_energy";
        case StopReason::max_steps: return "max_steps";
    }
    return "unknown";
}

std::vector<double> SmoothSolution::times() const {
    std::vector<double> out;
    out.reserve(snaps.size());
    for (const auto& s : snaps) out.push_back(s.time);
    return out;
}

const FlowState& SmoothSolution::snap_at(double t) const {
    if (snaps.empty()) throw numeric_error("empty trajectory");
    std::size_t best = 0;
    double dist = std::abs(snaps[0].time - t);
    for (std::size_t i = 1; i < snaps.size(); ++i) {
        const double di = std::abs(snaps[i].time - t);
        if (di < dist) {
            dist = di;
            best = i;
        }
    }
    return snaps[best];
}

FlowState SmoothSolution::interpolate(double t) const {
    if (snaps.empty()) throw numeric_error("empty trajectory");
    if (t <= snaps.front().time) return snaps.front();
    if (t >= snaps.back().time) return snaps.back();
    std::size_t hi = 1;
    while (snaps[hi].time < t) ++hi;
    const FlowState& a = snaps[hi - 1];
    const FlowState& b = snaps[hi];
    const double span = b.time - a.time;
    const double w = span > 0.0 ? (t - a.time) / span : 0.0;
    FlowState out(a.rho, a.m, t);
    const int d = out.grid().d;
    par::parallel_for(out.rho.size(), [&](std::size_t lo, std::size_t hi_i) {
        for (std::size_t i = lo; i < hi_i; ++i) {
            out.rho[i] = (1.0 - w) * a.rho[i] + w * b.rho[i];
            for (int c = 0; c < d; ++c)
                out.m.at(i, c) = (1.0 - w) * a.m.at(i, c) + w * b.m.at(i, c);
        }
    });
    return out;
}

namespace {

struct MeanRef {
    double rho = 0.0;
    std::array<double, 3> m{0.0, 0.0, 0.0};
};

MeanRef state_means(const FlowState& s) {
    MeanRef out;
    out.rho = mean_value(s.rho);
    for (int c = 0; c < s.grid().d; ++c) {
        out.m[c] = s.grid().cell_volume() *
                   det::sum_map(s.m.size(), [&](std::size_t i) { return s.m.at(i, c); }) /
                   s.grid().volume();
    }
    return out;
}

double max_wavespeed(const FlowState& s, const PressureLaw& law) {
    const auto& dp = law.dp_fn();
    return det::max_map(s.rho.size(), [&](std::size_t i) {
        return s.m.magnitude_at(i) / s.rho[i] + std::sqrt(dp(s.rho[i]));
    });
}

// y = a + c * k
void stage_combine(const FlowState& a, double c, const ScalarField& k_rho,
                   const VectorField& k_m, FlowState& y) {
    const int d = a.grid().d;
    par::parallel_for(a.rho.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            y.rho[i] = a.rho[i] + c * k_rho[i];
            for (int cdim = 0; cdim < d; ++cdim)
                y.m.at(i, cdim) = a.m.at(i, cdim) + c * k_m.at(i, cdim);
        }
    });
}

}  // namespace

void euler_rhs(const FlowState& state, const PressureLaw& law, SpectralWorkspace& ws,
               bool dealias, ScalarField& drho, VectorField& dm) {
    const TorusGrid& g = state.grid();
    require_same_grid(g, ws.grid(), "euler_rhs");

    const double rho_min = min_value(state.rho);
    const double rho_max = max_value(state.rho);
    if (!(law.contains(rho_min) && law.contains(rho_max)))
        throw numeric_error("density left validity interval (" + std::to_string(rho_min) +
                            ", " + std::to_string(rho_max) + ")");

    const auto& pfn = law.p_fn();
    SymTensorField flux(g);
    const int d = g.d;
    par::parallel_for(g.points(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const double inv_rho = 1.0 / state.rho[i];
            const double pr = pfn(state.rho[i]);
            for (int a = 0; a < d; ++a)
                for (int b = a; b < d; ++b) {
                    double v = state.m.at(i, a) * state.m.at(i, b) * inv_rho;
                    if (a == b) v += pr;
                    flux.at(i, a, b) = v;
                }
        }
    });

    ScalarField div_m = ws.divergence(state.m, dealias);
    VectorField div_flux = ws.divergence(flux, dealias);
    drho = ScalarField(g);
    dm = VectorField(g);
    par::parallel_for(g.points(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            drho[i] = -div_m[i];
            for (int c = 0; c < d; ++c) dm.at(i, c) = -div_flux.at(i, c);
        }
    });
}

SmoothSolution solve_smooth(const FlowState& data, const PressureLaw& law,
                            const SolverConfig& cfg, SpectralWorkspace& ws) {
    const TorusGrid& g = data.grid();
    require_same_grid(g, ws.grid(), "solve_smooth");
    cfg.validate(g.d);

    SmoothSolution sol;
    sol.k_monitor = cfg.effective_k_monitor(g.d);

    FlowState y(data.rho, data.m, 0.0);
    if (cfg.dealias) {
        ws.dealias(y.rho);
        ws.dealias(y.m);
    }

    const MeanRef mean0 = state_means(y);

    auto monitor_norms = [&](const FlowState& s, double& nr, double& nm) {
        nr = ws.sobolev_norm(s.rho, sol.k_monitor);
        double nm_sq = 0.0;
        ScalarField comp(g);
        for (int c = 0; c < g.d; ++c) {
            std::copy(s.m.comp(c).begin(), s.m.comp(c).end(), comp.data().begin());
            nm_sq += ws.sobolev_norm_sq(comp, sol.k_monitor);
        }
        nm = std::sqrt(nm_sq);
    };

    auto tail_fraction = [&](const FlowState& s) {
        ScalarField comp(g);
        double total = 0.0, fluct = 0.0, tail = 0.0;
        auto acc = [&](const ScalarField& f) {
            const auto e = ws.spectrum_energy(f);
            total += e.total;
            fluct += e.fluct;
            tail += e.tail;
        };
        acc(s.rho);
        for (int c = 0; c < g.d; ++c) {
            std::copy(s.m.comp(c).begin(), s.m.comp(c).end(), comp.data().begin());
            acc(comp);
        }
        if (fluct <= 1e-24 * total) return 0.0;
        return tail / fluct;
    };

    double nr0 = 0.0, nm0 = 0.0;
    monitor_norms(y, nr0, nm0);
    sol.norm_rho.push_back(nr0);
    sol.norm_m.push_back(nm0);
    sol.step_times.push_back(0.0);
    const double combined0 = std::sqrt(nr0 * nr0 + nm0 * nm0);

    sol.snaps.push_back(y);
    sol.tail_fraction_max = tail_fraction(y);

    ScalarField k1r, k2r, k3r, k4r;
    VectorField k1m, k2m, k3m, k4m;
    FlowState stage(y.rho, y.m, 0.0);

    double t = 0.0;
    long steps_since_snap = 0;
    sol.reason = StopReason::reached_t_end;

    while (t < cfg.t_end) {
        if (sol.steps >= cfg.max_steps) {
            sol.blowup = true;
            sol.reason = StopReason::max_steps;
            break;
        }

        double dt;
        if (cfg.dt_fixed > 0.0) {
            dt = cfg.dt_fixed;
        } else {
            const double speed = max_wavespeed(y, law);
            dt = speed > 1e-14 ? cfg.cfl * g.h() / speed : cfg.t_end - t;
        }
        dt = std::min(dt, cfg.t_end - t);

        bool aborted = false;
        try {
            euler_rhs(y, law, ws, cfg.dealias, k1r, k1m);
            stage_combine(y, 0.5 * dt, k1r, k1m, stage);
            euler_rhs(stage, law, ws, cfg.dealias, k2r, k2m);
            stage_combine(y, 0.5 * dt, k2r, k2m, stage);
            euler_rhs(stage, law, ws, cfg.dealias, k3r, k3m);
            stage_combine(y, dt, k3r, k3m, stage);
            euler_rhs(stage, law, ws, cfg.dealias, k4r, k4m);
            // final combine into the stage buffer; y stays the accepted state
            const int d = g.d;
            par::parallel_for(g.points(), [&](std::size_t lo, std::size_t hi) {
                for (std::size_t i = lo; i < hi; ++i) {
                    stage.rho[i] =
                        y.rho[i] + dt / 6.0 * (k1r[i] + 2.0 * k2r[i] + 2.0 * k3r[i] + k4r[i]);
                    for (int c = 0; c < d; ++c)
                        stage.m.at(i, c) =
                            y.m.at(i, c) + dt / 6.0 * (k1m.at(i, c) + 2.0 * k2m.at(i, c) +
                                                       2.0 * k3m.at(i, c) + k4m.at(i, c));
                }
            });
            const double rho_min = min_value(stage.rho);
            const double rho_max = max_value(stage.rho);
            if (!(law.contains(rho_min) && law.contains(rho_max))) aborted = true;
        } catch (const numeric_error&) {
            aborted = true;
        }
        if (aborted) {
            sol.blowup = true;
            sol.reason = StopReason::density_exit;
            break;
        }
        std::swap(y.rho, stage.rho);
        std::swap(y.m, stage.m);

        t += dt;
        y.time = t;
        ++sol.steps;
        ++steps_since_snap;
        sol.dt_history.push_back(dt);
        sol.step_times.push_back(t);

        double nr = 0.0, nm = 0.0;
        monitor_norms(y, nr, nm);
        sol.norm_rho.push_back(nr);
        sol.norm_m.push_back(nm);

        const MeanRef means = state_means(y);
        sol.mean_rho_drift = std::max(sol.mean_rho_drift, std::abs(means.rho - mean0.rho));
        for (int c = 0; c < g.d; ++c)
            sol.mean_m_drift = std::max(sol.mean_m_drift, std::abs(means.m[c] - mean0.m[c]));

        const double tf = tail_fraction(y);
        sol.tail_fraction_max = std::max(sol.tail_fraction_max, tf);

        const bool due_snapshot = steps_since_snap >= cfg.snap_every;
        const bool last = !(t < cfg.t_end);
        bool stop = false;
        const double combined = std::sqrt(nr * nr + nm * nm);
        if (!std::isfinite(combined) || combined > cfg.blowup_factor * combined0) {
            sol.blowup = true;
            sol.reason = StopReason::norm_growth;
            stop = true;
        } else if (tf > cfg.tail_threshold) {
            sol.blowup = true;
            sol.reason = StopReason::tail_energy;
            stop = true;
        }
        if (due_snapshot || last || stop) {
            sol.snaps.push_back(y);
            steps_since_snap = 0;
        }
        if (stop) break;
    }

    sol.t_reached = y.time;
    if (sol.snaps.back().time != sol.t_reached) sol.snaps.push_back(y);
    return sol;
}

}  // namespace wildlab
