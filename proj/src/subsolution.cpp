#include "wildlab/subsolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "wildlab/errors.hpp"
#include "wildlab/norms.hpp"
#include "wildlab/reduce.hpp"
#include "wildlab/wef.hpp"

namespace wildlab {

namespace {
constexpr double kPi = std::numbers::pi;
}

Envelope Envelope::sin_squared(double T) {
    if (!(T > 0.0)) throw config_error("envelope horizon must be positive");
    Envelope env;
    env.kind = "sin_squared";
    env.chi = [T](double t) {
        const double s = std::sin(kPi * t / T);
        return s * s;
    };
    env.dchi = [T](double t) { return kPi / T * std::sin(2.0 * kPi * t / T); };
    return env;
}

Envelope Envelope::custom(std::function<double(double)> chi, std::function<double(double)> dchi,
                          std::string kind) {
    if (!chi || !dchi) throw config_error("custom envelope needs chi and dchi");
    Envelope env;
    env.kind = std::move(kind);
    env.chi = std::move(chi);
    env.dchi = std::move(dchi);
    return env;
}

void Envelope::verify(double T) const {
    if (std::abs(chi(0.0)) > 1e-12 || std::abs(chi(T)) > 1e-12)
        throw config_error("envelope must vanish at t = 0 and t = T");
    for (int i = 0; i <= 16; ++i) {
        const double t = T * (i + 0.5) / 17.0;
        const double h = 1e-5 * T;
        auto centered = [&](double step) { return (chi(t + step) - chi(t - step)) / (2.0 * step); };
        const double fd = (4.0 * centered(0.5 * h) - centered(h)) / 3.0;
        if (std::abs(fd - dchi(t)) > 1e-6)
            throw config_error("envelope derivative inconsistent with chi");
    }
}

SubsolutionCandidate::SubsolutionCandidate(const TorusGrid& g, double T, Envelope env)
    : grid_(g), horizon_(T), env_(std::move(env)) {
    if (!(T > 0.0)) throw config_error("candidate horizon must be positive");
    env_.verify(T);
}

SubsolutionCandidate SubsolutionCandidate::zero(const TorusGrid& g, double T) {
    return SubsolutionCandidate(g, T, Envelope::sin_squared(T));
}

SubsolutionCandidate SubsolutionCandidate::plane_wave(const TorusGrid& g, double T,
                                                      const PlaneWaveSpec& spec,
                                                      const Envelope& env) {
    SubsolutionCandidate cand(g, T, env);
    cand.add_wave(spec);
    return cand;
}

void SubsolutionCandidate::add_wave(const PlaneWaveSpec& spec) {
    const int d = grid_.d;
    if (spec.harmonic < 1) throw config_error("wave harmonic N must be >= 1");
    int xi_inf = 0;
    double dot = 0.0;
    double a_norm = 0.0;
    for (int c = 0; c < 3; ++c) {
        if (c >= d && (spec.xi[c] != 0 || spec.a_dir[c] != 0.0))
            throw config_error("wave components beyond the dimension must vanish");
        xi_inf = std::max(xi_inf, std::abs(spec.xi[c]));
        dot += spec.a_dir[c] * static_cast<double>(spec.xi[c]);
        a_norm += spec.a_dir[c] * spec.a_dir[c];
    }
    if (xi_inf == 0) throw config_error("wave vector xi must be nonzero");
    if (a_norm == 0.0) throw config_error("wave amplitude direction must be nonzero");
    if (dot != 0.0) throw config_error("wave needs a_dir . xi = 0 exactly");
    if (spec.harmonic * xi_inf > grid_.n / 3)
        throw config_error("wave mode exceeds the dealias band of the grid");
    waves_.push_back(spec);
}

namespace {

double wave_phase(const PlaneWaveSpec& w, const Point& x, int d) {
    double s = 0.0;
    for (int c = 0; c < d; ++c) s += w.xi[c] * x[c];
    return kPi * w.harmonic * s;
}

double wave_xi_norm_sq(const PlaneWaveSpec& w) {
    double s = 0.0;
    for (int c = 0; c < 3; ++c) s += static_cast<double>(w.xi[c]) * w.xi[c];
    return s;
}

}  // namespace

VectorField SubsolutionCandidate::v_at(double t) const {
    VectorField out(grid_);
    const double chi = env_.chi(t);
    const int d = grid_.d;
    for (const auto& w : waves_) {
        const double amp = w.amplitude * chi;
        if (amp == 0.0 && w.amplitude == 0.0) continue;
        par::parallel_for(out.size(), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                const double c = std::cos(wave_phase(w, grid_.point(i), d));
                for (int a = 0; a < d; ++a) out.at(i, a) += amp * w.a_dir[a] * c;
            }
        });
    }
    return out;
}

VectorField SubsolutionCandidate::dvdt_at(double t) const {
    VectorField out(grid_);
    const double dchi = env_.dchi(t);
    const int d = grid_.d;
    for (const auto& w : waves_) {
        const double amp = w.amplitude * dchi;
        par::parallel_for(out.size(), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                const double c = std::cos(wave_phase(w, grid_.point(i), d));
                for (int a = 0; a < d; ++a) out.at(i, a) += amp * w.a_dir[a] * c;
            }
        });
    }
    return out;
}

SymTensorField SubsolutionCandidate::flux_at(double t) const {
    SymTensorField out(grid_, /*traceless=*/true);
    const double dchi = env_.dchi(t);
    const int d = grid_.d;
    for (const auto& w : waves_) {
        const double coef = -w.amplitude * dchi / (kPi * w.harmonic * wave_xi_norm_sq(w));
        par::parallel_for(out.size(), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                const double s = std::sin(wave_phase(w, grid_.point(i), d));
                for (int a = 0; a < d; ++a)
                    for (int b = a; b < d; ++b)
                        out.at(i, a, b) +=
                            coef * (w.a_dir[a] * w.xi[b] + w.a_dir[b] * w.xi[a]) * s;
            }
        });
    }
    return out;
}

Point SubsolutionCandidate::v_point(double t, const Point& x) const {
    Point out{0.0, 0.0, 0.0};
    const double chi = env_.chi(t);
    const int d = grid_.d;
    for (const auto& w : waves_) {
        const double c = std::cos(wave_phase(w, x, d));
        for (int a = 0; a < d; ++a) out[a] += w.amplitude * chi * w.a_dir[a] * c;
    }
    return out;
}

double SubsolutionCandidate::mode_pairing(double t, const std::array<int, 3>& k,
                                          const std::array<double, 3>& dir) const {
    double acc = 0.0;
    const double chi = env_.chi(t);
    for (const auto& w : waves_) {
        bool plus = true, minus = true;
        for (int c = 0; c < 3; ++c) {
            const int m = w.harmonic * w.xi[c];
            plus = plus && m == k[c];
            minus = minus && m == -k[c];
        }
        if (!plus && !minus) continue;
        double dot = 0.0;
        for (int c = 0; c < grid_.d; ++c) dot += w.a_dir[c] * dir[c];
        acc += 0.5 * grid_.volume() * w.amplitude * chi * dot;
    }
    return acc;
}

double SubsolutionCandidate::flux_identity_residual(double t, const Point& x) const {
    // d_t v from the closed form; div F differentiated term by term without
    // using a . xi = 0, so the cancellation happens in floating arithmetic.
    const double dchi = env_.dchi(t);
    const int d = grid_.d;
    Point resid{0.0, 0.0, 0.0};
    for (const auto& w : waves_) {
        const double phase = wave_phase(w, x, d);
        const double dv_amp = w.amplitude * dchi * std::cos(phase);
        const double coef = -w.amplitude * dchi / (kPi * w.harmonic * wave_xi_norm_sq(w));
        for (int a = 0; a < d; ++a) {
            resid[a] += dv_amp * w.a_dir[a];
            for (int b = 0; b < d; ++b) {
                const double f_ab = coef * (w.a_dir[a] * w.xi[b] + w.a_dir[b] * w.xi[a]);
                resid[a] += f_ab * kPi * w.harmonic * w.xi[b] * std::cos(phase);
            }
        }
    }
    double mag = 0.0;
    for (int a = 0; a < d; ++a) mag += resid[a] * resid[a];
    return std::sqrt(mag);
}

StructuralReport SubsolutionCandidate::structural_checks(SpectralWorkspace& ws,
                                                         int time_samples) const {
    require_same_grid(grid_, ws.grid(), "structural_checks");
    StructuralReport rep;
    for (int k = 0; k < time_samples; ++k) {
        const double t = horizon_ * k / (time_samples - 1);
        const VectorField v = v_at(t);
        const SymTensorField f = flux_at(t);
        rep.div_v_max = std::max(rep.div_v_max, linf_norm(ws.divergence(v)));
        rep.trace_f_max = std::max(rep.trace_f_max, f.traceless_violation());
        const VectorField div_f = ws.divergence(f);
        const VectorField dv = dvdt_at(t);
        const double resid = det::max_map(v.size(), [&](std::size_t i) {
            double s = 0.0;
            for (int a = 0; a < grid_.d; ++a) {
                const double r = dv.at(i, a) + div_f.at(i, a);
                s += r * r;
            }
            return std::sqrt(s);
        });
        rep.flux_residual_max = std::max(rep.flux_residual_max, resid);
    }
    rep.endpoint_sup = std::max(linf_norm(v_at(0.0)), linf_norm(v_at(horizon_)));
    return rep;
}

namespace {

struct MarginPass {
    double margin_min;
    double margin_mean;
    double margin_max;
    double gap_min;
    double sup_v;
    double max_rho_e;
    double max_m;
    ScalarField margin_field;
    ScalarField gap_field;
};

// margin evaluation with the candidate flux subtracted
MarginPass margin_snapshot_flux(const FlowState& s, const SymTensorField& H,
                                const ScalarField& e, const VectorField& v,
                                const SymTensorField& F, bool keep_fields) {
    const TorusGrid& g = s.grid();
    const int d = g.d;
    const std::size_t n = g.points();
    ScalarField margin(g), gap(g);
    std::vector<double> vmag(n), rho_e(n), mmag(n);
    par::parallel_for(n, [&](std::size_t lo, std::size_t hi) {
        double bracket[6] = {};
        for (std::size_t i = lo; i < hi; ++i) {
            const double inv_rho = 1.0 / s.rho[i];
            double w[3] = {0.0, 0.0, 0.0};
            double w2 = 0.0, v2 = 0.0;
            for (int a = 0; a < d; ++a) {
                w[a] = v.at(i, a) + s.m.at(i, a);
                w2 += w[a] * w[a];
                v2 += v.at(i, a) * v.at(i, a);
            }
            int k = 0;
            for (int a = 0; a < d; ++a)
                for (int b = a; b < d; ++b, ++k)
                    bracket[k] = w[a] * w[b] * inv_rho - F.at(i, a, b) - H.at(i, a, b);
            const double lam = lambda_max_packed(bracket, d);
            margin[i] = e[i] - 0.5 * d * lam;
            gap[i] = e[i] - 0.5 * w2 * inv_rho;
            vmag[i] = std::sqrt(v2);
            rho_e[i] = s.rho[i] * e[i];
            mmag[i] = s.m.magnitude_at(i);
        }
    });
    MarginPass out{
        .margin_min = min_value(margin),
        .margin_mean = mean_value(margin),
        .margin_max = max_value(margin),
        .gap_min = min_value(gap),
        .sup_v = det::max(vmag),
        .max_rho_e = det::max(rho_e),
        .max_m = det::max(mmag),
        .margin_field = keep_fields ? std::move(margin) : ScalarField(),
        .gap_field = keep_fields ? std::move(gap) : ScalarField(),
    };
    return out;
}

}  // namespace

CertificationReport subsolution_margin(const SubsolutionCandidate& cand, const AnsatzFields& ans,
                                       const SmoothSolution& sol, SpectralWorkspace& ws,
                                       double strictness,
                                       const std::optional<std::filesystem::path>& dump_dir) {
    if (ans.times.size() != sol.snaps.size())
        throw config_error("certification cadence mismatch between ansatz and trajectory");
    for (std::size_t j = 0; j < ans.times.size(); ++j)
        if (ans.times[j] != sol.snaps[j].time)
            throw config_error("certification cadence mismatch between ansatz and trajectory");
    require_same_grid(cand.grid(), sol.snaps.front().grid(), "subsolution_margin");

    CertificationReport rep;
    rep.strictness = strictness;
    rep.margin_min = std::numeric_limits<double>::infinity();
    rep.gap_min = std::numeric_limits<double>::infinity();
    double max_rho_e = 0.0;
    double max_m = 0.0;

    const bool dump = dump_dir.has_value();
    if (dump) std::filesystem::create_directories(*dump_dir);

    for (std::size_t j = 0; j < sol.snaps.size(); ++j) {
        const FlowState& s = sol.snaps[j];
        const VectorField v = cand.v_at(s.time);
        const SymTensorField f = cand.flux_at(s.time);
        MarginPass pass = margin_snapshot_flux(s, ans.H[j], ans.e[j], v, f, dump);
        rep.per_snapshot.push_back({s.time, pass.margin_min, pass.margin_mean, pass.margin_max,
                                    pass.gap_min, pass.sup_v});
        rep.margin_min = std::min(rep.margin_min, pass.margin_min);
        rep.gap_min = std::min(rep.gap_min, pass.gap_min);
        rep.sup_v = std::max(rep.sup_v, pass.sup_v);
        max_rho_e = std::max(max_rho_e, pass.max_rho_e);
        max_m = std::max(max_m, pass.max_m);
        if (dump) {
            WefSnapshot snap;
            snap.grid = s.grid();
            snap.time = s.time;
            snap.scalars.emplace_back("margin", std::move(pass.margin_field));
            snap.scalars.emplace_back("energy_gap", std::move(pass.gap_field));
            char name[32];
            std::snprintf(name, sizeof(name), "margin_%06zu.wef", j);
            save_wef(*dump_dir / name, snap);
        }
    }
    rep.sup_v_bound = std::sqrt(2.0 * max_rho_e) + max_m;
    rep.structure = cand.structural_checks(ws);

    std::ostringstream note;
    bool pass = true;
    if (!(rep.margin_min > strictness)) {
        pass = false;
        note << "margin not strictly positive (min " << rep.margin_min << "); ";
    }
    if (!std::isfinite(rep.sup_v)) {
        pass = false;
        note << "candidate unbounded; ";
    }
    if (rep.structure.div_v_max > 1e-12) {
        pass = false;
        note << "div v = " << rep.structure.div_v_max << " exceeds 1e-12; ";
    }
    if (rep.structure.trace_f_max > 1e-12) {
        pass = false;
        note << "trace F violation " << rep.structure.trace_f_max << "; ";
    }
    if (rep.structure.flux_residual_max > 1e-10) {
        pass = false;
        note << "flux identity residual " << rep.structure.flux_residual_max << "; ";
    }
    if (rep.structure.endpoint_sup > 1e-12) {
        pass = false;
        note << "endpoints not zero (sup " << rep.structure.endpoint_sup << "); ";
    }
    rep.pass = pass;
    rep.note = pass ? "member of the subsolution set" : note.str();
    return rep;
}

double relaxation_slack(const std::array<double, 3>& w, double rho, const double* f_packed,
                        const double* h_packed, int d) {
    if (!(rho > 0.0)) throw std::invalid_argument("relaxation_slack needs rho > 0");
    const double inv_rho = 1.0 / rho;
    double bracket[6] = {};
    double w2 = 0.0;
    int k = 0;
    for (int a = 0; a < d; ++a) w2 += w[a] * w[a];
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b, ++k)
            bracket[k] = w[a] * w[b] * inv_rho - f_packed[k] - h_packed[k];
    return 0.5 * d * lambda_max_packed(bracket, d) - 0.5 * w2 * inv_rho;
}

double eigen_identity_deviation(const FlowState& state) {
    const SymTensorField H = build_H(state);
    const TorusGrid& g = state.grid();
    const int d = g.d;
    return det::max_map(g.points(), [&](std::size_t i) {
        const double inv_rho = 1.0 / state.rho[i];
        double bracket[6] = {};
        int k = 0;
        for (int a = 0; a < d; ++a)
            for (int b = a; b < d; ++b, ++k)
                bracket[k] = state.m.at(i, a) * state.m.at(i, b) * inv_rho - H.at(i, a, b);
        const double lam = lambda_max_packed(bracket, d);
        return std::abs(0.5 * d * lam - 0.5 * state.m.magnitude_sq_at(i) * inv_rho);
    });
}

AmplitudeSearchResult max_amplitude_search(const PlaneWaveSpec& shape, const Envelope& env,
                                           const AnsatzFields& ans, const SmoothSolution& sol,
                                           SpectralWorkspace& ws, double fraction,
                                           int max_doublings, int bisect_iters) {
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw config_error("margin fraction must be in (0,1]");
    const TorusGrid& g = sol.snaps.front().grid();
    const double T = sol.t_reached;

    AmplitudeSearchResult res;
    const CertificationReport zero_rep =
        subsolution_margin(SubsolutionCandidate::zero(g, T), ans, sol, ws);
    res.zero_margin = zero_rep.margin_min;
    if (!zero_rep.pass) {
        res.searched = false;
        res.note = "zero candidate failed, no amplitude search: " + zero_rep.note;
        return res;
    }
    res.searched = true;
    res.margin_target = fraction * res.zero_margin;

    auto probe = [&](double amplitude) {
        PlaneWaveSpec spec = shape;
        spec.amplitude = amplitude;
        const auto cand = SubsolutionCandidate::plane_wave(g, T, spec, env);
        const CertificationReport rep = subsolution_margin(cand, ans, sol, ws);
        AmplitudeProbe pr;
        pr.amplitude = amplitude;
        pr.margin_min = rep.margin_min;
        pr.pass = rep.pass && rep.margin_min >= res.margin_target;
        res.curve.push_back(pr);
        return pr.pass;
    };

    double lo = 0.0;  // largest amplitude seen passing
    double hi = 0.0;  // smallest amplitude seen failing, 0 while none failed
    double a = 1.0;
    for (int it = 0; it <= max_doublings; ++it) {
        if (probe(a)) {
            lo = std::max(lo, a);
            if (hi > 0.0) break;
            a *= 2.0;
        } else {
            hi = hi > 0.0 ? std::min(hi, a) : a;
            if (lo > 0.0) break;
            a *= 0.5;
            if (a < 1e-300) break;
        }
    }
    if (lo > 0.0 && hi > lo) {
        for (int it = 0; it < bisect_iters && (hi - lo) > 1e-3 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (probe(mid))
                lo = mid;
            else
                hi = mid;
        }
    }
    for (const auto& pr : res.curve)
        if (pr.pass && pr.amplitude > res.best_amplitude) res.best_amplitude = pr.amplitude;

    std::sort(res.curve.begin(), res.curve.end(),
              [](const AmplitudeProbe& x, const AmplitudeProbe& y) {
                  return x.amplitude < y.amplitude;
              });

    if (res.best_amplitude > 0.0) {
        PlaneWaveSpec spec = shape;
        spec.amplitude = res.best_amplitude;
        res.best_report = subsolution_margin(
            SubsolutionCandidate::plane_wave(g, T, spec, env), ans, sol, ws);
        res.note = "largest verified amplitude " + std::to_string(res.best_amplitude);
    } else {
        res.note = "no positive amplitude verified at the requested margin fraction";
    }
    return res;
}

}  // namespace wildlab
