#include "wildlab/pipeline.hpp"

#include <sstream>

#include "wildlab/errors.hpp"
#include "wildlab/wef.hpp"

namespace wildlab {

SmoothSolution run_solve(const ExperimentConfig& cfg, const RunPaths& paths) {
    const TorusGrid g = make_grid(cfg);
    const PressureLaw law = make_pressure(cfg);
    const FlowState data = make_initial(cfg);
    SpectralWorkspace ws(g);
    SmoothSolution sol = solve_smooth(data, law, make_solver(cfg), ws);
    save_solution(paths, cfg, sol);
    update_report(paths, cfg, "solve", solution_summary(cfg, sol));
    return sol;
}

SmoothSolution ensure_solution(const ExperimentConfig& cfg, const RunPaths& paths) {
    if (solution_present(paths, cfg)) return load_solution(paths);
    return run_solve(cfg, paths);
}

bool run_certify(const ExperimentConfig& cfg, const RunPaths& paths, bool dump_fields) {
    const SmoothSolution sol = ensure_solution(cfg, paths);
    const TorusGrid& g = sol.snaps.front().grid();
    const double T = sol.t_reached;
    SpectralWorkspace ws(g);
    const EnergyProfile prof = make_profile(cfg);
    const AnsatzFields ans = AnsatzFields::build(sol, prof);
    const Envelope env = make_envelope(cfg, T);

    std::optional<std::filesystem::path> dump;
    if (dump_fields) dump = paths.dir / "margin_fields";

    const CertificationReport zero =
        subsolution_margin(SubsolutionCandidate::zero(g, T), ans, sol, ws, 1e-10, dump);
    bool all_pass = zero.pass;

    ordered_json cert;
    cert["zero"] = certification_to_json(zero);
    cert["waves"] = ordered_json::array();
    if (cfg.wave.amplitude > 0.0) {
        for (int n : cfg.wave.harmonics) {
            PlaneWaveSpec spec;
            spec.xi = cfg.wave.xi;
            spec.a_dir = cfg.wave.a_dir;
            spec.harmonic = n;
            spec.amplitude = cfg.wave.amplitude;
            const CertificationReport rep =
                subsolution_margin(SubsolutionCandidate::plane_wave(g, T, spec, env), ans, sol, ws);
            all_pass = all_pass && rep.pass;
            ordered_json w;
            w["harmonic"] = n;
            w["amplitude"] = cfg.wave.amplitude;
            w["report"] = certification_to_json(rep);
            cert["waves"].push_back(w);
        }
    }
    if (cfg.wave.search) {
        PlaneWaveSpec shape;
        shape.xi = cfg.wave.xi;
        shape.a_dir = cfg.wave.a_dir;
        shape.harmonic = cfg.wave.harmonics.front();
        const AmplitudeSearchResult res =
            max_amplitude_search(shape, env, ans, sol, ws, cfg.wave.margin_fraction);
        cert["search"] = search_to_json(res);
    }

    write_json(paths.certification_file(), cert);
    write_text(paths.margins_file(), margins_csv(zero));
    update_report(paths, cfg, "certification", cert);
    return all_pass;
}

EnergyWindow run_window(const ExperimentConfig& cfg, const RunPaths& paths) {
    const SmoothSolution sol = ensure_solution(cfg, paths);
    SpectralWorkspace ws(sol.snaps.front().grid());
    const PressureLaw law = make_pressure(cfg);
    const EnergyProfile prof = make_profile(cfg);
    const AnsatzFields ans = AnsatzFields::build(sol, prof);

    const EnergyWindow win = wild_window(sol, ans, law, prof, ws);
    write_json(paths.window_file(), window_to_json(win));
    write_text(paths.window_curve_file(), window_curve_csv(win));
    WefSnapshot vb;
    vb.grid = sol.snaps.front().grid();
    vb.time = 0.0;
    vb.scalars.emplace_back("v_bound", win.v_bound0);
    save_wef(paths.v_bound_file(), vb);
    update_report(paths, cfg, "window", window_to_json(win));
    return win;
}

BudgetReport run_budget(const ExperimentConfig& cfg, const RunPaths& paths) {
    const SmoothSolution sol = ensure_solution(cfg, paths);
    const double lambda0 = choose_lambda0(cfg.budget.target_eps, sol.snaps.front().rho);

    // Budget profile: the configured shape rescaled to L(0) = lambda0.
    const EnergyProfile base = make_profile(cfg);
    const double scale = lambda0 / base.lambda(0.0);
    const EnergyProfile prof = EnergyProfile::custom(
        [base, scale](double t) { return scale * base.lambda(t); },
        [base, scale](double t) { return scale * base.dlambda(t); }, "scaled_" + base.kind());

    PlaneWaveSpec shape;
    shape.xi = cfg.wave.xi;
    shape.a_dir = cfg.wave.a_dir;
    const Envelope env = make_envelope(cfg, sol.t_reached);
    const BudgetReport rep = wave_budget(sol, prof, cfg.budget.target_eps, shape,
                                         cfg.wave.harmonics, env, cfg.budget.tau_fraction);
    write_json(paths.budget_file(), budget_to_json(rep));
    update_report(paths, cfg, "budget", budget_to_json(rep));
    return rep;
}

namespace {

std::string num(const ordered_json& j) { return j.dump(); }

void render_section(std::ostringstream& os, const ordered_json& rep, const char* key) {
    if (!rep.contains(key)) return;
    const ordered_json& s = rep[key];
    os << "\n[" << key << "]\n";
    if (std::string(key) == "solve") {
        os << "  t_reached          = " << num(s["t_reached"]) << "\n";
        os << "  steps              = " << num(s["steps"]) << "\n";
        os << "  reason             = " << s["reason"].get<std::string>() << "\n";
        os << "  blowup             = " << num(s["blowup"]) << "\n";
        os << "  k_monitor          = " << num(s["k_monitor"]) << "\n";
        os << "  mean_rho_drift     = " << num(s["mean_rho_drift"]) << "\n";
        os << "  mean_m_drift       = " << num(s["mean_m_drift"]) << "\n";
        os << "  tail_fraction_max  = " << num(s["tail_fraction_max"]) << "\n";
        os << "  snapshots          = " << s["snapshots"].size() << "\n";
    } else if (std::string(key) == "certification") {
        const auto& z = s["zero"];
        os << "  zero candidate     : " << (z["pass"].get<bool>() ? "pass" : "FAIL")
           << ", margin_min = " << num(z["margin_min"]) << ", gap_min = " << num(z["gap_min"])
           << "\n";
        for (const auto& w : s["waves"]) {
            const auto& r = w["report"];
            os << "  wave N=" << num(w["harmonic"]) << " A=" << num(w["amplitude"]) << "   : "
               << (r["pass"].get<bool>() ? "pass" : "FAIL")
               << ", margin_min = " << num(r["margin_min"]) << "\n";
        }
        if (s.contains("search")) {
            const auto& q = s["search"];
            os << "  amplitude search   : best_amplitude = " << num(q["best_amplitude"])
               << " (zero margin " << num(q["zero_margin"]) << ", target "
               << num(q["margin_target"]) << ")\n";
        }
    } else if (std::string(key) == "window") {
        os << "  T_w                = " << num(s["T_w"]) << "\n";
        os << "  eps                = " << num(s["eps"]) << "\n";
        os << "  horizon            = " << num(s["horizon"]) << "\n";
        os << "  empty              = " << num(s["empty"]) << "\n";
        os << "  note               = " << s["note"].get<std::string>() << "\n";
    } else if (std::string(key) == "budget") {
        os << "  target_eps         = " << num(s["target_eps"]) << "\n";
        os << "  lambda0            = " << num(s["lambda0"]) << "\n";
        os << "  predicted_l2       = " << num(s["predicted_l2"]) << "\n";
        os << "  n0                 = " << num(s["n0"]) << " (found = " << num(s["found"])
           << ")\n";
        for (const auto& e : s["entries"])
            os << "    N=" << num(e["harmonic"]) << " A=" << num(e["amplitude"])
               << " l2=" << num(e["measured_l2"])
               << (e["pass"].get<bool>() ? " pass" : " FAIL") << "\n";
    }
}

}  // namespace

std::string render_report(const std::filesystem::path& run_dir) {
    const RunPaths paths{run_dir};
    const ordered_json rep = read_json(paths.report_file());
    std::ostringstream os;
    os << "run directory      : " << run_dir.string() << "\n";
    os << "format version     : " << rep["format_version"].get<std::string>() << "\n";
    os << "config hash        : " << rep["config_hash"].get<std::string>() << "\n";
    os << "solve hash         : " << rep["solve_hash"].get<std::string>() << "\n";
    render_section(os, rep, "solve");
    render_section(os, rep, "certification");
    render_section(os, rep, "window");
    render_section(os, rep, "budget");
    return os.str();
}

}  // namespace wildlab
