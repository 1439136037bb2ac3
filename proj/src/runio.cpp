#include "wildlab/runio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "wildlab/errors.hpp"
#include "wildlab/wef.hpp"

namespace wildlab {

namespace {

std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

StopReason reason_from_name(const std::string& name) {
    for (StopReason r : {StopReason::reached_t_end, StopReason::norm_growth,
                         StopReason::density_exit, StopReason::tail_energy,
                         StopReason::max_steps})
        if (name == stop_reason_name(r)) return r;
    throw io_error("unknown stop reason '" + name + "' in solution.json");
}

}  // namespace

std::filesystem::path RunPaths::snap_file(std::size_t index) const {
    char name[32];
    std::snprintf(name, sizeof(name), "snap_%06zu.wef", index);
    return dir / name;
}

std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunPaths prepare_run_dir(const ExperimentConfig& cfg, const std::filesystem::path& out_root) {
    RunPaths paths{out_root / ("run_" + hash_hex(cfg.solve_hash()))};
    std::error_code ec;
    std::filesystem::create_directories(paths.dir, ec);
    if (ec) throw io_error("cannot create run directory " + paths.dir.string());
    cfg.save(paths.config_file());
    return paths;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write " + path.string());
    out << text;
    if (!out) throw io_error("failed writing " + path.string());
}

void write_json(const std::filesystem::path& path, const ordered_json& j) {
    write_text(path, j.dump(2) + "\n");
}

ordered_json read_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path.string());
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw io_error("malformed JSON in " + path.string() + ": " + e.what());
    }
    return j;
}

ordered_json solution_summary(const ExperimentConfig& cfg, const SmoothSolution& sol) {
    ordered_json j;
    j["solve_hash"] = hash_hex(cfg.solve_hash());
    j["t_reached"] = sol.t_reached;
    j["steps"] = sol.steps;
    j["reason"] = stop_reason_name(sol.reason);
    j["blowup"] = sol.blowup;
    j["k_monitor"] = sol.k_monitor;
    j["mean_rho_drift"] = sol.mean_rho_drift;
    j["mean_m_drift"] = sol.mean_m_drift;
    j["tail_fraction_max"] = sol.tail_fraction_max;
    j["snapshots"] = ordered_json::array();
    for (std::size_t i = 0; i < sol.snaps.size(); ++i) {
        ordered_json s;
        char name[32];
        std::snprintf(name, sizeof(name), "snap_%06zu.wef", i);
        s["file"] = name;
        s["time"] = sol.snaps[i].time;
        j["snapshots"].push_back(s);
    }
    return j;
}

void save_solution(const RunPaths& paths, const ExperimentConfig& cfg, const SmoothSolution& sol) {
    for (std::size_t i = 0; i < sol.snaps.size(); ++i)
        save_state(paths.snap_file(i), sol.snaps[i]);
    write_json(paths.solution_file(), solution_summary(cfg, sol));

    std::string csv = "t,dt,norm_rho,norm_m\n";
    for (std::size_t i = 0; i < sol.step_times.size(); ++i) {
        csv += csv_num(sol.step_times[i]);
        csv += ',';
        csv += csv_num(i < sol.dt_history.size() ? sol.dt_history[i] : 0.0);
        csv += ',';
        csv += csv_num(sol.norm_rho[i]);
        csv += ',';
        csv += csv_num(sol.norm_m[i]);
        csv += '\n';
    }
    write_text(paths.solve_curves_file(), csv);
}

bool solution_present(const RunPaths& paths, const ExperimentConfig& cfg) {
    if (!std::filesystem::exists(paths.solution_file())) return false;
    const ordered_json j = read_json(paths.solution_file());
    return j.value("solve_hash", "") == hash_hex(cfg.solve_hash());
}

SmoothSolution load_solution(const RunPaths& paths) {
    const ordered_json j = read_json(paths.solution_file());
    SmoothSolution sol;
    sol.t_reached = j.at("t_reached").get<double>();
    sol.steps = j.at("steps").get<long>();
    sol.reason = reason_from_name(j.at("reason").get<std::string>());
    sol.blowup = j.at("blowup").get<bool>();
    sol.k_monitor = j.at("k_monitor").get<int>();
    sol.mean_rho_drift = j.at("mean_rho_drift").get<double>();
    sol.mean_m_drift = j.at("mean_m_drift").get<double>();
    sol.tail_fraction_max = j.at("tail_fraction_max").get<double>();
    for (const auto& s : j.at("snapshots")) {
        FlowState st = load_state(paths.dir / s.at("file").get<std::string>());
        st.time = s.at("time").get<double>();
        sol.snaps.push_back(std::move(st));
    }
    if (sol.snaps.empty()) throw io_error("solution.json lists no snapshots");
    return sol;
}

namespace {

ordered_json structure_to_json(const StructuralReport& s) {
    ordered_json j;
    j["div_v_max"] = s.div_v_max;
    j["trace_f_max"] = s.trace_f_max;
    j["flux_residual_max"] = s.flux_residual_max;
    j["endpoint_sup"] = s.endpoint_sup;
    return j;
}

}  // namespace

ordered_json certification_to_json(const CertificationReport& rep) {
    ordered_json j;
    j["pass"] = rep.pass;
    j["strictness"] = rep.strictness;
    j["margin_min"] = rep.margin_min;
    j["gap_min"] = rep.gap_min;
    j["sup_v"] = rep.sup_v;
    j["sup_v_bound"] = rep.sup_v_bound;
    j["structure"] = structure_to_json(rep.structure);
    j["note"] = rep.note;
    j["per_snapshot"] = ordered_json::array();
    for (const auto& s : rep.per_snapshot) {
        ordered_json e;
        e["t"] = s.t;
        e["margin_min"] = s.margin_min;
        e["margin_mean"] = s.margin_mean;
        e["margin_max"] = s.margin_max;
        e["gap_min"] = s.gap_min;
        e["sup_v"] = s.sup_v;
        j["per_snapshot"].push_back(e);
    }
    return j;
}

ordered_json search_to_json(const AmplitudeSearchResult& res) {
    ordered_json j;
    j["searched"] = res.searched;
    j["zero_margin"] = res.zero_margin;
    j["margin_target"] = res.margin_target;
    j["best_amplitude"] = res.best_amplitude;
    j["note"] = res.note;
    j["curve"] = ordered_json::array();
    for (const auto& p : res.curve) {
        ordered_json e;
        e["amplitude"] = p.amplitude;
        e["margin_min"] = p.margin_min;
        e["pass"] = p.pass;
        j["curve"].push_back(e);
    }
    if (res.best_amplitude > 0.0) j["best_report"] = certification_to_json(res.best_report);
    return j;
}

ordered_json window_to_json(const EnergyWindow& win) {
    ordered_json j;
    j["T_w"] = win.T_w;
    j["eps"] = win.eps;
    j["horizon"] = win.horizon;
    j["empty"] = win.empty;
    j["samples"] = win.residual_curve.size();
    j["note"] = win.note;
    return j;
}

ordered_json budget_to_json(const BudgetReport& rep) {
    ordered_json j;
    j["target_eps"] = rep.target_eps;
    j["lambda0"] = rep.lambda0;
    j["predicted_l2"] = rep.predicted_l2;
    j["tau"] = rep.tau;
    j["found"] = rep.found;
    j["n0"] = rep.n0;
    j["note"] = rep.note;
    j["entries"] = ordered_json::array();
    for (const auto& e : rep.entries) {
        ordered_json v;
        v["harmonic"] = e.harmonic;
        v["amplitude"] = e.amplitude;
        v["measured_l2"] = e.measured_l2;
        v["pass"] = e.pass;
        j["entries"].push_back(v);
    }
    return j;
}

ordered_json closeness_to_json(const LpCloseness& c) {
    ordered_json j;
    j["p"] = c.p;
    j["rho_dist"] = c.rho_dist;
    j["u_dist"] = c.u_dist;
    j["rho_direct"] = c.rho_direct;
    j["u_direct"] = c.u_direct;
    j["route"] = c.route;
    return j;
}

std::string window_curve_csv(const EnergyWindow& win) {
    std::string csv = "t,sup_term,M\n";
    for (const auto& s : win.residual_curve) {
        csv += csv_num(s.t);
        csv += ',';
        csv += csv_num(s.sup_term);
        csv += ',';
        csv += csv_num(s.m);
        csv += '\n';
    }
    return csv;
}

std::string margins_csv(const CertificationReport& rep) {
    std::string csv = "t,margin_min,margin_mean,margin_max,gap_min,sup_v\n";
    for (const auto& s : rep.per_snapshot) {
        csv += csv_num(s.t);
        csv += ',';
        csv += csv_num(s.margin_min);
        csv += ',';
        csv += csv_num(s.margin_mean);
        csv += ',';
        csv += csv_num(s.margin_max);
        csv += ',';
        csv += csv_num(s.gap_min);
        csv += ',';
        csv += csv_num(s.sup_v);
        csv += '\n';
    }
    return csv;
}

void update_report(const RunPaths& paths, const ExperimentConfig& cfg, const std::string& section,
                   const ordered_json& content) {
    ordered_json existing;
    if (std::filesystem::exists(paths.report_file())) existing = read_json(paths.report_file());

    ordered_json out;
    out["format_version"] = "1";
    out["config_hash"] = hash_hex(cfg.full_hash());
    out["solve_hash"] = hash_hex(cfg.solve_hash());
    out["config"] = cfg.serialize();
    out["timings_file"] = "timings.json";
    for (const char* key : {"solve", "certification", "window", "budget"}) {
        if (section == key)
            out[key] = content;
        else if (existing.contains(key))
            out[key] = existing[key];
    }
    write_json(paths.report_file(), out);
}

}  // namespace wildlab
