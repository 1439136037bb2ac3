#include "wildlab/config.hpp"

#include <charconv>
#include <climits>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "wildlab/errors.hpp"
#include "wildlab/wef.hpp"

namespace wildlab {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& val) {
    throw config_error("bad value for " + key + ": '" + val + "'");
}

double parse_double(const std::string& key, const std::string& val) {
    const char* begin = val.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + val.size() || val.empty() || !std::isfinite(v)) bad_value(key, val);
    return v;
}

long long parse_ll(const std::string& key, const std::string& val) {
    long long v = 0;
    const auto res = std::from_chars(val.data(), val.data() + val.size(), v);
    if (res.ec != std::errc() || res.ptr != val.data() + val.size()) bad_value(key, val);
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& val) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(val.data(), val.data() + val.size(), v);
    if (res.ec != std::errc() || res.ptr != val.data() + val.size()) bad_value(key, val);
    return v;
}

int parse_int(const std::string& key, const std::string& val) {
    const long long v = parse_ll(key, val);
    if (v < INT_MIN || v > INT_MAX) bad_value(key, val);
    return static_cast<int>(v);
}

bool parse_bool(const std::string& key, const std::string& val) {
    if (val == "true") return true;
    if (val == "false") return false;
    bad_value(key, val);
}

std::string commas_to_spaces(std::string s) {
    for (char& c : s)
        if (c == ',') c = ' ';
    return s;
}

template <std::size_t K, class T>
std::array<T, 3> parse_tuple(const std::string& key, const std::string& val,
                             T (*one)(const std::string&, const std::string&)) {
    const auto toks = split_ws(commas_to_spaces(val));
    if (toks.size() != K) bad_value(key, val);
    std::array<T, 3> out{};
    for (std::size_t i = 0; i < K; ++i) out[i] = one(key, toks[i]);
    return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& val) {
    const auto toks = split_ws(commas_to_spaces(val));
    if (toks.empty()) bad_value(key, val);
    std::vector<int> out;
    for (const auto& t : toks) out.push_back(parse_int(key, t));
    return out;
}

std::string join_ints(const int* v, int count) {
    std::string out;
    for (int i = 0; i < count; ++i) {
        if (i) out += ' ';
        out += std::to_string(v[i]);
    }
    return out;
}

std::string join_doubles(const double* v, int count) {
    std::string out;
    for (int i = 0; i < count; ++i) {
        if (i) out += ' ';
        out += fmt_double(v[i]);
    }
    return out;
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

void emit_kv(std::string& out, const char* key, const std::string& val) {
    out += key;
    out += " = ";
    out += val;
    out += '\n';
}

// Canonical text of the sections that determine the trajectory.
std::string serialize_solve_part(const ExperimentConfig& c) {
    std::string out;
    emit_kv(out, "seed", std::to_string(c.seed));
    out += "\n[grid]\n";
    emit_kv(out, "d", std::to_string(c.grid.d));
    emit_kv(out, "n", std::to_string(c.grid.n));
    out += "\n[pressure]\n";
    emit_kv(out, "kind", c.pressure.kind);
    emit_kv(out, "coef", fmt_double(c.pressure.coef));
    emit_kv(out, "gamma", fmt_double(c.pressure.gamma));
    if (!c.pressure.file.empty()) emit_kv(out, "file", c.pressure.file);
    out += "\n[initial]\n";
    emit_kv(out, "family", c.initial.family);
    emit_kv(out, "rho0", fmt_double(c.initial.rho0));
    emit_kv(out, "m0", join_doubles(c.initial.m0.data(), 3));
    emit_kv(out, "amplitude", fmt_double(c.initial.amplitude));
    emit_kv(out, "width", fmt_double(c.initial.width));
    emit_kv(out, "center", join_doubles(c.initial.center.data(), 3));
    emit_kv(out, "max_mode", std::to_string(c.initial.max_mode));
    if (!c.initial.path.empty()) emit_kv(out, "path", c.initial.path);
    out += "\n[solver]\n";
    emit_kv(out, "cfl", fmt_double(c.solver.cfl));
    emit_kv(out, "t_end", fmt_double(c.solver.t_end));
    emit_kv(out, "snap_every", std::to_string(c.solver.snap_every));
    emit_kv(out, "k_monitor", std::to_string(c.solver.k_monitor));
    emit_kv(out, "dealias", c.solver.dealias ? "true" : "false");
    emit_kv(out, "dt_fixed", fmt_double(c.solver.dt_fixed));
    emit_kv(out, "blowup_factor", fmt_double(c.solver.blowup_factor));
    emit_kv(out, "tail_threshold", fmt_double(c.solver.tail_threshold));
    emit_kv(out, "max_steps", std::to_string(c.solver.max_steps));
    return out;
}

}  // namespace

std::string ExperimentConfig::serialize() const {
    std::string out = serialize_solve_part(*this);
    out += "\n[profile]\n";
    emit_kv(out, "kind", profile.kind);
    emit_kv(out, "eps", fmt_double(profile.eps));
    if (!profile.file.empty()) emit_kv(out, "file", profile.file);
    out += "\n[wave]\n";
    emit_kv(out, "xi", join_ints(wave.xi.data(), 3));
    emit_kv(out, "a_dir", join_doubles(wave.a_dir.data(), 3));
    emit_kv(out, "harmonics", join_ints(wave.harmonics.data(), static_cast<int>(wave.harmonics.size())));
    emit_kv(out, "amplitude", fmt_double(wave.amplitude));
    emit_kv(out, "envelope", wave.envelope);
    emit_kv(out, "search", wave.search ? "true" : "false");
    emit_kv(out, "margin_fraction", fmt_double(wave.margin_fraction));
    out += "\n[budget]\n";
    emit_kv(out, "target_eps", fmt_double(budget.target_eps));
    emit_kv(out, "p", fmt_double(budget.p));
    emit_kv(out, "tau_fraction", fmt_double(budget.tau_fraction));
    return out;
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
    ExperimentConfig c;
    std::istringstream is(text);
    std::string line, section;
    std::set<std::string> seen;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error("line " + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        const std::string full = section.empty() ? key : section + "." + key;
        if (!seen.insert(full).second)
            throw config_error("line " + std::to_string(lineno) + ": duplicate key " + full);

        if (full == "seed") c.seed = parse_u64(full, val);
        else if (full == "grid.d") c.grid.d = parse_int(full, val);
        else if (full == "grid.n") c.grid.n = parse_int(full, val);
        else if (full == "pressure.kind") c.pressure.kind = val;
        else if (full == "pressure.coef") c.pressure.coef = parse_double(full, val);
        else if (full == "pressure.gamma") c.pressure.gamma = parse_double(full, val);
        else if (full == "pressure.file") c.pressure.file = val;
        else if (full == "initial.family") c.initial.family = val;
        else if (full == "initial.rho0") c.initial.rho0 = parse_double(full, val);
        else if (full == "initial.m0") c.initial.m0 = parse_tuple<3>(full, val, parse_double);
        else if (full == "initial.amplitude") c.initial.amplitude = parse_double(full, val);
        else if (full == "initial.width") c.initial.width = parse_double(full, val);
        else if (full == "initial.center") c.initial.center = parse_tuple<3>(full, val, parse_double);
        else if (full == "initial.max_mode") c.initial.max_mode = parse_int(full, val);
        else if (full == "initial.path") c.initial.path = val;
        else if (full == "solver.cfl") c.solver.cfl = parse_double(full, val);
        else if (full == "solver.t_end") c.solver.t_end = parse_double(full, val);
        else if (full == "solver.snap_every") c.solver.snap_every = parse_int(full, val);
        else if (full == "solver.k_monitor") c.solver.k_monitor = parse_int(full, val);
        else if (full == "solver.dealias") c.solver.dealias = parse_bool(full, val);
        else if (full == "solver.dt_fixed") c.solver.dt_fixed = parse_double(full, val);
        else if (full == "solver.blowup_factor") c.solver.blowup_factor = parse_double(full, val);
        else if (full == "solver.tail_threshold") c.solver.tail_threshold = parse_double(full, val);
        else if (full == "solver.max_steps") c.solver.max_steps = parse_ll(full, val);
        else if (full == "profile.kind") c.profile.kind = val;
        else if (full == "profile.eps") c.profile.eps = parse_double(full, val);
        else if (full == "profile.file") c.profile.file = val;
        else if (full == "wave.xi") c.wave.xi = parse_tuple<3>(full, val, parse_int);
        else if (full == "wave.a_dir") c.wave.a_dir = parse_tuple<3>(full, val, parse_double);
        else if (full == "wave.harmonics") c.wave.harmonics = parse_int_list(full, val);
        else if (full == "wave.amplitude") c.wave.amplitude = parse_double(full, val);
        else if (full == "wave.envelope") c.wave.envelope = val;
        else if (full == "wave.search") c.wave.search = parse_bool(full, val);
        else if (full == "wave.margin_fraction") c.wave.margin_fraction = parse_double(full, val);
        else if (full == "budget.target_eps") c.budget.target_eps = parse_double(full, val);
        else if (full == "budget.p") c.budget.p = parse_double(full, val);
        else if (full == "budget.tau_fraction") c.budget.tau_fraction = parse_double(full, val);
        else throw config_error("line " + std::to_string(lineno) + ": unknown key " + full);
    }
    c.validate();
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw io_error("cannot open config " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

void ExperimentConfig::save(const std::filesystem::path& file) const {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw io_error("cannot write config " + file.string());
    out << serialize();
    if (!out) throw io_error("failed writing config " + file.string());
}

void ExperimentConfig::validate() const {
    TorusGrid probe{grid.d, grid.n};  // range checks live in the grid type
    (void)probe;
    if (pressure.kind == "gamma_law") {
        if (!(pressure.coef > 0.0)) throw config_error("pressure.coef must be positive");
        if (!(pressure.gamma >= 1.0)) throw config_error("pressure.gamma must be >= 1");
    } else if (pressure.kind == "table") {
        if (pressure.file.empty()) throw config_error("pressure.kind = table needs pressure.file");
    } else {
        throw config_error("unknown pressure.kind '" + pressure.kind + "'");
    }

    const std::string& fam = initial.family;
    if (fam == "file") {
        if (initial.path.empty()) throw config_error("initial.family = file needs initial.path");
    } else if (fam == "constant" || fam == "acoustic" || fam == "gaussian_bump" ||
               fam == "random_low_mode") {
        if (!(initial.rho0 > 0.0)) throw config_error("initial.rho0 must be positive");
        if (!std::isfinite(initial.amplitude))
            throw config_error("initial.amplitude must be finite");
        if (fam == "gaussian_bump" && !(initial.width > 0.0))
            throw config_error("initial.width must be positive");
        if (fam == "random_low_mode" && initial.max_mode < 1)
            throw config_error("initial.max_mode must be >= 1");
    } else {
        throw config_error("unknown initial.family '" + fam + "'");
    }

    make_solver(*this).validate(grid.d);

    if (profile.kind == "exponential") {
        if (!(profile.eps > 0.0)) throw config_error("profile.eps must be positive");
    } else if (profile.kind == "table") {
        if (profile.file.empty()) throw config_error("profile.kind = table needs profile.file");
    } else {
        throw config_error("unknown profile.kind '" + profile.kind + "'");
    }

    if (wave.envelope != "sin_squared")
        throw config_error("unknown wave.envelope '" + wave.envelope + "'");
    if (wave.harmonics.empty()) throw config_error("wave.harmonics must not be empty");
    for (int n : wave.harmonics)
        if (n < 1) throw config_error("wave.harmonics entries must be >= 1");
    if (!(wave.margin_fraction > 0.0 && wave.margin_fraction <= 1.0))
        throw config_error("wave.margin_fraction must lie in (0,1]");
    if (wave.amplitude < 0.0) throw config_error("wave.amplitude must be >= 0");

    if (!(budget.target_eps > 0.0)) throw config_error("budget.target_eps must be positive");
    if (!(budget.p >= 1.0)) throw config_error("budget.p must be >= 1");
    if (!(budget.tau_fraction > 0.0 && budget.tau_fraction < 1.0))
        throw config_error("budget.tau_fraction must lie in (0,1)");
}

std::uint64_t ExperimentConfig::solve_hash() const { return fnv1a(serialize_solve_part(*this)); }

std::uint64_t ExperimentConfig::full_hash() const { return fnv1a(serialize()); }

namespace {

// Two-column numeric file, comma or whitespace separated; '#' comments.
void read_columns(const std::filesystem::path& file, std::vector<double>& col_a,
                  std::vector<double>& col_b) {
    std::ifstream in(file);
    if (!in) throw io_error("cannot open table " + file.string());
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        for (auto& ch : line)
            if (ch == ',') ch = ' ';
        const auto toks = split_ws(line);
        if (toks.empty()) continue;
        if (toks.size() != 2)
            throw io_error(file.string() + ":" + std::to_string(lineno) +
                           ": expected two numeric columns");
        const std::string where = file.string() + ":" + std::to_string(lineno);
        col_a.push_back(parse_double(where, toks[0]));
        col_b.push_back(parse_double(where, toks[1]));
    }
    if (col_a.empty()) throw io_error("table " + file.string() + " is empty");
}

}  // namespace

TorusGrid make_grid(const ExperimentConfig& cfg) { return TorusGrid{cfg.grid.d, cfg.grid.n}; }

PressureLaw make_pressure(const ExperimentConfig& cfg) {
    if (cfg.pressure.kind == "gamma_law")
        return PressureLaw::gamma_law(cfg.pressure.coef, cfg.pressure.gamma);
    if (cfg.pressure.kind != "table")
        throw config_error("unknown pressure.kind '" + cfg.pressure.kind + "'");
    std::vector<double> rho, p;
    read_columns(cfg.pressure.file, rho, p);
    return PressureLaw::from_table(rho, p);
}

SolverConfig make_solver(const ExperimentConfig& cfg) {
    SolverConfig sc;
    sc.cfl = cfg.solver.cfl;
    sc.t_end = cfg.solver.t_end;
    sc.snap_every = cfg.solver.snap_every;
    sc.k_monitor = cfg.solver.k_monitor;
    sc.dealias = cfg.solver.dealias;
    sc.dt_fixed = cfg.solver.dt_fixed;
    sc.blowup_factor = cfg.solver.blowup_factor;
    sc.tail_threshold = cfg.solver.tail_threshold;
    sc.max_steps = cfg.solver.max_steps;
    return sc;
}

EnergyProfile make_profile(const ExperimentConfig& cfg) {
    if (cfg.profile.kind == "exponential") return EnergyProfile::exponential(cfg.profile.eps);
    if (cfg.profile.kind != "table")
        throw config_error("unknown profile.kind '" + cfg.profile.kind + "'");
    std::vector<double> t, lam;
    read_columns(cfg.profile.file, t, lam);
    return EnergyProfile::from_table(t, lam);
}

Envelope make_envelope(const ExperimentConfig& cfg, double horizon) {
    if (cfg.wave.envelope != "sin_squared")
        throw config_error("unknown wave.envelope '" + cfg.wave.envelope + "'");
    return Envelope::sin_squared(horizon);
}

FlowState make_initial(const ExperimentConfig& cfg) {
    const TorusGrid g = make_grid(cfg);
    const auto& ic = cfg.initial;

    if (ic.family == "file") {
        FlowState st = load_state(ic.path);
        if (!(st.grid() == g))
            throw config_error("initial snapshot grid does not match [grid] section");
        st.time = 0.0;
        return st;
    }

    ScalarField rho;
    VectorField m(g);
    if (ic.family == "constant") {
        rho = ScalarField(g, ic.rho0);
    } else if (ic.family == "acoustic") {
        rho = ScalarField::sample(g, [&](const Point& x) {
            return ic.rho0 + ic.amplitude * std::cos(std::numbers::pi * x[0]);
        });
    } else if (ic.family == "gaussian_bump") {
        // Periodic bump exp((cos(pi y) - 1) / (pi w)^2) per axis: gaussian of
        // width w near the center, exactly periodic.
        const double shape = 1.0 / (std::numbers::pi * std::numbers::pi * ic.width * ic.width);
        rho = ScalarField::sample(g, [&](const Point& x) {
            double bump = 1.0;
            for (int c = 0; c < g.d; ++c)
                bump *= std::exp(shape * (std::cos(std::numbers::pi * (x[c] - ic.center[c])) - 1.0));
            return ic.rho0 + ic.amplitude * bump;
        });
    } else {
        // random_low_mode: draw cosine modes first so the field is identical
        // for every worker count.
        struct Mode {
            std::array<int, 3> k;
            double amp;
            double phase;
        };
        std::vector<std::array<int, 3>> canon;
        const int mm = ic.max_mode;
        for (int k0 = -mm; k0 <= mm; ++k0)
            for (int k1 = -mm; k1 <= mm; ++k1)
                for (int k2 = (g.d == 3 ? -mm : 0); k2 <= (g.d == 3 ? mm : 0); ++k2) {
                    const std::array<int, 3> k{k0, k1, k2};
                    if (k0 == 0 && k1 == 0 && k2 == 0) continue;
                    const int lead = k0 != 0 ? k0 : (k1 != 0 ? k1 : k2);
                    if (lead < 0) continue;  // cos makes k and -k the same mode
                    canon.push_back(k);
                }
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
        std::vector<Mode> modes;
        modes.reserve(canon.size());
        for (const auto& k : canon)
            modes.push_back({k, ic.amplitude * unit(rng) / static_cast<double>(canon.size()),
                             angle(rng)});
        rho = ScalarField::sample(g, [&](const Point& x) {
            double v = ic.rho0;
            for (const auto& md : modes) {
                double dot = 0.0;
                for (int c = 0; c < g.d; ++c) dot += md.k[c] * x[c];
                v += md.amp * std::cos(std::numbers::pi * dot + md.phase);
            }
            return v;
        });
    }

    for (int c = 0; c < g.d; ++c) {
        if (ic.m0[c] == 0.0) continue;
        par::parallel_for(g.points(), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) m.at(i, c) = ic.m0[c];
        });
    }

    if (!(min_value(rho) > 0.0))
        throw config_error("initial density is not positive everywhere; reduce the amplitude");
    return FlowState(std::move(rho), std::move(m), 0.0);
}

}  // namespace wildlab
