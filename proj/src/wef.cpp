#include "wildlab/wef.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>

#include "wildlab/errors.hpp"

namespace wildlab {

namespace {

std::string format_time(double t) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", t);
    return buf;
}

void write_block(std::ofstream& os, const std::string& name, const char* kind,
                 const std::vector<std::span<const double>>& comps, std::size_t npts) {
    if (name.empty() || name.find_first_of(" \n\t") != std::string::npos)
        throw io_error("field name must be nonempty without whitespace: '" + name + "'");
    os << name << ' ' << kind << '\n';
    const std::size_t nc = comps.size();
    std::vector<double> row(nc);
    for (std::size_t i = 0; i < npts; ++i) {
        for (std::size_t c = 0; c < nc; ++c) row[c] = comps[c][i];
        os.write(reinterpret_cast<const char*>(row.data()),
                 static_cast<std::streamsize>(nc * sizeof(double)));
    }
}

void read_block(std::ifstream& is, std::vector<std::span<double>> comps, std::size_t npts) {
    const std::size_t nc = comps.size();
    std::vector<double> row(nc);
    for (std::size_t i = 0; i < npts; ++i) {
        is.read(reinterpret_cast<char*>(row.data()),
                static_cast<std::streamsize>(nc * sizeof(double)));
        for (std::size_t c = 0; c < nc; ++c) comps[c][i] = row[c];
    }
    if (!is) throw io_error("truncated WEF1 field data");
}

}  // namespace

void save_wef(const std::filesystem::path& path, const WefSnapshot& snap) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw io_error("cannot open for writing: " + path.string());
    const std::size_t count = snap.scalars.size() + snap.vectors.size() + snap.tensors.size();
    os << "WEF1 d=" << snap.grid.d << " n=" << snap.grid.n << " fields=" << count
       << " time=" << format_time(snap.time) << '\n';
    const std::size_t npts = snap.grid.points();
    for (const auto& [name, f] : snap.scalars) {
        require_same_grid(f.grid(), snap.grid, "save_wef");
        write_block(os, name, "scalar", {f.data()}, npts);
    }
    for (const auto& [name, v] : snap.vectors) {
        require_same_grid(v.grid(), snap.grid, "save_wef");
        std::vector<std::span<const double>> comps;
        for (int c = 0; c < snap.grid.d; ++c) comps.push_back(v.comp(c));
        write_block(os, name, "vector", comps, npts);
    }
    for (const auto& [name, s] : snap.tensors) {
        require_same_grid(s.grid(), snap.grid, "save_wef");
        std::vector<std::span<const double>> comps;
        for (int c = 0; c < s.packed(); ++c) comps.push_back(s.comp(c));
        write_block(os, name, "symtensor", comps, npts);
    }
    if (!os) throw io_error("write failed: " + path.string());
}

WefSnapshot load_wef(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io_error("cannot open: " + path.string());
    std::string header;
    if (!std::getline(is, header)) throw io_error("empty WEF1 file: " + path.string());
    int d = 0, n = 0, count = 0;
    double time = 0.0;
    if (std::sscanf(header.c_str(), "WEF1 d=%d n=%d fields=%d time=%lg", &d, &n, &count,
                    &time) != 4)
        throw io_error("bad WEF1 header: '" + header + "'");

    WefSnapshot snap;
    snap.grid = TorusGrid{d, n};
    snap.time = time;
    const std::size_t npts = snap.grid.points();
    for (int k = 0; k < count; ++k) {
        std::string line;
        if (!std::getline(is, line)) throw io_error("missing field header in " + path.string());
        const auto sep = line.find(' ');
        if (sep == std::string::npos) throw io_error("bad field header: '" + line + "'");
        const std::string name = line.substr(0, sep);
        const std::string kind = line.substr(sep + 1);
        if (kind == "scalar") {
            ScalarField f(snap.grid);
            read_block(is, {f.data()}, npts);
            snap.scalars.emplace_back(name, std::move(f));
        } else if (kind == "vector") {
            VectorField v(snap.grid);
            std::vector<std::span<double>> comps;
            for (int c = 0; c < d; ++c) comps.push_back(v.comp(c));
            read_block(is, comps, npts);
            snap.vectors.emplace_back(name, std::move(v));
        } else if (kind == "symtensor") {
            SymTensorField s(snap.grid);
            std::vector<std::span<double>> comps;
            for (int c = 0; c < s.packed(); ++c) comps.push_back(s.comp(c));
            read_block(is, comps, npts);
            snap.tensors.emplace_back(name, std::move(s));
        } else {
            throw io_error("unknown field kind: '" + kind + "'");
        }
    }
    return snap;
}

void save_state(const std::filesystem::path& path, const FlowState& state) {
    WefSnapshot snap;
    snap.grid = state.grid();
    snap.time = state.time;
    snap.scalars.emplace_back("rho", state.rho);
    snap.vectors.emplace_back("m", state.m);
    save_wef(path, snap);
}

FlowState load_state(const std::filesystem::path& path) {
    WefSnapshot snap = load_wef(path);
    const ScalarField* rho = nullptr;
    const VectorField* m = nullptr;
    for (const auto& [name, f] : snap.scalars)
        if (name == "rho") rho = &f;
    for (const auto& [name, v] : snap.vectors)
        if (name == "m") m = &v;
    if (!rho || !m) throw io_error("WEF1 state needs fields 'rho' and 'm': " + path.string());
    return FlowState(*rho, *m, snap.time);
}

}  // namespace wildlab
