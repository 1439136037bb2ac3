#pragma once

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "wildlab/grid.hpp"
#include "wildlab/reduce.hpp"

namespace wildlab {

class ScalarField {
  public:
    ScalarField() = default;
    explicit ScalarField(const TorusGrid& g, double fill = 0.0) : grid_(g), v_(g.points(), fill) {}

    template <class F>
    static ScalarField sample(const TorusGrid& g, F&& f) {
        ScalarField out(g);
        par::parallel_for(g.points(), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) out.v_[i] = f(g.point(i));
        });
        return out;
    }

    const TorusGrid& grid() const { return grid_; }
    std::size_t size() const { return v_.size(); }
    double operator[](std::size_t i) const { return v_[i]; }
    double& operator[](std::size_t i) { return v_[i]; }
    std::span<const double> data() const { return v_; }
    std::span<double> data() { return v_; }

  private:
    TorusGrid grid_;
    std::vector<double> v_;
};

class VectorField {
  public:
    VectorField() = default;
    explicit VectorField(const TorusGrid& g) : grid_(g) {
        for (int c = 0; c < g.d; ++c) comp_[c].assign(g.points(), 0.0);
    }

    // f maps a point to d components (third ignored in 2D).
    template <class F>
    static VectorField sample(const TorusGrid& g, F&& f) {
        VectorField out(g);
        par::parallel_for(g.points(), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                const std::array<double, 3> val = f(g.point(i));
                for (int c = 0; c < g.d; ++c) out.comp_[c][i] = val[c];
            }
        });
        return out;
    }

    const TorusGrid& grid() const { return grid_; }
    int components() const { return grid_.d; }
    std::size_t size() const { return comp_[0].size(); }
    std::span<const double> comp(int c) const { return comp_[c]; }
    std::span<double> comp(int c) { return comp_[c]; }
    double at(std::size_t i, int c) const { return comp_[c][i]; }
    double& at(std::size_t i, int c) { return comp_[c][i]; }

    double magnitude_sq_at(std::size_t i) const {
        double s = 0.0;
        for (int c = 0; c < grid_.d; ++c) s += comp_[c][i] * comp_[c][i];
        return s;
    }
    double magnitude_at(std::size_t i) const { return std::sqrt(magnitude_sq_at(i)); }

  private:
    TorusGrid grid_;
    std::array<std::vector<double>, 3> comp_;
};

// Symmetric tensor with upper-triangle storage.
// Packed order: 2D (xx, xy, yy); 3D (xx, xy, xz, yy, yz, zz).
class SymTensorField {
  public:
    SymTensorField() = default;
    explicit SymTensorField(const TorusGrid& g, bool traceless = false)
        : grid_(g), traceless_(traceless) {
        for (int c = 0; c < packed_count(g.d); ++c) comp_[c].assign(g.points(), 0.0);
    }

    static int packed_count(int d) { return d == 2 ? 3 : 6; }

    static int pack_index(int d, int i, int j) {
        if (i > j) std::swap(i, j);
        if (d == 2) return i == 0 ? j : 2;
        static constexpr int map3[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
        return map3[i][j];
    }

    const TorusGrid& grid() const { return grid_; }
    int packed() const { return packed_count(grid_.d); }
    std::size_t size() const { return comp_[0].size(); }
    bool traceless() const { return traceless_; }
    void set_traceless(bool t) { traceless_ = t; }

    std::span<const double> comp(int c) const { return comp_[c]; }
    std::span<double> comp(int c) { return comp_[c]; }
    double at(std::size_t p, int i, int j) const { return comp_[pack_index(grid_.d, i, j)][p]; }
    double& at(std::size_t p, int i, int j) { return comp_[pack_index(grid_.d, i, j)][p]; }

    double trace_at(std::size_t p) const {
        double t = 0.0;
        for (int i = 0; i < grid_.d; ++i) t += at(p, i, i);
        return t;
    }

    double frobenius_at(std::size_t p) const {
        double s = 0.0;
        for (int i = 0; i < grid_.d; ++i)
            for (int j = 0; j < grid_.d; ++j) {
                const double v = at(p, i, j);
                s += v * v;
            }
        return std::sqrt(s);
    }

    // Worst-case violation of the traceless bound |tr| <= tol * (|A|_F + 1).
    double traceless_violation() const {
        return det::max_map(size(), [&](std::size_t p) {
            return std::abs(trace_at(p)) / (frobenius_at(p) + 1.0);
        });
    }

  private:
    TorusGrid grid_;
    std::array<std::vector<double>, 6> comp_;
    bool traceless_ = false;
};

inline void require_same_grid(const TorusGrid& a, const TorusGrid& b, const char* what) {
    if (!(a == b)) throw std::invalid_argument(std::string("grid mismatch in ") + what);
}

}  // namespace wildlab
