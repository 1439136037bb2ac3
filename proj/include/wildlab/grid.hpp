#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>

namespace wildlab {

using Point = std::array<double, 3>;

// Uniform collocated grid on the periodic cube [-1,1]^d (period 2 per axis,
// so fundamental wavenumbers are integer multiples of pi).
struct TorusGrid {
    int d = 2;  // spatial dimension, 2 or 3
    int n = 64; // points per axis, power of two, >= 8

    TorusGrid() = default;
    TorusGrid(int d_, int n_) : d(d_), n(n_) {
        if (d != 2 && d != 3) throw std::invalid_argument("grid dimension must be 2 or 3");
        if (n < 8 || (n & (n - 1)) != 0)
            throw std::invalid_argument("grid size per axis must be a power of two >= 8");
    }

    double h() const { return 2.0 / n; }

    std::size_t points() const {
        std::size_t p = 1;
        for (int i = 0; i < d; ++i) p *= static_cast<std::size_t>(n);
        return p;
    }

    double cell_volume() const {
        double v = 1.0;
        for (int i = 0; i < d; ++i) v *= h();
        return v;
    }

    double volume() const {
        double v = 1.0;
        for (int i = 0; i < d; ++i) v *= 2.0;
        return v;
    }

    double coord(int i) const { return -1.0 + h() * i; }

    // Row-major flattening; unused trailing axis stays zero in 2D.
    std::array<int, 3> unravel(std::size_t idx) const {
        std::array<int, 3> ix{0, 0, 0};
        const auto un = static_cast<std::size_t>(n);
        if (d == 2) {
            ix[1] = static_cast<int>(idx % un);
            ix[0] = static_cast<int>(idx / un);
        } else {
            ix[2] = static_cast<int>(idx % un);
            idx /= un;
            ix[1] = static_cast<int>(idx % un);
            ix[0] = static_cast<int>(idx / un);
        }
        return ix;
    }

    Point point(std::size_t idx) const {
        const auto ix = unravel(idx);
        return {coord(ix[0]), coord(ix[1]), d == 3 ? coord(ix[2]) : 0.0};
    }

    bool operator==(const TorusGrid&) const = default;
};

}  // namespace wildlab
