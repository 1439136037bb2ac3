#include "wildlab/norms.hpp"

#include <cmath>
#include <stdexcept>

#include "wildlab/reduce.hpp"

namespace wildlab {

double integral(const ScalarField& f) {
    return f.grid().cell_volume() * det::sum_map(f.size(), [&](std::size_t i) { return f[i]; });
}

double mean_value(const ScalarField& f) { return integral(f) / f.grid().volume(); }

double lp_norm(const ScalarField& f, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm needs p >= 1");
    const double s = det::sum_map(f.size(), [&](std::size_t i) {
        return std::pow(std::abs(f[i]), p);
    });
    return std::pow(f.grid().cell_volume() * s, 1.0 / p);
}

double lp_norm(const VectorField& v, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm needs p >= 1");
    const double s = det::sum_map(v.size(), [&](std::size_t i) {
        return std::pow(v.magnitude_at(i), p);
    });
    return std::pow(v.grid().cell_volume() * s, 1.0 / p);
}

double linf_norm(const ScalarField& f) {
    return det::max_map(f.size(), [&](std::size_t i) { return std::abs(f[i]); });
}

double linf_norm(const VectorField& v) {
    return det::max_map(v.size(), [&](std::size_t i) { return v.magnitude_at(i); });
}

double min_value(const ScalarField& f) {
    return det::min_map(f.size(), [&](std::size_t i) { return f[i]; });
}

double max_value(const ScalarField& f) {
    return det::max_map(f.size(), [&](std::size_t i) { return f[i]; });
}

}  // namespace wildlab
