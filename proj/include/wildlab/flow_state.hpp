#pragma once

#include "wildlab/field.hpp"
#include "wildlab/norms.hpp"
#include "wildlab/pressure.hpp"

namespace wildlab {

// Conservative variables (rho, m) at one instant; m = rho * u.
struct FlowState {
    ScalarField rho;
    VectorField m;
    double time = 0.0;

    FlowState() = default;
    FlowState(ScalarField r, VectorField mom, double t = 0.0)
        : rho(std::move(r)), m(std::move(mom)), time(t) {
        require_same_grid(rho.grid(), m.grid(), "FlowState");
    }

    const TorusGrid& grid() const { return rho.grid(); }

    VectorField velocity() const {
        VectorField u(grid());
        par::parallel_for(rho.size(), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i)
                for (int c = 0; c < grid().d; ++c) u.at(i, c) = m.at(i, c) / rho[i];
        });
        return u;
    }

    ScalarField kinetic_energy_density() const {
        ScalarField k(grid());
        par::parallel_for(rho.size(), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i)
                k[i] = 0.5 * m.magnitude_sq_at(i) / rho[i];
        });
        return k;
    }

    // integral of 1/2 |m|^2 / rho + P(rho)
    double total_energy(const PressureLaw& law) const {
        ScalarField dens(grid());
        par::parallel_for(rho.size(), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i)
                dens[i] = 0.5 * m.magnitude_sq_at(i) / rho[i] + law.potential(rho[i]);
        });
        return integral(dens);
    }
};

}  // namespace wildlab
