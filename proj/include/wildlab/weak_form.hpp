#pragma once

#include <functional>
#include <random>
#include <string>

#include "wildlab/solver.hpp"

namespace wildlab {

// C^1 space-time test function on [0,T] x T^d, given by closures per
// component: value(t,x,c), time derivative dt(t,x,c), and the spatial
// gradient grad(t,x,c) of component c. Must vanish identically at t = T.
struct SpaceTimeTestFunction {
    int components = 1;       // 1 (scalar) or d (vector)
    double horizon = 0.0;     // T the test was built for
    bool nonnegative = false; // required by the energy form
    std::string label;
    std::function<double(double, const Point&, int)> value;
    std::function<double(double, const Point&, int)> dt;
    std::function<Point(double, const Point&, int)> grad;
};

enum class WeakForm { mass, momentum, energy };

// Residual of the weak formulation over the trajectory, trapezoid in time
// over the snapshots and exact grid quadrature in space. Because the test
// vanishes at the final time, the initial-data term equals minus the time
// integral of d/dt integral(data0 * phi); folding it in gives an integrand
// built from (rho - rho0), (m - m0), (E - E0), which vanishes identically on
// constant trajectories instead of leaving two large cancelling terms to the
// quadrature. Mass and momentum return a signed residual that should be ~0;
// the energy form returns the expression whose nonnegativity is required.
double weak_residual(const SmoothSolution& sol, const PressureLaw& law,
                     const SpaceTimeTestFunction& test, WeakForm which);

// Random low-mode tests: spatial part is a sum of `modes` cosine modes with
// wavevector components in {-2,...,2} (never the zero vector, hence mean
// zero), amplitudes uniform in [-1,1] and uniform phases; temporal factor
// cos^2(pi t / (2T)) vanishing at T.
SpaceTimeTestFunction random_scalar_test(const TorusGrid& g, double T, std::mt19937_64& rng,
                                         int modes = 2);
SpaceTimeTestFunction random_vector_test(const TorusGrid& g, double T, std::mt19937_64& rng,
                                         int modes = 2);

// phi(t,x) = cos^2(pi t / (2T)): spatially constant, nonnegative, vanishes
// at T; the energy residual with this test measures energy conservation.
SpaceTimeTestFunction constant_energy_test(double T);

struct EnergySeries {
    std::vector<double> t;
    std::vector<double> energy;  // integral of 1/2 |m|^2/rho + P(rho)
    double initial = 0.0;
    double max_drift = 0.0;      // max |E(t) - E(0)|
    double max_increase = 0.0;   // max (E(t) - E(0))
};
EnergySeries total_energy_profile(const SmoothSolution& sol, const PressureLaw& law);

}  // namespace wildlab
