#include "wildlab/weak_form.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <numbers>

#include "wildlab/errors.hpp"
#include "wildlab/reduce.hpp"

namespace wildlab {

namespace {

constexpr double kPi = std::numbers::pi;

void check_test(const SmoothSolution& sol, const SpaceTimeTestFunction& test, WeakForm which) {
    if (sol.snaps.size() < 2) throw config_error("weak_residual needs at least two snapshots");
    const int d = sol.snaps.front().grid().d;
    const int want = which == WeakForm::momentum ? d : 1;
    if (test.components != want)
        throw config_error("test function has wrong component count for this form");
    if (which == WeakForm::energy && !test.nonnegative)
        throw config_error("energy form needs a nonnegative test function");
    const double T = sol.t_reached;
    const TorusGrid& g = sol.snaps.front().grid();
    for (std::size_t probe = 0; probe < 5; ++probe) {
        const std::size_t idx = (probe * 2654435761u) % g.points();
        for (int c = 0; c < test.components; ++c) {
            if (std::abs(test.value(T, g.point(idx), c)) > 1e-12)
                throw config_error("test function must vanish at the final time");
        }
    }
}

}  // namespace

double weak_residual(const SmoothSolution& sol, const PressureLaw& law,
                     const SpaceTimeTestFunction& test, WeakForm which) {
    check_test(sol, test, which);
    const FlowState& init = sol.snaps.front();
    const TorusGrid& g = init.grid();
    const int d = g.d;
    const auto& pfn = law.p_fn();
    const auto& potfn = law.potential_fn();

    auto snapshot_integral = [&](const FlowState& s) {
        const double t = s.time;
        switch (which) {
            case WeakForm::mass:
                return g.cell_volume() * det::sum_map(g.points(), [&](std::size_t i) {
                           const Point x = g.point(i);
                           double acc = (s.rho[i] - init.rho[i]) * test.dt(t, x, 0);
                           const Point grad = test.grad(t, x, 0);
                           for (int c = 0; c < d; ++c) acc += s.m.at(i, c) * grad[c];
                           return acc;
                       });
            case WeakForm::momentum:
                return g.cell_volume() * det::sum_map(g.points(), [&](std::size_t i) {
                           const Point x = g.point(i);
                           const double pr = pfn(s.rho[i]);
                           const double inv_rho = 1.0 / s.rho[i];
                           double acc = 0.0;
                           for (int a = 0; a < d; ++a) {
                               acc += (s.m.at(i, a) - init.m.at(i, a)) * test.dt(t, x, a);
                               const Point grad = test.grad(t, x, a);
                               for (int b = 0; b < d; ++b)
                                   acc += s.m.at(i, a) * s.m.at(i, b) * inv_rho * grad[b];
                               acc += pr * grad[a];
                           }
                           return acc;
                       });
            case WeakForm::energy:
                return g.cell_volume() * det::sum_map(g.points(), [&](std::size_t i) {
                           const Point x = g.point(i);
                           auto energy = [&](const FlowState& q) {
                               return 0.5 * q.m.magnitude_sq_at(i) / q.rho[i] +
                                      potfn(q.rho[i]);
                           };
                           const double E = energy(s);
                           double acc = (E - energy(init)) * test.dt(t, x, 0);
                           const Point grad = test.grad(t, x, 0);
                           const double flux = E + pfn(s.rho[i]);
                           for (int c = 0; c < d; ++c)
                               acc += flux * s.m.at(i, c) / s.rho[i] * grad[c];
                           return acc;
                       });
        }
        return 0.0;
    };

    double residual = 0.0;
    double prev_t = sol.snaps[0].time;
    double prev_i = snapshot_integral(sol.snaps[0]);
    for (std::size_t j = 1; j < sol.snaps.size(); ++j) {
        const double cur_t = sol.snaps[j].time;
        const double cur_i = snapshot_integral(sol.snaps[j]);
        residual += 0.5 * (cur_t - prev_t) * (prev_i + cur_i);
        prev_t = cur_t;
        prev_i = cur_i;
    }
    return residual;
}

namespace {

struct CosMode {
    std::array<int, 3> m{0, 0, 0};
    double amp = 0.0;
    double phase = 0.0;
};

std::vector<CosMode> draw_modes(int d, int count, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> comp(-2, 2);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
    std::vector<CosMode> out;
    while (static_cast<int>(out.size()) < count) {
        CosMode mode;
        bool nonzero = false;
        for (int a = 0; a < d; ++a) {
            mode.m[a] = comp(rng);
            nonzero = nonzero || mode.m[a] != 0;
        }
        if (!nonzero) continue;
        mode.amp = amp(rng);
        mode.phase = phase(rng);
        out.push_back(mode);
    }
    return out;
}

double eval_modes(const std::vector<CosMode>& modes, const Point& x, int d) {
    double s = 0.0;
    for (const auto& mo : modes) {
        double arg = mo.phase;
        for (int a = 0; a < d; ++a) arg += kPi * mo.m[a] * x[a];
        s += mo.amp * std::cos(arg);
    }
    return s;
}

Point eval_modes_grad(const std::vector<CosMode>& modes, const Point& x, int d) {
    Point gr{0.0, 0.0, 0.0};
    for (const auto& mo : modes) {
        double arg = mo.phase;
        for (int a = 0; a < d; ++a) arg += kPi * mo.m[a] * x[a];
        const double s = -mo.amp * std::sin(arg);
        for (int a = 0; a < d; ++a) gr[a] += s * kPi * mo.m[a];
    }
    return gr;
}

SpaceTimeTestFunction modal_test(int d, int components, double T, std::mt19937_64& rng,
                                 int modes) {
    auto parts = std::make_shared<std::vector<std::vector<CosMode>>>();
    for (int c = 0; c < components; ++c) parts->push_back(draw_modes(d, modes, rng));
    const double a = kPi / (2.0 * T);
    SpaceTimeTestFunction test;
    test.components = components;
    test.horizon = T;
    test.label = components == 1 ? "random_scalar" : "random_vector";
    test.value = [parts, a, d](double t, const Point& x, int c) {
        const double ca = std::cos(a * t);
        return ca * ca * eval_modes((*parts)[c], x, d);
    };
    test.dt = [parts, a, d](double t, const Point& x, int c) {
        return -a * std::sin(2.0 * a * t) * eval_modes((*parts)[c], x, d);
    };
    test.grad = [parts, a, d](double t, const Point& x, int c) {
        const double ca = std::cos(a * t);
        Point gr = eval_modes_grad((*parts)[c], x, d);
        for (int j = 0; j < 3; ++j) gr[j] *= ca * ca;
        return gr;
    };
    return test;
}

}  // namespace

SpaceTimeTestFunction random_scalar_test(const TorusGrid& g, double T, std::mt19937_64& rng,
                                         int modes) {
    return modal_test(g.d, 1, T, rng, modes);
}

SpaceTimeTestFunction random_vector_test(const TorusGrid& g, double T, std::mt19937_64& rng,
                                         int modes) {
    return modal_test(g.d, g.d, T, rng, modes);
}

SpaceTimeTestFunction constant_energy_test(double T) {
    const double a = kPi / (2.0 * T);
    SpaceTimeTestFunction test;
    test.components = 1;
    test.horizon = T;
    test.nonnegative = true;
    test.label = "constant_energy";
    test.value = [a](double t, const Point&, int) {
        const double ca = std::cos(a * t);
        return ca * ca;
    };
    test.dt = [a](double t, const Point&, int) { return -a * std::sin(2.0 * a * t); };
    test.grad = [](double, const Point&, int) { return Point{0.0, 0.0, 0.0}; };
    return test;
}

EnergySeries total_energy_profile(const SmoothSolution& sol, const PressureLaw& law) {
    EnergySeries out;
    for (const auto& s : sol.snaps) {
        out.t.push_back(s.time);
        out.energy.push_back(s.total_energy(law));
    }
    out.initial = out.energy.empty() ? 0.0 : out.energy.front();
    for (double e : out.energy) {
        out.max_drift = std::max(out.max_drift, std::abs(e - out.initial));
        out.max_increase = std::max(out.max_increase, e - out.initial);
    }
    return out;
}

}  // namespace wildlab
