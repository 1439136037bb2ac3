#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "wildlab/ansatz.hpp"
#include "wildlab/eig.hpp"
#include "wildlab/errors.hpp"
#include "wildlab/norms.hpp"

using namespace wildlab;
using std::numbers::pi;

namespace {

FlowState random_state(const TorusGrid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> rho_d(0.5, 2.0), m_d(-1.0, 1.0);
    ScalarField rho(g);
    VectorField m(g);
    for (std::size_t i = 0; i < rho.size(); ++i) {
        rho[i] = rho_d(rng);
        for (int c = 0; c < g.d; ++c) m.at(i, c) = m_d(rng);
    }
    return FlowState(std::move(rho), std::move(m));
}

}  // namespace

TEST_CASE("deviatoric flux H is symmetric, traceless, and entrywise correct") {
    for (int d : {2, 3}) {
        TorusGrid g(d, 8);
        FlowState s = random_state(g, 7 + d);
        SymTensorField H = build_H(s);
        CHECK(H.traceless());
        CHECK(H.traceless_violation() < 1e-15);
        for (std::size_t i = 0; i < s.rho.size(); i += 17) {
            const double inv_rho = 1.0 / s.rho[i];
            const double tp = s.m.magnitude_sq_at(i) * inv_rho / d;
            for (int a = 0; a < d; ++a)
                for (int b = a; b < d; ++b) {
                    const double want =
                        s.m.at(i, a) * s.m.at(i, b) * inv_rho - (a == b ? tp : 0.0);
                    CHECK(H.at(i, a, b) == doctest::Approx(want).epsilon(1e-15));
                }
        }
    }
}

TEST_CASE("largest eigenvalue of the margin bracket recovers the kinetic energy") {
    // subtracting the deviatoric flux from m (x) m / rho leaves the isotropic
    // part (|m|^2 / d rho) I, so (d/2) lambda_max of it is 1/2 |m|^2 / rho
    for (int d : {2, 3}) {
        TorusGrid g(d, 8);
        FlowState s = random_state(g, 21 + d);
        SymTensorField H = build_H(s);
        double worst = 0.0;
        for (std::size_t i = 0; i < s.rho.size(); ++i) {
            const double inv_rho = 1.0 / s.rho[i];
            double packed[6];
            int k = 0;
            for (int a = 0; a < d; ++a)
                for (int b = a; b < d; ++b, ++k)
                    packed[k] = s.m.at(i, a) * s.m.at(i, b) * inv_rho - H.at(i, a, b);
            const double lhs = 0.5 * d * lambda_max_packed(packed, d);
            const double rhs = 0.5 * s.m.magnitude_sq_at(i) * inv_rho;
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("kinetic energy target needs a positive profile") {
    TorusGrid g(2, 8);
    FlowState s = random_state(g, 3);
    EnergyProfile prof = EnergyProfile::exponential(0.5);

    ScalarField e = build_e(s, prof, 0.25);
    for (std::size_t i = 0; i < e.size(); i += 13) {
        const double want = 0.5 * s.m.magnitude_sq_at(i) / s.rho[i] + prof.lambda(0.25);
        CHECK(e[i] == doctest::Approx(want).epsilon(1e-15));
        CHECK(e[i] > 0.0);
    }

    EnergyProfile dead = EnergyProfile::custom([](double) { return 0.0; },
                                               [](double) { return 0.0; });
    CHECK_THROWS_AS(build_e(s, dead, 0.0), config_error);
}

TEST_CASE("energy profiles") {
    SUBCASE("exponential closed form") {
        const double eps = 0.3;
        EnergyProfile prof = EnergyProfile::exponential(eps);
        CHECK(prof.eps() == eps);
        CHECK(prof.is_exponential());
        CHECK(prof.lambda(0.0) == eps);
        CHECK(prof.dlambda(0.0) == doctest::Approx(-1.0 / eps).epsilon(1e-15));
        for (double t : {0.1, 0.5, 2.0}) {
            CHECK(prof.lambda(t) ==
                  doctest::Approx(eps * std::exp(-t / (eps * eps))).epsilon(1e-15));
            CHECK(prof.dlambda(t) ==
                  doctest::Approx(-prof.lambda(t) / (eps * eps)).epsilon(1e-14));
        }
        prof.verify(3.0);
        CHECK_THROWS_AS(EnergyProfile::exponential(0.0), config_error);
    }

    SUBCASE("verification catches bad custom pairs") {
        EnergyProfile lying = EnergyProfile::custom(
            [](double t) { return std::exp(-t); }, [](double) { return -2.0; });
        CHECK_THROWS_AS(lying.verify(1.0), config_error);

        EnergyProfile growing = EnergyProfile::custom(
            [](double t) { return 1.0 + t; }, [](double) { return 1.0; });
        CHECK_THROWS_AS(growing.verify(1.0), config_error);

        EnergyProfile ok = EnergyProfile::custom(
            [](double t) { return 2.0 * std::exp(-3.0 * t); },
            [](double t) { return -6.0 * std::exp(-3.0 * t); });
        ok.verify(2.0);
    }

    SUBCASE("table profile tracks its generator") {
        const double eps = 0.4;
        EnergyProfile gen = EnergyProfile::exponential(eps);
        std::vector<double> t, lam;
        for (int i = 0; i <= 64; ++i) {
            t.push_back(i / 64.0);
            lam.push_back(gen.lambda(t.back()));
        }
        EnergyProfile tab = EnergyProfile::from_table(t, lam);
        CHECK(tab.kind() == "table");
        tab.verify(1.0);
        double worst = 0.0;
        for (int k = 0; k <= 500; ++k) {
            const double tt = k / 500.0;
            worst = std::max(worst, std::abs(tab.lambda(tt) - gen.lambda(tt)));
        }
        CHECK(worst < 5e-5);
        CHECK_THROWS_AS(EnergyProfile::from_table({0.0, 1.0}, {1.0, -1.0}), config_error);
        CHECK_THROWS_AS(EnergyProfile::from_table({0.0}, {1.0}), config_error);
    }
}

TEST_CASE("ansatz fields follow the snapshot cadence") {
    TorusGrid g(2, 16);
    SpectralWorkspace ws(g);
    PressureLaw law = PressureLaw::gamma_law(1.0, 2.0);
    FlowState init(ScalarField::sample(
                       g, [](const Point& x) { return 1.0 + 1e-3 * std::cos(pi * x[0]); }),
                   VectorField(g));
    SolverConfig cfg;
    cfg.t_end = 0.1;
    SmoothSolution sol = solve_smooth(init, law, cfg, ws);

    EnergyProfile prof = EnergyProfile::exponential(0.5);
    AnsatzFields an = AnsatzFields::build(sol, prof);
    REQUIRE(an.times.size() == sol.snaps.size());
    REQUIRE(an.H.size() == sol.snaps.size());
    REQUIRE(an.e.size() == sol.snaps.size());
    CHECK(an.profile.has_value());
    for (std::size_t k = 0; k < an.times.size(); ++k) {
        CHECK(an.times[k] == sol.snaps[k].time);
        CHECK(an.H[k].traceless_violation() < 1e-15);
        CHECK(min_value(an.e[k]) >= prof.lambda(an.times[k]));
    }
}

TEST_CASE("reformulation gap closes exactly on the constraint set") {
    TorusGrid g(2, 32);
    SpectralWorkspace ws(g);
    EnergyProfile prof = EnergyProfile::exponential(0.5);
    const double t = 0.1;
    const double lam = prof.lambda(t);
    FlowState s(ScalarField(g, 1.0), VectorField(g));

    SUBCASE("v = 0 leaves the full profile as deviation") {
        ReformulationCheck chk = reformulation_gap(VectorField(g), s, prof, t, ws);
        CHECK(chk.gap < 1e-12);
        CHECK(chk.constraint_deviation == doctest::Approx(lam).epsilon(1e-15));
        CHECK(chk.div_v < 1e-15);
    }

    SUBCASE("a pointwise-constraint solution has vanishing gap") {
        const double speed = std::sqrt(2.0 * lam);
        auto v = VectorField::sample(g, [&](const Point& x) {
            return std::array<double, 3>{speed * std::cos(pi * x[0]),
                                         speed * std::sin(pi * x[0]), 0.0};
        });
        ReformulationCheck chk = reformulation_gap(v, s, prof, t, ws);
        CHECK(chk.constraint_deviation < 1e-15);
        CHECK(chk.gap < 1e-11);
        CHECK(chk.div_v == doctest::Approx(speed * pi).epsilon(1e-10));
    }
}
