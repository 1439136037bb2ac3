#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "wildlab/errors.hpp"
#include "wildlab/norms.hpp"
#include "wildlab/subsolution.hpp"

using namespace wildlab;
using std::numbers::pi;

namespace {

SmoothSolution constant_solve(const TorusGrid& g, SpectralWorkspace& ws, double rho0,
                              std::array<double, 3> m0, double t_end) {
    PressureLaw law = PressureLaw::gamma_law(1.0, 2.0);
    FlowState init(ScalarField(g, rho0),
                   VectorField::sample(g, [&](const Point&) { return m0; }));
    SolverConfig cfg;
    cfg.t_end = t_end;
    cfg.cfl = 0.9;
    SmoothSolution sol = solve_smooth(init, law, cfg, ws);
    REQUIRE(!sol.blowup);
    return sol;
}

EnergyProfile constant_profile(double level) {
    return EnergyProfile::custom([level](double) { return level; }, [](double) { return 0.0; },
                                 "constant");
}

}  // namespace

TEST_CASE("sin-squared envelope") {
    const double T = 0.7;
    Envelope env = Envelope::sin_squared(T);
    CHECK(env.chi(0.0) == 0.0);
    CHECK(env.chi(T) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(env.chi(0.5 * T) == doctest::Approx(1.0).epsilon(1e-15));
    for (double t : {0.1, 0.33, 0.6})
        CHECK(env.dchi(t) ==
              doctest::Approx(oracle::fd_derivative(env.chi, t, 1e-4)).epsilon(1e-9));
    env.verify(T);

    Envelope bad_deriv = Envelope::custom(
        [T](double t) { return std::sin(pi * t / T); }, [](double) { return 0.0; });
    CHECK_THROWS_AS(bad_deriv.verify(T), config_error);

    Envelope bad_end = Envelope::custom([](double) { return 1.0; }, [](double) { return 0.0; });
    CHECK_THROWS_AS(bad_end.verify(T), config_error);
}

TEST_CASE("plane wave construction is validated") {
    TorusGrid g(2, 16);
    const double T = 1.0;
    Envelope env = Envelope::sin_squared(T);

    PlaneWaveSpec ok;
    ok.xi = {1, 0, 0};
    ok.a_dir = {0.0, 1.0, 0.0};
    ok.harmonic = 2;
    ok.amplitude = 0.1;
    SubsolutionCandidate cand = SubsolutionCandidate::plane_wave(g, T, ok, env);
    CHECK(cand.waves().size() == 1);

    PlaneWaveSpec bad = ok;
    bad.a_dir = {0.5, 1.0, 0.0};  // not orthogonal to xi
    CHECK_THROWS_AS(cand.add_wave(bad), config_error);
    bad = ok;
    bad.xi = {0, 0, 0};
    CHECK_THROWS_AS(cand.add_wave(bad), config_error);
    bad = ok;
    bad.a_dir = {0.0, 0.0, 0.0};
    CHECK_THROWS_AS(cand.add_wave(bad), config_error);
    bad = ok;
    bad.harmonic = 0;
    CHECK_THROWS_AS(cand.add_wave(bad), config_error);
    bad = ok;
    bad.harmonic = 16;  // 16 > 16/3: outside the dealias band
    CHECK_THROWS_AS(cand.add_wave(bad), config_error);
    bad = ok;
    bad.xi = {1, 0, 1};  // third component in 2D
    CHECK_THROWS_AS(cand.add_wave(bad), config_error);
}

TEST_CASE("plane wave fields match the closed form") {
    TorusGrid g(2, 32);
    SpectralWorkspace ws(g);
    const double T = 0.8;
    Envelope env = Envelope::sin_squared(T);
    PlaneWaveSpec spec;
    spec.xi = {2, 1, 0};
    const double nrm = std::sqrt(5.0);
    spec.a_dir = {-1.0 / nrm, 2.0 / nrm, 0.0};  // orthogonal to xi... check below
    spec.harmonic = 3;
    spec.amplitude = 0.25;

    // a . xi = (-1*2 + 2*1)/nrm = 0 exactly in floating point
    SubsolutionCandidate cand = SubsolutionCandidate::plane_wave(g, T, spec, env);

    const double t = 0.3;
    VectorField v = cand.v_at(t);
    const double chi = env.chi(t);
    double err = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point x = g.point(i);
        const double phase = pi * 3 * (2 * x[0] + 1 * x[1]);
        for (int c = 0; c < 2; ++c)
            err = std::max(err, std::abs(v.at(i, c) - spec.amplitude * chi *
                                                          spec.a_dir[c] * std::cos(phase)));
        const Point vp = cand.v_point(t, x);
        for (int c = 0; c < 2; ++c) err = std::max(err, std::abs(vp[c] - v.at(i, c)));
    }
    CHECK(err < 1e-14);

    SymTensorField F = cand.flux_at(t);
    CHECK(F.traceless_violation() < 1e-15);

    // time derivative of v against a finite difference of the closed form
    VectorField dv = cand.dvdt_at(t);
    double fd_err = 0.0;
    for (std::size_t i = 0; i < v.size(); i += 37) {
        const Point x = g.point(i);
        for (int c = 0; c < 2; ++c) {
            const double fd = oracle::fd_derivative(
                [&](double s) { return cand.v_point(s, x)[c]; }, t, 1e-4);
            fd_err = std::max(fd_err, std::abs(dv.at(i, c) - fd));
        }
    }
    CHECK(fd_err < 1e-8);

    StructuralReport rep = cand.structural_checks(ws);
    CHECK(rep.div_v_max < 1e-12);
    CHECK(rep.trace_f_max < 1e-12);
    CHECK(rep.flux_residual_max < 1e-10);
    CHECK(rep.endpoint_sup < 1e-12);

    // pointwise flux identity at off-grid points
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double resid = 0.0;
    for (int k = 0; k < 50; ++k) {
        const Point x{u(rng), u(rng), 0.0};
        resid = std::max(resid, cand.flux_identity_residual(0.37, x));
    }
    CHECK(resid < 1e-10);
}

TEST_CASE("mode pairing is closed form and exactly zero off the wave modes") {
    TorusGrid g(2, 32);
    const double T = 1.0;
    Envelope env = Envelope::sin_squared(T);
    PlaneWaveSpec spec;
    spec.xi = {1, 0, 0};
    spec.a_dir = {0.0, 1.0, 0.0};
    spec.harmonic = 4;
    spec.amplitude = 0.2;
    SubsolutionCandidate cand = SubsolutionCandidate::plane_wave(g, T, spec, env);

    const double t = 0.5 * T;
    const std::array<double, 3> dir{0.0, 1.0, 0.0};

    // matching mode: closed form vs grid quadrature of v . dir cos(pi k . x)
    const double paired = cand.mode_pairing(t, {4, 0, 0}, dir);
    CHECK(paired == doctest::Approx(0.5 * g.volume() * 0.2 * env.chi(t)).epsilon(1e-14));

    VectorField v = cand.v_at(t);
    ScalarField integrand = ScalarField::sample(g, [&](const Point& x) {
        return std::cos(pi * 4 * x[0]);
    });
    for (std::size_t i = 0; i < integrand.size(); ++i) integrand[i] *= v.at(i, 1);
    CHECK(integral(integrand) == doctest::Approx(paired).epsilon(1e-12));

    // conjugate mode pairs identically (cosine is even)
    CHECK(cand.mode_pairing(t, {-4, 0, 0}, dir) == paired);

    // any other mode pairs to exactly zero, no roundoff
    CHECK(cand.mode_pairing(t, {3, 0, 0}, dir) == 0.0);
    CHECK(cand.mode_pairing(t, {4, 1, 0}, dir) == 0.0);
    CHECK(cand.mode_pairing(t, {8, 0, 0}, dir) == 0.0);

    // two copies of the same wave superpose linearly
    cand.add_wave(spec);
    CHECK(cand.mode_pairing(t, {4, 0, 0}, dir) == doctest::Approx(2.0 * paired).epsilon(1e-14));
}

TEST_CASE("margin of the zero candidate on constant states") {
    TorusGrid g(2, 16);
    SpectralWorkspace ws(g);

    SUBCASE("unit density with unit momentum and constant profile") {
        SmoothSolution sol = constant_solve(g, ws, 1.0, {1.0, 0.0, 0.0}, 0.3);
        EnergyProfile prof = constant_profile(0.5);
        AnsatzFields ans = AnsatzFields::build(sol, prof);
        SubsolutionCandidate cand = SubsolutionCandidate::zero(g, sol.t_reached);
        CertificationReport rep = subsolution_margin(cand, ans, sol, ws);

        CHECK(rep.pass);
        CHECK(rep.margin_min == 0.5);  // exact: the flux cancels bitwise
        CHECK(rep.gap_min == 0.5);
        CHECK(rep.sup_v == 0.0);
        // e = 1/2 |m|^2 / rho + Lambda = 1, so sqrt(2 rho e) + |m| = sqrt(2) + 1
        CHECK(rep.sup_v_bound == doctest::Approx(std::sqrt(2.0) + 1.0).epsilon(1e-15));
        for (const auto& s : rep.per_snapshot) {
            CHECK(s.margin_min == 0.5);
            CHECK(s.margin_max == 0.5);
            CHECK(s.margin_mean == doctest::Approx(0.5).epsilon(1e-15));
        }
    }

    SUBCASE("at rest the margin is the profile itself") {
        SmoothSolution sol = constant_solve(g, ws, 1.0, {0.0, 0.0, 0.0}, 0.3);
        EnergyProfile prof = EnergyProfile::exponential(0.8);
        AnsatzFields ans = AnsatzFields::build(sol, prof);
        SubsolutionCandidate cand = SubsolutionCandidate::zero(g, sol.t_reached);
        CertificationReport rep = subsolution_margin(cand, ans, sol, ws);

        CHECK(rep.pass);
        for (std::size_t k = 0; k < rep.per_snapshot.size(); ++k) {
            const double lam = prof.lambda(ans.times[k]);
            CHECK(rep.per_snapshot[k].margin_min == lam);
            CHECK(rep.per_snapshot[k].margin_max == lam);
        }
        CHECK(rep.margin_min == prof.lambda(sol.t_reached));
    }

    SUBCASE("cadence mismatch is rejected") {
        SmoothSolution sol_a = constant_solve(g, ws, 1.0, {0.0, 0.0, 0.0}, 0.3);
        SmoothSolution sol_b = constant_solve(g, ws, 1.0, {0.0, 0.0, 0.0}, 0.17);
        EnergyProfile prof = constant_profile(0.5);
        AnsatzFields ans_b = AnsatzFields::build(sol_b, prof);
        SubsolutionCandidate cand = SubsolutionCandidate::zero(g, sol_a.t_reached);
        CHECK_THROWS_AS(subsolution_margin(cand, ans_b, sol_a, ws), config_error);
    }
}

TEST_CASE("relaxation inequality slack") {
    // with F = H = 0 the slack has the closed form (d-1)/2 |w|^2 / rho
    std::array<double, 3> w{0.3, -0.7, 0.0};
    double zero2[3] = {0.0, 0.0, 0.0};
    double zero3[6] = {0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    const double rho = 1.3;
    const double w2_2 = w[0] * w[0] + w[1] * w[1];
    CHECK(relaxation_slack(w, rho, zero2, zero2, 2) ==
          doctest::Approx(0.5 * w2_2 / rho).epsilon(1e-14));
    w = {0.3, -0.7, 0.4};
    const double w2_3 = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
    CHECK(relaxation_slack(w, rho, zero3, zero3, 3) ==
          doctest::Approx(w2_3 / rho).epsilon(1e-14));

    // random traceless pairs: the inequality holds with tiny negative tolerance
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 500; ++k) {
        const int d = (k % 2) ? 3 : 2;
        std::array<double, 3> ww{u(rng), u(rng), d == 3 ? u(rng) : 0.0};
        const double r = 0.5 + 1.5 * std::abs(u(rng));
        double f[6] = {}, h[6] = {};
        if (d == 2) {
            f[0] = u(rng);
            f[1] = u(rng);
            f[2] = -f[0];
            h[0] = u(rng);
            h[1] = u(rng);
            h[2] = -h[0];
        } else {
            f[0] = u(rng);
            f[3] = u(rng);
            f[5] = -f[0] - f[3];
            f[1] = u(rng);
            f[2] = u(rng);
            f[4] = u(rng);
            h[0] = u(rng);
            h[3] = u(rng);
            h[5] = -h[0] - h[3];
            h[1] = u(rng);
            h[2] = u(rng);
            h[4] = u(rng);
        }
        worst = std::min(worst, relaxation_slack(ww, r, f, h, d));
    }
    CHECK(worst >= -1e-12);
}

TEST_CASE("eigen identity deviation on a rough random state") {
    TorusGrid g(3, 8);
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> rho_d(0.5, 2.0), m_d(-1.0, 1.0);
    ScalarField rho(g);
    VectorField m(g);
    for (std::size_t i = 0; i < rho.size(); ++i) {
        rho[i] = rho_d(rng);
        for (int c = 0; c < 3; ++c) m.at(i, c) = m_d(rng);
    }
    CHECK(eigen_identity_deviation(FlowState(std::move(rho), std::move(m))) < 1e-12);
}

TEST_CASE("amplitude search finds a positive certified amplitude") {
    TorusGrid g(2, 16);
    SpectralWorkspace ws(g);
    SmoothSolution sol = constant_solve(g, ws, 1.0, {0.0, 0.0, 0.0}, 0.2);
    EnergyProfile prof = constant_profile(0.5);
    AnsatzFields ans = AnsatzFields::build(sol, prof);
    Envelope env = Envelope::sin_squared(sol.t_reached);

    PlaneWaveSpec shape;
    shape.xi = {1, 0, 0};
    shape.a_dir = {0.0, 1.0, 0.0};
    shape.harmonic = 2;

    AmplitudeSearchResult res = max_amplitude_search(shape, env, ans, sol, ws, 0.5);
    CHECK(res.searched);
    CHECK(res.zero_margin == 0.5);
    CHECK(res.margin_target == 0.25);
    CHECK(res.best_amplitude > 0.0);
    CHECK(res.best_report.pass);
    CHECK(res.best_report.margin_min >= res.margin_target);
    REQUIRE(!res.curve.empty());
    for (std::size_t i = 1; i < res.curve.size(); ++i)
        CHECK(res.curve[i - 1].amplitude <= res.curve[i].amplitude);
    bool has_fail = false;
    for (const auto& p : res.curve) has_fail = has_fail || !p.pass;
    CHECK(has_fail);  // the bracket contains at least one rejected amplitude

    // a candidate at the verified amplitude really is certified
    PlaneWaveSpec best = shape;
    best.amplitude = res.best_amplitude;
    SubsolutionCandidate cand =
        SubsolutionCandidate::plane_wave(g, sol.t_reached, best, env);
    CertificationReport rep = subsolution_margin(cand, ans, sol, ws);
    CHECK(rep.pass);
    CHECK(rep.margin_min >= res.margin_target - 1e-12);
}

TEST_CASE("amplitude search declines when the zero candidate fails") {
    TorusGrid g(2, 16);
    SpectralWorkspace ws(g);
    SmoothSolution sol = constant_solve(g, ws, 1.0, {0.0, 0.0, 0.0}, 0.2);
    EnergyProfile prof = constant_profile(5e-11);  // below the strictness floor
    AnsatzFields ans = AnsatzFields::build(sol, prof);
    Envelope env = Envelope::sin_squared(sol.t_reached);

    PlaneWaveSpec shape;
    shape.xi = {1, 0, 0};
    shape.a_dir = {0.0, 1.0, 0.0};
    shape.harmonic = 2;

    AmplitudeSearchResult res = max_amplitude_search(shape, env, ans, sol, ws, 0.5);
    CHECK(!res.searched);
    CHECK(res.best_amplitude == 0.0);
    CHECK(!res.note.empty());
}
