#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "wildlab/ansatz.hpp"
#include "wildlab/eig.hpp"
#include "wildlab/solver.hpp"
#include "wildlab/spectral.hpp"

namespace wildlab {

// C^1 temporal envelope with chi(0) = chi(T) = 0.
struct Envelope {
    std::function<double(double)> chi;
    std::function<double(double)> dchi;
    std::string kind;

    static Envelope sin_squared(double T);  // chi(t) = sin^2(pi t / T)
    static Envelope custom(std::function<double(double)> chi,
                           std::function<double(double)> dchi, std::string kind = "custom");
    void verify(double T) const;  // endpoint zeros and FD consistency
};

// One modulated divergence-free plane wave:
//   v(t,x) = A chi(t) a cos(pi N xi . x)
//   F(t,x) = -(A chi'(t) / (pi N |xi|^2)) (a (x) xi + xi (x) a) sin(pi N xi . x)
// With a . xi = 0 this gives div v = 0, F traceless symmetric, and
// d_t v + div F = 0 as identities.
struct PlaneWaveSpec {
    std::array<int, 3> xi{1, 0, 0};
    std::array<double, 3> a_dir{0.0, 1.0, 0.0};
    int harmonic = 1;  // N
    double amplitude = 0.0;
};

struct StructuralReport {
    double div_v_max = 0.0;        // spectral, over sampled times
    double trace_f_max = 0.0;      // relative to Frobenius + 1
    double flux_residual_max = 0.0;  // sup |d_t v + div F|, div F spectral
    double endpoint_sup = 0.0;     // max(sup|v(0)|, sup|v(T)|)
};

// Superposition of plane waves under one envelope; the zero candidate has an
// empty wave list. All fields evaluate analytically at any time.
class SubsolutionCandidate {
  public:
    static SubsolutionCandidate zero(const TorusGrid& g, double T);
    static SubsolutionCandidate plane_wave(const TorusGrid& g, double T,
                                           const PlaneWaveSpec& spec, const Envelope& env);

    void add_wave(const PlaneWaveSpec& spec);

    const TorusGrid& grid() const { return grid_; }
    double horizon() const { return horizon_; }
    const Envelope& envelope() const { return env_; }
    const std::vector<PlaneWaveSpec>& waves() const { return waves_; }

    VectorField v_at(double t) const;
    VectorField dvdt_at(double t) const;
    SymTensorField flux_at(double t) const;

    // Closed-form pointwise evaluation (any x, not just grid points).
    Point v_point(double t, const Point& x) const;
    double flux_identity_residual(double t, const Point& x) const;  // |d_t v + div F|

    // Closed-form L2 pairing of v(t,.) with dir * cos(pi k . x). The candidate
    // lives on the modes N xi only, so the pairing is |T^d|/2 sum over waves
    // with N xi = +-k of A chi(t) (a . dir), and exactly zero when no wave
    // matches: the weak-* smallness of high-frequency candidates is exact.
    double mode_pairing(double t, const std::array<int, 3>& k,
                        const std::array<double, 3>& dir) const;

    StructuralReport structural_checks(SpectralWorkspace& ws, int time_samples = 9) const;

  private:
    SubsolutionCandidate(const TorusGrid& g, double T, Envelope env);
    TorusGrid grid_;
    double horizon_ = 0.0;
    Envelope env_;
    std::vector<PlaneWaveSpec> waves_;
};

struct SnapshotMarginStats {
    double t = 0.0;
    double margin_min = 0.0;
    double margin_mean = 0.0;
    double margin_max = 0.0;
    double gap_min = 0.0;  // min of e - 1/2 |v+m|^2 / rho
    double sup_v = 0.0;
};

struct CertificationReport {
    bool pass = false;
    double strictness = 1e-10;
    double margin_min = 0.0;
    double gap_min = 0.0;
    double sup_v = 0.0;
    double sup_v_bound = 0.0;  // sqrt(2 sup(rho e)) + sup |m|
    StructuralReport structure;
    std::vector<SnapshotMarginStats> per_snapshot;
    std::string note;
};

// Pointwise X_0 membership margin e - (d/2) lambda_max[(v+m)(x)(v+m)/rho - F - H]
// over every grid point and snapshot. Optionally dumps per-snapshot margin and
// energy-gap fields as WEF1 files margin_NNNNNN.wef under dump_dir.
CertificationReport subsolution_margin(
    const SubsolutionCandidate& cand, const AnsatzFields& ans, const SmoothSolution& sol,
    SpectralWorkspace& ws, double strictness = 1e-10,
    const std::optional<std::filesystem::path>& dump_dir = std::nullopt);

// Slack of the algebraic inequality 1/2 |w|^2/rho <= (d/2) lambda_max[w(x)w/rho - F - H]
// for traceless symmetric F, H (packed upper triangle).
double relaxation_slack(const std::array<double, 3>& w, double rho, const double* f_packed,
                        const double* h_packed, int d);

// sup over the grid of |(d/2) lambda_max[m(x)m/rho - H] - 1/2 |m|^2/rho|
// with H built from the state; vanishes identically in exact arithmetic.
double eigen_identity_deviation(const FlowState& state);

struct AmplitudeProbe {
    double amplitude = 0.0;
    double margin_min = 0.0;
    bool pass = false;
};

struct AmplitudeSearchResult {
    bool searched = false;  // false when the zero candidate already fails
    std::string note;
    double zero_margin = 0.0;
    double margin_target = 0.0;     // fraction * zero_margin
    double best_amplitude = 0.0;    // largest verified amplitude
    CertificationReport best_report;  // full re-certification at best_amplitude
    std::vector<AmplitudeProbe> curve;
};

// Doubling then bisection on the amplitude of one wave shape, keeping the
// largest amplitude whose full margin stays >= fraction * zero-candidate
// margin. Monotonicity is not assumed: only probed amplitudes count.
AmplitudeSearchResult max_amplitude_search(const PlaneWaveSpec& shape, const Envelope& env,
                                           const AnsatzFields& ans, const SmoothSolution& sol,
                                           SpectralWorkspace& ws, double fraction = 0.5,
                                           int max_doublings = 40, int bisect_iters = 60);

}  // namespace wildlab
