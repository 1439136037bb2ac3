#pragma once

#include <optional>
#include <vector>

#include "wildlab/profile.hpp"
#include "wildlab/solver.hpp"
#include "wildlab/spectral.hpp"

namespace wildlab {

// Deviatoric momentum flux H = m (x) m / rho - (1/d) (|m|^2 / rho) I,
// symmetric and traceless pointwise.
SymTensorField build_H(const FlowState& state);

// Kinetic-energy target e = 1/2 |m|^2 / rho + Lambda(t); requires
// Lambda(t) > 0 and is then positive pointwise.
ScalarField build_e(const FlowState& state, const EnergyProfile& prof, double t);

// H and e sampled at the trajectory cadence.
struct AnsatzFields {
    std::vector<double> times;
    std::vector<SymTensorField> H;
    std::vector<ScalarField> e;
    std::optional<EnergyProfile> profile;

    static AnsatzFields build(const SmoothSolution& sol, const EnergyProfile& prof);
};

struct ReformulationCheck {
    // (1/d) sup |grad s| with s = (|v+m|^2 - |m|^2) / rho: the divergence of
    // the flux by which the plain and the deviatoric formulation of the
    // perturbation equation differ (that flux is (1/d) s I).
    double gap = 0.0;
    // sup |1/2 |v+m|^2 / rho - e|: deviation from the pointwise kinetic
    // energy constraint; when it vanishes, s = 2 Lambda(t) is spatially
    // constant and the gap must vanish to discretization tolerance.
    double constraint_deviation = 0.0;
    double div_v = 0.0;
};
ReformulationCheck reformulation_gap(const VectorField& v, const FlowState& state,
                                     const EnergyProfile& prof, double t,
                                     SpectralWorkspace& ws);

}  // namespace wildlab
