#pragma once

#include <complex>
#include <vector>

#include "wildlab/field.hpp"
#include "wildlab/grid.hpp"

namespace wildlab {

// Spectral calculus on a TorusGrid via real-to-complex FFTs.
//
// The box is [-1,1]^d, so the fundamental wavenumber is pi and a mode index
// tuple m (integers, |m_j| <= n/2) carries the wavevector pi*m. Coefficients
// are normalized so that f(x) = sum_m c_m exp(i pi m.x); Parseval then reads
// integral |f|^2 = |T^d| * sum_m |c_m|^2.
//
// Not thread safe: each workspace owns scratch buffers and FFTW plans.
// Transforms always run on the calling thread; pointwise mode loops are
// deterministic regardless of the worker count.
class SpectralWorkspace {
  public:
    explicit SpectralWorkspace(const TorusGrid& g);
    ~SpectralWorkspace();
    SpectralWorkspace(const SpectralWorkspace&) = delete;
    SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

    const TorusGrid& grid() const { return grid_; }

    // Number of stored complex modes (last axis truncated by Hermitian symmetry).
    std::size_t modes() const { return nmodes_; }

    // Largest retained mode index per axis under the 2/3 rule.
    int dealias_cutoff() const { return grid_.n / 3; }

    std::vector<std::complex<double>> forward(const ScalarField& f);
    ScalarField synthesize(const std::vector<std::complex<double>>& spec);

    ScalarField diff(const ScalarField& f, int axis);
    VectorField grad(const ScalarField& f);
    ScalarField laplacian(const ScalarField& f);
    ScalarField divergence(const VectorField& v, bool dealias_result = false);
    // Row-wise divergence (div S)_i = sum_j d_j S_ij of a symmetric tensor.
    VectorField divergence(const SymTensorField& S, bool dealias_result = false);

    void dealias(ScalarField& f);
    void dealias(VectorField& v);
    void dealias(SymTensorField& S);

    // W^{k,2} norm via the spectral weight sum_{j<=k} (pi^2 |m|^2)^j.
    double sobolev_norm_sq(const ScalarField& f, int k);
    double sobolev_norm(const ScalarField& f, int k);

    // L2 norm from Fourier coefficients (Parseval cross-check).
    double l2_norm_spectral(const ScalarField& f);

    struct SpectrumEnergy {
        double total = 0.0;  // sum of |c_m|^2 with multiplicity
        double fluct = 0.0;  // total minus the zero mode
        double tail = 0.0;   // modes with |m|_inf above 2/3 of the dealias cutoff
    };
    SpectrumEnergy spectrum_energy(const ScalarField& f);

    // Mode index along one axis for a flat position in the complex array.
    // Axis j < d-1 maps storage index idx to idx <= n/2 ? idx : idx - n;
    // the last axis stores only 0..n/2.
    void mode_tuple(std::size_t flat, int* m) const;

    // Hermitian multiplicity: modes with last-axis index in {0, n/2} represent
    // themselves; all others also stand for their conjugate partner.
    double multiplicity(std::size_t flat) const;

  private:
    struct Impl;
    TorusGrid grid_;
    std::size_t nmodes_ = 0;
    Impl* impl_ = nullptr;

    void run_forward(const double* in, std::complex<double>* out);
    void run_inverse(const std::complex<double>* in, double* out);
    void apply_mask(std::complex<double>* spec) const;
};

}  // namespace wildlab
