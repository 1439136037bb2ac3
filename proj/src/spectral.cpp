#include "wildlab/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <numbers>

#include "wildlab/reduce.hpp"

namespace wildlab {

namespace {
constexpr double kPi = std::numbers::pi;
}

struct SpectralWorkspace::Impl {
    double* rbuf = nullptr;
    fftw_complex* cbuf = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
};

SpectralWorkspace::SpectralWorkspace(const TorusGrid& g) : grid_(g) {
    const int n = g.n;
    const std::size_t real_n = g.points();
    nmodes_ = static_cast<std::size_t>(n / 2 + 1);
    for (int a = 0; a < g.d - 1; ++a) nmodes_ *= static_cast<std::size_t>(n);

    impl_ = new Impl;
    impl_->rbuf = fftw_alloc_real(real_n);
    impl_->cbuf = fftw_alloc_complex(nmodes_);
    if (g.d == 2) {
        impl_->fwd = fftw_plan_dft_r2c_2d(n, n, impl_->rbuf, impl_->cbuf, FFTW_ESTIMATE);
        impl_->inv = fftw_plan_dft_c2r_2d(n, n, impl_->cbuf, impl_->rbuf, FFTW_ESTIMATE);
    } else {
        impl_->fwd = fftw_plan_dft_r2c_3d(n, n, n, impl_->rbuf, impl_->cbuf, FFTW_ESTIMATE);
        impl_->inv = fftw_plan_dft_c2r_3d(n, n, n, impl_->cbuf, impl_->rbuf, FFTW_ESTIMATE);
    }
}

SpectralWorkspace::~SpectralWorkspace() {
    if (!impl_) return;
    fftw_destroy_plan(impl_->fwd);
    fftw_destroy_plan(impl_->inv);
    fftw_free(impl_->rbuf);
    fftw_free(impl_->cbuf);
    delete impl_;
}

void SpectralWorkspace::mode_tuple(std::size_t flat, int* m) const {
    const int n = grid_.n;
    const std::size_t clast = static_cast<std::size_t>(n / 2 + 1);
    if (grid_.d == 2) {
        const int i0 = static_cast<int>(flat / clast);
        const int i1 = static_cast<int>(flat % clast);
        m[0] = i0 <= n / 2 ? i0 : i0 - n;
        m[1] = i1;
    } else {
        const std::size_t stride1 = static_cast<std::size_t>(n) * clast;
        const int i0 = static_cast<int>(flat / stride1);
        const std::size_t rem = flat % stride1;
        const int i1 = static_cast<int>(rem / clast);
        const int i2 = static_cast<int>(rem % clast);
        m[0] = i0 <= n / 2 ? i0 : i0 - n;
        m[1] = i1 <= n / 2 ? i1 : i1 - n;
        m[2] = i2;
    }
}

double SpectralWorkspace::multiplicity(std::size_t flat) const {
    const std::size_t clast = static_cast<std::size_t>(grid_.n / 2 + 1);
    const std::size_t ilast = flat % clast;
    return (ilast == 0 || ilast == clast - 1) ? 1.0 : 2.0;
}

void SpectralWorkspace::run_forward(const double* in, std::complex<double>* out) {
    std::memcpy(impl_->rbuf, in, grid_.points() * sizeof(double));
    fftw_execute(impl_->fwd);
    const double scale = 1.0 / static_cast<double>(grid_.points());
    const auto* raw = reinterpret_cast<const std::complex<double>*>(impl_->cbuf);
    par::parallel_for(nmodes_, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) out[i] = raw[i] * scale;
    });
}

void SpectralWorkspace::run_inverse(const std::complex<double>* in, double* out) {
    std::memcpy(impl_->cbuf, in, nmodes_ * sizeof(fftw_complex));
    fftw_execute(impl_->inv);
    std::memcpy(out, impl_->rbuf, grid_.points() * sizeof(double));
}

void SpectralWorkspace::apply_mask(std::complex<double>* spec) const {
    const int kmax = dealias_cutoff();
    par::parallel_for(nmodes_, [&](std::size_t lo, std::size_t hi) {
        int m[3];
        for (std::size_t i = lo; i < hi; ++i) {
            mode_tuple(i, m);
            for (int a = 0; a < grid_.d; ++a) {
                if (m[a] > kmax || m[a] < -kmax) {
                    spec[i] = 0.0;
                    break;
                }
            }
        }
    });
}

std::vector<std::complex<double>> SpectralWorkspace::forward(const ScalarField& f) {
    require_same_grid(f.grid(), grid_, "forward");
    std::vector<std::complex<double>> spec(nmodes_);
    run_forward(f.data().data(), spec.data());
    return spec;
}

ScalarField SpectralWorkspace::synthesize(const std::vector<std::complex<double>>& spec) {
    ScalarField out(grid_);
    run_inverse(spec.data(), out.data().data());
    return out;
}

ScalarField SpectralWorkspace::diff(const ScalarField& f, int axis) {
    auto spec = forward(f);
    const int n = grid_.n;
    par::parallel_for(nmodes_, [&](std::size_t lo, std::size_t hi) {
        int m[3];
        for (std::size_t i = lo; i < hi; ++i) {
            mode_tuple(i, m);
            const int ma = m[axis];
            if (ma == n / 2 || ma == -n / 2) {
                spec[i] = 0.0;
            } else {
                spec[i] *= std::complex<double>(0.0, kPi * ma);
            }
        }
    });
    return synthesize(spec);
}

VectorField SpectralWorkspace::grad(const ScalarField& f) {
    auto spec = forward(f);
    const int n = grid_.n;
    VectorField out(grid_);
    std::vector<std::complex<double>> tmp(nmodes_);
    for (int axis = 0; axis < grid_.d; ++axis) {
        par::parallel_for(nmodes_, [&](std::size_t lo, std::size_t hi) {
            int m[3];
            for (std::size_t i = lo; i < hi; ++i) {
                mode_tuple(i, m);
                const int ma = m[axis];
                tmp[i] = (ma == n / 2 || ma == -n / 2)
                             ? std::complex<double>(0.0)
                             : spec[i] * std::complex<double>(0.0, kPi * ma);
            }
        });
        run_inverse(tmp.data(), out.comp(axis).data());
    }
    return out;
}

ScalarField SpectralWorkspace::laplacian(const ScalarField& f) {
    auto spec = forward(f);
    par::parallel_for(nmodes_, [&](std::size_t lo, std::size_t hi) {
        int m[3];
        for (std::size_t i = lo; i < hi; ++i) {
            mode_tuple(i, m);
            double k2 = 0.0;
            for (int a = 0; a < grid_.d; ++a) k2 += static_cast<double>(m[a]) * m[a];
            spec[i] *= -kPi * kPi * k2;
        }
    });
    return synthesize(spec);
}

ScalarField SpectralWorkspace::divergence(const VectorField& v, bool dealias_result) {
    require_same_grid(v.grid(), grid_, "divergence");
    const int n = grid_.n;
    std::vector<std::complex<double>> acc(nmodes_, std::complex<double>(0.0));
    std::vector<std::complex<double>> spec(nmodes_);
    for (int axis = 0; axis < grid_.d; ++axis) {
        run_forward(v.comp(axis).data(), spec.data());
        par::parallel_for(nmodes_, [&](std::size_t lo, std::size_t hi) {
            int m[3];
            for (std::size_t i = lo; i < hi; ++i) {
                mode_tuple(i, m);
                const int ma = m[axis];
                if (ma != n / 2 && ma != -n / 2)
                    acc[i] += spec[i] * std::complex<double>(0.0, kPi * ma);
            }
        });
    }
    if (dealias_result) apply_mask(acc.data());
    return synthesize(acc);
}

VectorField SpectralWorkspace::divergence(const SymTensorField& S, bool dealias_result) {
    require_same_grid(S.grid(), grid_, "divergence");
    const int d = grid_.d;
    const int n = grid_.n;
    const int packed = SymTensorField::packed_count(d);
    std::vector<std::vector<std::complex<double>>> comp_spec(packed);
    for (int c = 0; c < packed; ++c) {
        comp_spec[c].resize(nmodes_);
        run_forward(S.comp(c).data(), comp_spec[c].data());
    }
    VectorField out(grid_);
    std::vector<std::complex<double>> acc(nmodes_);
    for (int row = 0; row < d; ++row) {
        par::parallel_for(nmodes_, [&](std::size_t lo, std::size_t hi) {
            int m[3];
            for (std::size_t i = lo; i < hi; ++i) {
                mode_tuple(i, m);
                std::complex<double> s(0.0);
                for (int col = 0; col < d; ++col) {
                    const int ma = m[col];
                    if (ma == n / 2 || ma == -n / 2) continue;
                    s += comp_spec[SymTensorField::pack_index(d, row, col)][i] *
                         std::complex<double>(0.0, kPi * ma);
                }
                acc[i] = s;
            }
        });
        if (dealias_result) apply_mask(acc.data());
        run_inverse(acc.data(), out.comp(row).data());
    }
    return out;
}

void SpectralWorkspace::dealias(ScalarField& f) {
    auto spec = forward(f);
    apply_mask(spec.data());
    run_inverse(spec.data(), f.data().data());
}

void SpectralWorkspace::dealias(VectorField& v) {
    std::vector<std::complex<double>> spec(nmodes_);
    for (int c = 0; c < grid_.d; ++c) {
        run_forward(v.comp(c).data(), spec.data());
        apply_mask(spec.data());
        run_inverse(spec.data(), v.comp(c).data());
    }
}

void SpectralWorkspace::dealias(SymTensorField& S) {
    std::vector<std::complex<double>> spec(nmodes_);
    for (int c = 0; c < S.packed(); ++c) {
        run_forward(S.comp(c).data(), spec.data());
        apply_mask(spec.data());
        run_inverse(spec.data(), S.comp(c).data());
    }
}

double SpectralWorkspace::sobolev_norm_sq(const ScalarField& f, int k) {
    auto spec = forward(f);
    const double vol = grid_.volume();
    return vol * det::sum_map(nmodes_, [&](std::size_t i) {
               int m[3];
               mode_tuple(i, m);
               double k2 = 0.0;
               for (int a = 0; a < grid_.d; ++a) k2 += static_cast<double>(m[a]) * m[a];
               const double q = kPi * kPi * k2;
               double w = 1.0;
               double term = 1.0;
               for (int j = 1; j <= k; ++j) {
                   term *= q;
                   w += term;
               }
               return multiplicity(i) * w * std::norm(spec[i]);
           });
}

double SpectralWorkspace::sobolev_norm(const ScalarField& f, int k) {
    return std::sqrt(sobolev_norm_sq(f, k));
}

double SpectralWorkspace::l2_norm_spectral(const ScalarField& f) {
    auto spec = forward(f);
    const double vol = grid_.volume();
    return std::sqrt(vol * det::sum_map(nmodes_, [&](std::size_t i) {
                         return multiplicity(i) * std::norm(spec[i]);
                     }));
}

SpectralWorkspace::SpectrumEnergy SpectralWorkspace::spectrum_energy(const ScalarField& f) {
    auto spec = forward(f);
    const double tail_cut = 2.0 * dealias_cutoff() / 3.0;
    SpectrumEnergy out;
    out.total = det::sum_map(nmodes_, [&](std::size_t i) {
        return multiplicity(i) * std::norm(spec[i]);
    });
    out.fluct = out.total - std::norm(spec[0]);
    out.tail = det::sum_map(nmodes_, [&](std::size_t i) {
        int m[3];
        mode_tuple(i, m);
        int minf = 0;
        for (int a = 0; a < grid_.d; ++a) minf = std::max(minf, std::abs(m[a]));
        return minf > tail_cut ? multiplicity(i) * std::norm(spec[i]) : 0.0;
    });
    return out;
}

}  // namespace wildlab
