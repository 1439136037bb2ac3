#pragma once

#include "wildlab/field.hpp"

namespace wildlab {

// Exact trapezoidal quadrature on the periodic grid (equals the spectral
// quadrature for resolved fields): cell volume times the sample sum.
double integral(const ScalarField& f);
double mean_value(const ScalarField& f);

double lp_norm(const ScalarField& f, double p);
double lp_norm(const VectorField& v, double p);  // pointwise Euclidean magnitude
double linf_norm(const ScalarField& f);
double linf_norm(const VectorField& v);

double min_value(const ScalarField& f);
double max_value(const ScalarField& f);

}  // namespace wildlab
