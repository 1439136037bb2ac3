#pragma once

#include <functional>
#include <string>
#include <vector>

namespace wildlab {

// Spatially homogeneous energy profile Lambda(t) carried analytically as a
// (value, derivative) pair so downstream residuals are free of interpolation
// error. Must stay positive and nonincreasing on the horizon of use.
class EnergyProfile {
  public:
    using Fn = std::function<double(double)>;

    // Lambda(t) = eps * exp(-t / eps^2); Lambda'(0) = -1/eps.
    static EnergyProfile exponential(double eps);

    // User-supplied C^1 pair; verify() additionally enforces the
    // finite-difference consistency |Lambda' - dLambda/dt| <= 1e-6.
    static EnergyProfile custom(Fn lambda, Fn dlambda, std::string kind = "custom");

    // Monotone C^1 cubic through (t, Lambda) samples, clamped to the end
    // pieces outside the table range.
    static EnergyProfile from_table(const std::vector<double>& t,
                                    const std::vector<double>& lambda);

    double lambda(double t) const { return lambda_(t); }
    double dlambda(double t) const { return dlambda_(t); }
    double eps() const { return eps_; }
    const std::string& kind() const { return kind_; }
    bool is_exponential() const { return kind_ == "exponential"; }

    // Samples [0,T]: positivity, monotonicity, and (for user-supplied pairs)
    // derivative consistency. Throws config_error on violation.
    void verify(double T, int samples = 101) const;

  private:
    EnergyProfile() = default;
    Fn lambda_;
    Fn dlambda_;
    double eps_ = 0.0;  // 0 for user-supplied profiles
    std::string kind_;
};

}  // namespace wildlab
