#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace wildlab {

// Barotropic pressure p(rho) on a validity interval (a,b) together with the
// pressure potential P, the primitive of p(s)/s^2 scaled by rho:
//   P(rho) = rho * integral_{rho_ref}^{rho} p(s)/s^2 ds,
// which satisfies P'(rho) rho - P(rho) = p(rho). P is unique up to c*rho;
// the gauge is fixed by P(rho_ref) = 0.
class PressureLaw {
  public:
    using Fn = std::function<double(double)>;

    // p(rho) = coef * rho^gamma, valid on (0, inf). Closed-form potential.
    static PressureLaw gamma_law(double coef, double gamma);

    // Monotone cubic interpolation of (rho, p) samples; valid on the sampled
    // range. The potential integrates the cubic pieces in closed form.
    // rho_ref is 1 when the table covers it, else the midpoint of the range.
    static PressureLaw from_table(const std::vector<double>& rho,
                                  const std::vector<double>& p);

    // User-supplied law; potential by adaptive quadrature unless given, in
    // which case it is re-gauged so that P(rho_ref) = 0.
    static PressureLaw custom(Fn p, Fn dp, double a, double b, Fn potential = nullptr,
                              std::string kind = "custom");

    double p(double rho) const;
    double dp(double rho) const;
    double potential(double rho) const;

    // Unchecked evaluators for hot loops whose density range was verified once.
    const Fn& p_fn() const { return p_; }
    const Fn& dp_fn() const { return dp_; }
    const Fn& potential_fn() const { return pot_; }

    double a() const { return a_; }
    double b() const { return b_; }
    double rho_ref() const { return rho_ref_; }
    bool contains(double rho) const { return rho > a_ && rho < b_; }
    void require_inside(double rho, const char* what) const;

    const std::string& kind() const { return kind_; }
    std::string describe() const;

    // Samples dp on [lo,hi] and throws if hyperbolicity p' > 0 fails anywhere.
    void verify_hyperbolic(double lo, double hi, int samples = 257) const;

  private:
    PressureLaw() = default;
    Fn p_;
    Fn dp_;
    Fn pot_;
    double a_ = 0.0;
    double b_ = std::numeric_limits<double>::infinity();
    double rho_ref_ = 1.0;
    std::string kind_;
    std::string describe_;
};

}  // namespace wildlab
