#include "wildlab/pressure.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <sstream>

#include "wildlab/errors.hpp"

namespace wildlab {

namespace {

std::string fmt_num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

// Monotone cubic (Fritsch-Carlson) data, each piece stored in the global
// power basis so that integral p(s)/s^2 ds has the closed form
//   -a0/s + a1*ln(s) + a2*s + a3*s^2/2.
struct Pchip {
    std::vector<double> x;
    std::vector<std::array<double, 4>> coef;  // a0..a3 per piece
    std::vector<double> cumI;                 // integral of p/s^2 from x[0] to x[i]

    int piece(double s) const {
        const auto it = std::upper_bound(x.begin(), x.end(), s);
        int i = static_cast<int>(it - x.begin()) - 1;
        return std::clamp(i, 0, static_cast<int>(coef.size()) - 1);
    }

    double eval(double s) const {
        const auto& a = coef[piece(s)];
        return a[0] + s * (a[1] + s * (a[2] + s * a[3]));
    }

    double deriv(double s) const {
        const auto& a = coef[piece(s)];
        return a[1] + s * (2.0 * a[2] + s * 3.0 * a[3]);
    }

    // Antiderivative of p(s)/s^2 within piece i, up to a per-piece constant.
    double anti(int i, double s) const {
        const auto& a = coef[i];
        return -a[0] / s + a[1] * std::log(s) + a[2] * s + 0.5 * a[3] * s * s;
    }

    // integral_{x[0]}^{s} p(u)/u^2 du
    double integral_from_left(double s) const {
        const int i = piece(s);
        return cumI[i] + anti(i, s) - anti(i, x[i]);
    }
};

std::shared_ptr<Pchip> build_pchip(const std::vector<double>& x, const std::vector<double>& y) {
    const int n = static_cast<int>(x.size());
    if (n < 2) throw config_error("pressure table needs at least two samples");
    for (int i = 0; i + 1 < n; ++i)
        if (!(x[i + 1] > x[i])) throw config_error("pressure table densities must increase");
    if (x.front() <= 0.0) throw config_error("pressure table densities must be positive");

    std::vector<double> h(n - 1), delta(n - 1), d(n);
    for (int i = 0; i + 1 < n; ++i) {
        h[i] = x[i + 1] - x[i];
        delta[i] = (y[i + 1] - y[i]) / h[i];
    }
    for (int i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
            d[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    auto end_slope = [](double h0, double h1, double d0, double d1) {
        double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (s * d0 <= 0.0)
            s = 0.0;
        else if (d0 * d1 < 0.0 && std::abs(s) > 3.0 * std::abs(d0))
            s = 3.0 * d0;
        return s;
    };
    if (n == 2) {
        d[0] = d[1] = delta[0];
    } else {
        d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
        d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    }

    auto out = std::make_shared<Pchip>();
    out->x = x;
    out->coef.resize(n - 1);
    for (int i = 0; i + 1 < n; ++i) {
        const double hl = h[i];
        // Hermite coefficients in t = (s - x[i]) / h
        const double c0 = y[i];
        const double c1 = hl * d[i];
        const double c2 = -3.0 * y[i] + 3.0 * y[i + 1] - 2.0 * hl * d[i] - hl * d[i + 1];
        const double c3 = 2.0 * y[i] - 2.0 * y[i + 1] + hl * d[i] + hl * d[i + 1];
        // powers of u = s - x[i]
        const double b0 = c0;
        const double b1 = c1 / hl;
        const double b2 = c2 / (hl * hl);
        const double b3 = c3 / (hl * hl * hl);
        // powers of s via u = s - x[i]
        const double xl = x[i];
        auto& a = out->coef[i];
        a[3] = b3;
        a[2] = b2 - 3.0 * b3 * xl;
        a[1] = b1 - 2.0 * b2 * xl + 3.0 * b3 * xl * xl;
        a[0] = b0 - b1 * xl + b2 * xl * xl - b3 * xl * xl * xl;
    }
    out->cumI.resize(n, 0.0);
    for (int i = 0; i + 1 < n; ++i)
        out->cumI[i + 1] = out->cumI[i] + out->anti(i, x[i + 1]) - out->anti(i, x[i]);
    return out;
}

double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                        double tol, int depth, double flo, double fmid, double fhi) {
    const double mid = 0.5 * (lo + hi);
    const double lm = 0.5 * (lo + mid), mh = 0.5 * (mid + hi);
    const double flm = f(lm), fmh = f(mh);
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * fmh + fhi);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, lo, mid, 0.5 * tol, depth - 1, flo, flm, fmid) +
           adaptive_simpson(f, mid, hi, 0.5 * tol, depth - 1, fmid, fmh, fhi);
}

double integrate(const std::function<double(double)>& f, double lo, double hi, double tol) {
    if (lo == hi) return 0.0;
    const double sgn = lo < hi ? 1.0 : -1.0;
    if (lo > hi) std::swap(lo, hi);
    const double mid = 0.5 * (lo + hi);
    return sgn * adaptive_simpson(f, lo, hi, tol, 48, f(lo), f(mid), f(hi));
}

}  // namespace

PressureLaw PressureLaw::gamma_law(double coef, double gamma) {
    if (!(coef > 0.0)) throw config_error("gamma law needs coef > 0");
    if (!(gamma >= 1.0)) throw config_error("gamma law needs gamma >= 1");
    PressureLaw law;
    law.kind_ = "gamma_law";
    law.describe_ = "gamma_law coef=" + fmt_num(coef) + " gamma=" + fmt_num(gamma);
    law.a_ = 0.0;
    law.b_ = std::numeric_limits<double>::infinity();
    law.rho_ref_ = 1.0;
    law.p_ = [coef, gamma](double r) { return coef * std::pow(r, gamma); };
    law.dp_ = [coef, gamma](double r) { return coef * gamma * std::pow(r, gamma - 1.0); };
    if (gamma == 1.0) {
        law.pot_ = [coef](double r) { return coef * r * std::log(r); };
    } else {
        law.pot_ = [coef, gamma](double r) {
            return coef * (std::pow(r, gamma) - r) / (gamma - 1.0);
        };
    }
    return law;
}

PressureLaw PressureLaw::from_table(const std::vector<double>& rho,
                                    const std::vector<double>& p) {
    auto spline = build_pchip(rho, p);
    PressureLaw law;
    law.kind_ = "table";
    law.describe_ = "table samples=" + fmt_num(static_cast<double>(rho.size())) +
                    " range=[" + fmt_num(rho.front()) + "," + fmt_num(rho.back()) + "]";
    law.a_ = rho.front();
    law.b_ = rho.back();
    law.rho_ref_ = (rho.front() < 1.0 && 1.0 < rho.back())
                       ? 1.0
                       : 0.5 * (rho.front() + rho.back());
    const double ref_int = spline->integral_from_left(law.rho_ref_);
    law.p_ = [spline](double r) { return spline->eval(r); };
    law.dp_ = [spline](double r) { return spline->deriv(r); };
    law.pot_ = [spline, ref_int](double r) {
        return r * (spline->integral_from_left(r) - ref_int);
    };
    law.verify_hyperbolic(law.a_, law.b_);
    return law;
}

PressureLaw PressureLaw::custom(Fn p, Fn dp, double a, double b, Fn potential,
                                std::string kind) {
    if (!p || !dp) throw config_error("custom pressure law needs p and dp");
    if (!(a >= 0.0) || !(b > a)) throw config_error("pressure validity interval needs 0 <= a < b");
    PressureLaw law;
    law.kind_ = kind;
    law.describe_ = kind + " on (" + fmt_num(a) + "," + fmt_num(b) + ")";
    law.a_ = a;
    law.b_ = b;
    law.rho_ref_ = (a < 1.0 && 1.0 < b) ? 1.0 : 0.5 * (a + std::min(b, a + 2.0));
    if (potential) {
        const double ref = law.rho_ref_;
        const double pref = potential(ref);
        law.pot_ = [potential, ref, pref](double r) { return potential(r) - pref * r / ref; };
    } else {
        const double ref = law.rho_ref_;
        Fn pc = p;
        law.pot_ = [pc, ref](double r) {
            const auto integrand = [&pc](double s) { return pc(s) / (s * s); };
            return r * integrate(integrand, ref, r, 1e-13);
        };
    }
    law.p_ = std::move(p);
    law.dp_ = std::move(dp);
    return law;
}

double PressureLaw::p(double rho) const {
    require_inside(rho, "pressure");
    return p_(rho);
}

double PressureLaw::dp(double rho) const {
    require_inside(rho, "sound speed");
    return dp_(rho);
}

double PressureLaw::potential(double rho) const {
    require_inside(rho, "pressure potential");
    return pot_(rho);
}

void PressureLaw::require_inside(double rho, const char* what) const {
    if (!contains(rho))
        throw numeric_error(std::string(what) + ": density " + fmt_num(rho) +
                            " outside validity interval (" + fmt_num(a_) + "," +
                            fmt_num(b_) + ")");
}

std::string PressureLaw::describe() const { return describe_; }

void PressureLaw::verify_hyperbolic(double lo, double hi, int samples) const {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo))
        throw config_error("hyperbolicity check needs a finite interval");
    for (int i = 0; i < samples; ++i) {
        const double t = (i + 0.5) / samples;
        const double r = lo + t * (hi - lo);
        if (!contains(r)) continue;
        if (!(dp_(r) > 0.0))
            throw config_error("pressure law not hyperbolic: p'(" + fmt_num(r) +
                               ") = " + fmt_num(dp_(r)));
    }
}

}  // namespace wildlab
