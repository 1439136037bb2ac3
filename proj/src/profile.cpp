#include "wildlab/profile.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "wildlab/errors.hpp"

namespace wildlab {

namespace {

struct HermiteTable {
    std::vector<double> t, y, d, h;

    int piece(double s) const {
        const auto it = std::upper_bound(t.begin(), t.end(), s);
        const int i = static_cast<int>(it - t.begin()) - 1;
        return std::clamp(i, 0, static_cast<int>(h.size()) - 1);
    }

    double eval(double s) const {
        const int i = piece(s);
        const double u = (s - t[i]) / h[i];
        const double h00 = (2.0 * u - 3.0) * u * u + 1.0;
        const double h10 = ((u - 2.0) * u + 1.0) * u;
        const double h01 = (3.0 - 2.0 * u) * u * u;
        const double h11 = (u - 1.0) * u * u;
        return h00 * y[i] + h10 * h[i] * d[i] + h01 * y[i + 1] + h11 * h[i] * d[i + 1];
    }

    double deriv(double s) const {
        const int i = piece(s);
        const double u = (s - t[i]) / h[i];
        const double g00 = 6.0 * u * (u - 1.0);
        const double g10 = (3.0 * u - 4.0) * u + 1.0;
        const double g01 = -g00;
        const double g11 = (3.0 * u - 2.0) * u;
        return (g00 * y[i] + g01 * y[i + 1]) / h[i] + g10 * d[i] + g11 * d[i + 1];
    }
};

}  // namespace

EnergyProfile EnergyProfile::exponential(double eps) {
    if (!(eps > 0.0)) throw config_error("profile eps must be positive");
    EnergyProfile prof;
    prof.kind_ = "exponential";
    prof.eps_ = eps;
    prof.lambda_ = [eps](double t) { return eps * std::exp(-t / (eps * eps)); };
    prof.dlambda_ = [eps](double t) { return -std::exp(-t / (eps * eps)) / eps; };
    return prof;
}

EnergyProfile EnergyProfile::custom(Fn lambda, Fn dlambda, std::string kind) {
    if (!lambda || !dlambda) throw config_error("custom profile needs lambda and dlambda");
    EnergyProfile prof;
    prof.kind_ = std::move(kind);
    prof.lambda_ = std::move(lambda);
    prof.dlambda_ = std::move(dlambda);
    return prof;
}

EnergyProfile EnergyProfile::from_table(const std::vector<double>& t,
                                        const std::vector<double>& lambda) {
    const int n = static_cast<int>(t.size());
    if (n < 2 || lambda.size() != t.size())
        throw config_error("profile table needs matching t and Lambda columns, two rows or more");
    for (int i = 0; i + 1 < n; ++i)
        if (!(t[i + 1] > t[i])) throw config_error("profile table times must increase");
    for (double v : lambda)
        if (!(v > 0.0)) throw config_error("profile table values must be positive");

    auto tab = std::make_shared<HermiteTable>();
    tab->t = t;
    tab->y = lambda;
    tab->h.resize(n - 1);
    std::vector<double> delta(n - 1);
    for (int i = 0; i + 1 < n; ++i) {
        tab->h[i] = t[i + 1] - t[i];
        delta[i] = (lambda[i + 1] - lambda[i]) / tab->h[i];
    }
    tab->d.assign(n, 0.0);
    for (int i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] > 0.0) {
            const double w1 = 2.0 * tab->h[i] + tab->h[i - 1];
            const double w2 = tab->h[i] + 2.0 * tab->h[i - 1];
            tab->d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
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
        tab->d[0] = tab->d[1] = delta[0];
    } else {
        tab->d[0] = end_slope(tab->h[0], tab->h[1], delta[0], delta[1]);
        tab->d[n - 1] = end_slope(tab->h[n - 2], tab->h[n - 3], delta[n - 2], delta[n - 3]);
    }

    EnergyProfile prof;
    prof.kind_ = "table";
    prof.lambda_ = [tab](double s) { return tab->eval(s); };
    prof.dlambda_ = [tab](double s) { return tab->deriv(s); };
    return prof;
}

void EnergyProfile::verify(double T, int samples) const {
    if (!(T > 0.0)) throw config_error("profile horizon must be positive");
    if (samples < 2) throw config_error("profile check needs at least two samples");
    for (int i = 0; i < samples; ++i) {
        const double t = T * i / (samples - 1);
        const double v = lambda_(t);
        const double dv = dlambda_(t);
        if (!(v > 0.0)) {
            std::ostringstream os;
            os << "profile not positive: Lambda(" << t << ") = " << v;
            throw config_error(os.str());
        }
        if (dv > 1e-12 * std::max(1.0, std::abs(v))) {
            std::ostringstream os;
            os << "profile not nonincreasing: Lambda'(" << t << ") = " << dv;
            throw config_error(os.str());
        }
        // Derivative consistency applies to user-supplied pairs only: the
        // closed forms are consistent by construction and table evaluation is
        // merely C^1 at the knots, where a smooth finite difference misleads.
        if (!is_exponential() && kind_ != "table") {
            // Richardson-extrapolated centered difference, one-sided near 0.
            const double h = 1e-4 * std::max(1.0, T);
            const double tl = std::max(t - h, 0.0);
            const double tc = tl + h;
            auto centered = [&](double step) {
                return (lambda_(tc + step) - lambda_(tc - step)) / (2.0 * step);
            };
            const double fd = (4.0 * centered(0.5 * h) - centered(h)) / 3.0;
            if (std::abs(fd - dlambda_(tc)) > 1e-6) {
                std::ostringstream os;
                os << "profile derivative inconsistent at t = " << tc << ": finite difference "
                   << fd << " vs supplied " << dlambda_(tc);
                throw config_error(os.str());
            }
        }
    }
}

}  // namespace wildlab
