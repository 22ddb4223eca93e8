// Test-only oracles, independent of the quantile-domain evaluation paths
// they are used to check.
#ifndef TTV_TESTS_ORACLES_HPP
#define TTV_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "ttv/quadrature.hpp"
#include "ttv/quantile_model.hpp"
#include "ttv/risk_measures.hpp"
#include "ttv/rng.hpp"

namespace ttv::testing {

// Expected utility by direct expectation over the PDF (quadrature in t),
// splitting at the arrival kink t = -D. Continuous kinds only.
inline double eu_pdf_domain(const QuantileModel& m, const SchedulingPreferences& prefs,
                            double departure) {
    const double t_lo = m.quantile(1e-13);
    const double t_hi = m.upper_quantile(1e-13);
    const double knot = std::clamp(-departure, t_lo, t_hi);
    const auto f = [&](double t) { return m.pdf(t); };

    const auto piece = [&](auto integrand, double a, double b) {
        if (a >= b) return 0.0;
        return integrate_adaptive(integrand, a, b, 1e-11, 40000).value;
    };
    const double mu = piece([&](double t) { return t * f(t); }, t_lo, knot) +
                      piece([&](double t) { return t * f(t); }, knot, t_hi);
    const double sde =
        piece([&](double t) { return (-departure - t) * f(t); }, t_lo, knot);
    const double sdl =
        piece([&](double t) { return (t + departure) * f(t); }, knot, t_hi);
    return -(prefs.alpha() * mu + prefs.beta() * sde + prefs.gamma() * sdl);
}

struct McStats {
    double mean = 0.0;
    double std_error = 0.0;
};

inline McStats mc_mean(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    double s = 0.0;
    for (double v : xs) s += v;
    const double m = s / n;
    double ss = 0.0;
    for (double v : xs) ss += (v - m) * (v - m);
    return {m, std::sqrt(ss / (n - 1.0) / n)};
}

// Simulated realizations of the scheduling utility magnitude at departure D.
inline std::vector<double> mc_cost_draws(const QuantileModel& m,
                                         const SchedulingPreferences& prefs, double departure,
                                         std::size_t n, std::uint64_t seed) {
    SeededUniform rng(seed);
    std::vector<double> out(n);
    for (auto& v : out) {
        const double t = m.quantile(rng.next());
        const double a = t + departure;  // arrival relative to the PAT
        v = prefs.alpha() * t + prefs.beta() * std::max(-a, 0.0) +
            prefs.gamma() * std::max(a, 0.0);
    }
    return out;
}

} // namespace ttv::testing

#endif // TTV_TESTS_ORACLES_HPP
