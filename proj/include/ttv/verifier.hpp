#ifndef TTV_VERIFIER_HPP
#define TTV_VERIFIER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ttv/errors.hpp"
#include "ttv/quantile_model.hpp"
#include "ttv/risk_measures.hpp"
#include "ttv/rng.hpp"
#include "ttv/valuation.hpp"

namespace ttv {

enum class DerivativeTarget {
    ZetaEttWrtBeta,
    ZetaEttWrtGamma,
    VovWrtBeta,
    VovWrtGamma,
    VovWrtTau,
    TtrrWrtAlpha,
    TtrrWrtBeta,
    TtrrWrtGamma,
    TtvrWrtAlpha,
    TtvrWrtBeta,
    TtvrWrtGamma,
};

inline const char* derivative_target_name(DerivativeTarget t) {
    switch (t) {
        case DerivativeTarget::ZetaEttWrtBeta:  return "d(zeta_ett)/d(beta)";
        case DerivativeTarget::ZetaEttWrtGamma: return "d(zeta_ett)/d(gamma)";
        case DerivativeTarget::VovWrtBeta:      return "d(vov)/d(beta)";
        case DerivativeTarget::VovWrtGamma:     return "d(vov)/d(gamma)";
        case DerivativeTarget::VovWrtTau:       return "d(vov)/d(tau)";
        case DerivativeTarget::TtrrWrtAlpha:    return "d(ttrr)/d(alpha)";
        case DerivativeTarget::TtrrWrtBeta:     return "d(ttrr)/d(beta)";
        case DerivativeTarget::TtrrWrtGamma:    return "d(ttrr)/d(gamma)";
        case DerivativeTarget::TtvrWrtAlpha:    return "d(ttvr)/d(alpha)";
        case DerivativeTarget::TtvrWrtBeta:     return "d(ttvr)/d(beta)";
        case DerivativeTarget::TtvrWrtGamma:    return "d(ttvr)/d(gamma)";
    }
    return "?";
}

enum class ExpectedSign { NonNegative, NonPositive, Negative };

struct DerivativeCheck {
    DerivativeTarget target{};
    double estimate = 0.0;       // central difference at step/2 (Richardson pair)
    ExpectedSign expected_sign{};
    double step = 0.0;
    bool conditional = false;    // sign claim applies only under the valid condition
    bool applicable = true;      // false when the valid condition fails at this point
    bool stable = true;          // the two step sizes agreed within 1e-4 relative
    bool pass = false;
};

struct DerivativeSuite {
    std::vector<DerivativeCheck> checks;
    double appendix_a_closed_form = 0.0;  // dVOV/dgamma
    double appendix_a_fd = 0.0;
    bool appendix_a_match = false;
    bool all_pass = false;
};

/// Closed form for dVOV/dgamma:
///   -1 + F(zeta_ETT) + F_X^{-1}(tau) * int_{F(zeta)}^1 F_X^{-1} / zeta_ETT^2.
inline double appendix_a_dvov_dgamma(const QuantileModel& m,
                                     const SchedulingPreferences& prefs) {
    const auto t = detail::valuation_domain(m, prefs);
    return -1.0 + t.f_zeta + t.qx_tau * t.tail / (t.zeta_ett * t.zeta_ett);
}

namespace detail {

template <class F>
double central_diff(const F& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline bool sign_ok(double estimate, ExpectedSign sign) {
    const double slack = 1e-6 * std::max(1.0, std::fabs(estimate));
    switch (sign) {
        case ExpectedSign::NonNegative: return estimate >= -slack;
        case ExpectedSign::NonPositive: return estimate <= slack;
        // strictness is unverifiable at machine precision without a margin
        case ExpectedSign::Negative:    return estimate <= -1e-9;
    }
    return false;
}

} // namespace detail

/// Central-difference sign checks for the monotonicity claims: zeta_ETT in
/// beta/gamma, VOV in beta/gamma and in tau (perturbed through gamma), and
/// both ratios in alpha/beta/gamma. Each estimate is Richardson-paired:
/// evaluated at `step` and `step/2`, flagged unstable if they disagree
/// beyond 1e-4 relative. The gamma/tau claims hold only under the valid
/// condition; points where it fails are marked not applicable.
inline DerivativeSuite check_derivative_signs(const QuantileModel& m,
                                              const SchedulingPreferences& prefs,
                                              double step = 1e-4) {
    if (m.stddev() <= 0.0)
        fail(errc::degenerate_variability, "derivative checks need a non-degenerate model");
    if (!prefs.risk_averse()) fail(errc::non_risk_averse, "derivative checks need gamma > beta");
    const double a = prefs.alpha(), b = prefs.beta(), g = prefs.gamma();
    if (!(step > 0.0) || b - step <= 0.0 || g - step <= b + step)
        fail(errc::step_too_large, "perturbed preferences leave the risk-averse domain");

    const auto zeta_of = [&](double bb, double gg) {
        return detail::tail_quantities(m, gg / (bb + gg)).zeta_ett;
    };
    const auto vov_of = [&](double bb, double gg) {
        return value_of_variability(m, SchedulingPreferences::from_rates(a, bb, gg));
    };
    const auto ttrr_of = [&](double aa, double bb, double gg) {
        return reliability_ratio(m, SchedulingPreferences::from_rates(aa, bb, gg));
    };
    const auto ttvr_of = [&](double aa, double bb, double gg) {
        return variability_ratio(m, SchedulingPreferences::from_rates(aa, bb, gg));
    };

    const bool valid_here = [&] {
        try {
            return valid_condition(m, prefs).valid;
        } catch (const error&) {
            return false;
        }
    }();

    DerivativeSuite suite;
    const auto add = [&](DerivativeTarget target, ExpectedSign sign, bool conditional,
                         auto f) {
        DerivativeCheck c;
        c.target = target;
        c.expected_sign = sign;
        c.step = step;
        c.conditional = conditional;
        c.applicable = !conditional || valid_here;
        double e1 = 0.0, e2 = 0.0;
        try {
            e1 = detail::central_diff(f, 0.0, step);
            e2 = detail::central_diff(f, 0.0, step / 2.0);
        } catch (const error& err) {
            if (err.code() == errc::non_risk_averse)
                fail(errc::step_too_large,
                     "perturbation left the valuation domain: " + std::string(err.what()));
            throw;
        }
        c.estimate = e2;
        c.stable = std::fabs(e1 - e2) <= 1e-4 * std::max({std::fabs(e2), 1e-6});
        c.pass = !c.applicable || (c.stable && detail::sign_ok(e2, sign));
        suite.checks.push_back(c);
    };

    add(DerivativeTarget::ZetaEttWrtBeta, ExpectedSign::NonPositive, false,
        [&](double h) { return zeta_of(b + h, g); });
    add(DerivativeTarget::ZetaEttWrtGamma, ExpectedSign::NonNegative, false,
        [&](double h) { return zeta_of(b, g + h); });
    add(DerivativeTarget::VovWrtBeta, ExpectedSign::NonNegative, false,
        [&](double h) { return vov_of(b + h, g); });
    add(DerivativeTarget::VovWrtGamma, ExpectedSign::NonPositive, true,
        [&](double h) { return vov_of(b, g + h); });
    // tau claim via the chain rule: perturb gamma, divide by dtau/dgamma = beta/(beta+gamma)^2
    add(DerivativeTarget::VovWrtTau, ExpectedSign::NonPositive, true, [&](double h) {
        const double dtau_dgamma = b / ((b + g) * (b + g));
        return vov_of(b, g + h) / dtau_dgamma;
    });
    add(DerivativeTarget::TtrrWrtAlpha, ExpectedSign::Negative, false,
        [&](double h) { return ttrr_of(a + h, b, g); });
    add(DerivativeTarget::TtrrWrtBeta, ExpectedSign::NonNegative, false,
        [&](double h) { return ttrr_of(a, b + h, g); });
    add(DerivativeTarget::TtrrWrtGamma, ExpectedSign::NonNegative, false,
        [&](double h) { return ttrr_of(a, b, g + h); });
    add(DerivativeTarget::TtvrWrtAlpha, ExpectedSign::Negative, false,
        [&](double h) { return ttvr_of(a + h, b, g); });
    add(DerivativeTarget::TtvrWrtBeta, ExpectedSign::NonNegative, false,
        [&](double h) { return ttvr_of(a, b + h, g); });
    add(DerivativeTarget::TtvrWrtGamma, ExpectedSign::NonPositive, true,
        [&](double h) { return ttvr_of(a, b, g + h); });

    suite.appendix_a_closed_form = appendix_a_dvov_dgamma(m, prefs);
    suite.appendix_a_fd = detail::central_diff([&](double h) { return vov_of(b, g + h); },
                                               0.0, step / 2.0);
    suite.appendix_a_match =
        std::fabs(suite.appendix_a_fd - suite.appendix_a_closed_form) <=
        1e-5 * std::max(1.0, std::fabs(suite.appendix_a_closed_form));
    suite.all_pass = suite.appendix_a_match;
    for (const auto& c : suite.checks) suite.all_pass = suite.all_pass && c.pass;
    return suite;
}

struct AppendixBReport {
    std::vector<double> grid;        // stencil centers
    std::vector<bool> holds;         // F''/F' <= 1/(1-p) pointwise
    bool all_hold = false;
    bool valid_verdict = false;      // valid_condition at this tau
    bool implication_ok = false;     // all_hold implies valid_verdict
};

/// Pointwise test of the Appendix-B sufficiency condition
///   F^{-1}''(p) / F^{-1}'(p) <= 1/(1-p)  on [tau, 1 - 1e-6),
/// via five-point stencils at two step sizes (Richardson consistency). The
/// grid uses cell midpoints so every stencil stays clear of the 1e-6
/// neighborhood of p = 1 where heavy-tailed quantiles blow up.
///
/// The condition is sufficient, not necessary: a false point does not
/// refute the valid condition, but if every point holds the valid
/// condition must come out true, and that implication is checked.
inline AppendixBReport appendix_b_condition(const QuantileModel& m, double tau,
                                            std::size_t grid_n = 200) {
    detail::check_tau(tau);
    if (m.stddev() <= 0.0)
        fail(errc::degenerate_variability, "appendix B needs a non-degenerate model");
    if (m.kind() == Kind::Empirical && m.interpolation() == Interpolation::Step)
        fail(errc::validation_error, "appendix B needs a differentiable quantile");
    if (grid_n < 2) fail(errc::validation_error, "appendix B grid needs at least 2 points");

    constexpr double eps_tail = 1e-6;
    const double hi = 1.0 - eps_tail;
    if (tau >= hi) fail(errc::probability_out_of_range, "tau too close to 1");

    AppendixBReport rep;
    const double width = (hi - tau) / static_cast<double>(grid_n);
    const auto q = [&](double p) { return m.quantile(p); };
    for (std::size_t i = 0; i < grid_n; ++i) {
        const double p = tau + (static_cast<double>(i) + 0.5) * width;
        // Stencil step adapted to the local curvature scale: quantile
        // derivatives grow like powers of 1/(1-p), so h must shrink with
        // the distance to 1 to keep the truncation error of the five-point
        // formulas below the Richardson gate.
        const double h0 = std::min({1e-4, (1.0 - p) / 32.0, 0.45 * (hi - p), 0.25 * p});

        const auto stencil = [&](double h, double& d1, double& d2) {
            const double f_2l = q(p - 2 * h), f_l = q(p - h), f_0 = q(p), f_r = q(p + h),
                         f_2r = q(p + 2 * h);
            d1 = (f_2l - 8.0 * f_l + 8.0 * f_r - f_2r) / (12.0 * h);
            d2 = (-f_2l + 16.0 * f_l - 30.0 * f_0 + 16.0 * f_r - f_2r) / (12.0 * h * h);
        };
        double d1a, d2a, d1b, d2b;
        stencil(h0, d1a, d2a);
        stencil(h0 / 2.0, d1b, d2b);
        const double denom = std::max(std::fabs(d2b), std::fabs(d1b));
        if (denom > 0.0 && std::fabs(d2a - d2b) > 1e-3 * denom)
            fail(errc::curvature_unstable, "second-derivative stencils disagree at p=" +
                                               std::to_string(p));
        if (!(d1b > 0.0))
            fail(errc::curvature_unstable, "quantile derivative not positive at p=" +
                                               std::to_string(p));
        const double bound = 1.0 / (1.0 - p);
        const double ratio = d2b / d1b;
        rep.grid.push_back(p);
        rep.holds.push_back(ratio <= bound + 1e-6 * std::max(1.0, std::fabs(bound)));
    }
    rep.all_hold = std::all_of(rep.holds.begin(), rep.holds.end(), [](bool b) { return b; });

    // One-way implication: pointwise condition everywhere => valid condition.
    // Counts as violated only when a verdict exists at this tau and is false
    // despite the pointwise condition holding on the whole grid.
    bool have_verdict = false;
    try {
        rep.valid_verdict =
            valid_condition(m, SchedulingPreferences::from_punctuality(1.0, 1.0, tau)).valid;
        have_verdict = true;
    } catch (const error&) {
        rep.valid_verdict = false;
    }
    rep.implication_ok = !(rep.all_hold && have_verdict && !rep.valid_verdict);
    return rep;
}

struct AuditEntry {
    std::string name;
    double estimate = 0.0;
    double std_error = 0.0;
    double analytic = 0.0;
    bool pass = false;
};

struct MonteCarloAudit {
    std::vector<AuditEntry> entries;  // s_u, delta_eed, |EU(D_TTB)|, |EU(D_METT)|
    std::uint64_t seed = 0;
    std::size_t n = 0;
    bool pass = false;
};

/// Seeded simulation oracle: estimates S_u, delta_EED and the trip-cost
/// magnitudes at both departure criteria from n inverse-transform draws and
/// flags each against its analytic value at three standard errors.
inline MonteCarloAudit monte_carlo_audit(const QuantileModel& m,
                                         const SchedulingPreferences& prefs, std::size_t n,
                                         std::uint64_t seed) {
    if (n < 10'000) fail(errc::too_few_draws, "monte carlo audit needs n >= 1e4");
    MonteCarloAudit audit;
    audit.seed = seed;
    audit.n = n;

    const double tau = prefs.tau();
    const double b = m.is_degenerate() ? m.mean() : travel_time_budget(m, tau);
    const double d_ttb = -b;
    const double d_mett = m.is_degenerate() ? -m.mean() : -mean_excess_travel_time(m, tau);

    SeededUniform rng(seed);
    double sum_su = 0.0, ss_su = 0.0;
    double sum_exc = 0.0, ss_exc = 0.0;
    std::size_t n_exc = 0;
    double sum_c1 = 0.0, ss_c1 = 0.0;
    double sum_c2 = 0.0, ss_c2 = 0.0;
    const double nn = static_cast<double>(n);

    // two passes: means first, then centered squares for the standard errors
    std::vector<double> draws(n);
    for (auto& t : draws) t = m.quantile(rng.next());
    const auto cost = [&](double t, double d) {
        const double arr = t + d;
        return prefs.alpha() * t + prefs.beta() * std::max(-arr, 0.0) +
               prefs.gamma() * std::max(arr, 0.0);
    };
    for (double t : draws) {
        sum_su += std::max(t - b, 0.0);
        if (t > b) {
            sum_exc += t - b;
            ++n_exc;
        }
        sum_c1 += cost(t, d_ttb);
        sum_c2 += cost(t, d_mett);
    }
    const double m_su = sum_su / nn;
    const double m_exc = n_exc ? sum_exc / static_cast<double>(n_exc) : 0.0;
    const double m_c1 = sum_c1 / nn;
    const double m_c2 = sum_c2 / nn;
    for (double t : draws) {
        const double e_su = std::max(t - b, 0.0) - m_su;
        ss_su += e_su * e_su;
        if (t > b) {
            const double e = (t - b) - m_exc;
            ss_exc += e * e;
        }
        const double e1 = cost(t, d_ttb) - m_c1;
        ss_c1 += e1 * e1;
        const double e2 = cost(t, d_mett) - m_c2;
        ss_c2 += e2 * e2;
    }
    const auto se = [](double ss, std::size_t k) {
        return k > 1 ? std::sqrt(ss / (static_cast<double>(k) - 1.0) / static_cast<double>(k))
                     : 0.0;
    };

    const auto push = [&](std::string name, double est, double serr, double analytic) {
        AuditEntry e{std::move(name), est, serr, analytic, false};
        e.pass = std::fabs(est - analytic) <= 3.0 * serr + 1e-12 * std::max(1.0, std::fabs(analytic));
        audit.entries.push_back(std::move(e));
    };
    const double su_true = m.is_degenerate() ? 0.0 : unreliability_area(m, tau);
    push("s_u", m_su, se(ss_su, n), su_true);
    push("delta_eed", m_exc, se(ss_exc, n_exc), m.is_degenerate() ? 0.0 : expected_excess_delay(m, tau));
    push("eu_ttb", m_c1, se(ss_c1, n), -expected_utility(m, prefs, d_ttb));
    push("eu_mett", m_c2, se(ss_c2, n), -expected_utility(m, prefs, d_mett));
    audit.pass = std::all_of(audit.entries.begin(), audit.entries.end(),
                             [](const AuditEntry& e) { return e.pass; });
    return audit;
}

struct ConditionSweepRow {
    double tau = 0.0;
    bool in_domain = false;          // F_X^{-1}(tau) > 0, so (kappa+1)/l is meaningful
    double ratio = 0.0;              // (kappa+1)/l where in_domain, else NaN
    bool holds = false;              // the sufficiency inequality for dVOV/dgamma <= 0
    double inequality_margin = 0.0;  // zeta^2 (1-F(zeta)) - F^{-1}(tau) * tail
    std::optional<bool> appendix_b;  // pointwise condition verdict (continuous kinds)
};

struct ConditionSweep {
    std::string model_name;
    std::vector<ConditionSweepRow> rows;
    bool all_valid = false;
    std::optional<std::string> error;  // set when the model could not be swept
};

/// Valid-condition sweep over a tau grid. Each point evaluates the
/// inequality that actually gates dVOV/dgamma <= 0:
///   F_X^{-1}(tau) * int_{F(zeta)}^1 F_X^{-1}(x) dx <= zeta_ETT^2 (1 - F(zeta)).
/// Where F_X^{-1}(tau) > 0 this is exactly (kappa+1)/l >= 1 and the ratio is
/// reported; where F_X^{-1}(tau) <= 0 (tau below the model's median-crossing
/// point) the ratio representation degenerates in sign while the inequality
/// holds trivially, so only the verdict is reported there.
inline std::vector<ConditionSweep> condition_sweep(
    const std::vector<std::pair<std::string, QuantileModel>>& models,
    const std::vector<double>& tau_grid, bool with_appendix_b = false) {
    if (tau_grid.empty()) fail(errc::validation_error, "empty tau grid");
    for (std::size_t i = 0; i < tau_grid.size(); ++i) {
        if (!(tau_grid[i] > 0.5 && tau_grid[i] < 1.0))
            fail(errc::probability_out_of_range,
                 "condition sweep requires tau in the open interval (0.5, 1)");
        if (i > 0 && tau_grid[i] <= tau_grid[i - 1])
            fail(errc::validation_error, "tau grid must be strictly increasing");
    }

    std::vector<ConditionSweep> out;
    out.reserve(models.size());
    for (const auto& [name, m] : models) {
        ConditionSweep sweep;
        sweep.model_name = name;
        try {
            for (double tau : tau_grid) {
                const auto t = detail::tail_quantities(m, tau);
                ConditionSweepRow row;
                row.tau = tau;
                row.inequality_margin =
                    t.zeta_ett * t.zeta_ett * (1.0 - t.f_zeta) - t.qx_tau * t.tail;
                row.holds = row.inequality_margin >=
                            -1e-9 * std::max(1.0, t.zeta_ett * t.zeta_ett);
                row.in_domain = t.qx_tau > 0.0;
                row.ratio = row.in_domain
                                ? (t.zeta_ett * t.zeta_ett * (1.0 - t.f_zeta)) /
                                      (t.qx_tau * t.tail)
                                : std::numeric_limits<double>::quiet_NaN();
                if (with_appendix_b && m.kind() != Kind::Empirical) {
                    row.appendix_b = appendix_b_condition(m, tau, 64).all_hold;
                }
                sweep.rows.push_back(row);
            }
            sweep.all_valid =
                std::all_of(sweep.rows.begin(), sweep.rows.end(),
                            [](const ConditionSweepRow& r) { return r.holds; });
        } catch (const error& e) {
            sweep.rows.clear();
            sweep.all_valid = false;
            sweep.error = e.what();
        }
        out.push_back(std::move(sweep));
    }
    return out;
}

} // namespace ttv

#endif // TTV_VERIFIER_HPP
