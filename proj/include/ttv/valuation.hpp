#ifndef TTV_VALUATION_HPP
#define TTV_VALUATION_HPP

#include <cmath>
#include <utility>

#include "ttv/errors.hpp"
#include "ttv/quantile_model.hpp"
#include "ttv/risk_measures.hpp"

namespace ttv {

/// Monetary valuations for one model + preferences. Utilities per unit of
/// travel time margin (VOR), expected excess delay (VOU), and excess travel
/// time (VOV), the dimensionless reliability/variability ratios, and the
/// valid-condition verdict l <= kappa + 1 with its margin.
struct ValuationReport {
    double vor = 0.0;
    double vou = 0.0;
    double vov = 0.0;
    double ttrr = 0.0;          // rho_TTRR
    double ttvr = 0.0;          // rho_TTVR
    double kappa = 0.0;
    double ell = 0.0;
    bool valid_condition = false;
    double margin = 0.0;        // kappa + 1 - ell
    double f_zeta_ett = 0.0;    // F_X(zeta_ETT)
    // relative gaps between the formula routes and the utility-difference
    // routes, echoed in reports so a run documents its own consistency
    double vor_residual = 0.0;
    double vou_residual = 0.0;
    double vov_residual = 0.0;
};

namespace detail {

// Standardized tail quantities shared by every valuation formula.
//   qx_tau     = F_X^{-1}(tau)                  (zeta_TTM)
//   zeta_ett   = int_tau^1 F_X^{-1} / (1-tau)   (zeta_TTM + zeta_EED)
//   f_zeta     = F_X(zeta_ett)
//   tail       = int_{f_zeta}^1 F_X^{-1}(x) dx
struct TailQuantities {
    double qx_tau = 0.0;
    double zeta_eed = 0.0;
    double zeta_ett = 0.0;
    double f_zeta = 0.0;
    double tail = 0.0;
    double pe_tau = 0.0;  // int_tau^1 F_X^{-1}
};

inline TailQuantities tail_quantities(const QuantileModel& m, double tau) {
    check_tau(tau);
    if (m.stddev() <= 0.0)
        fail(errc::degenerate_variability, "tail quantities need a non-degenerate model");
    const StandardizedView x(m);
    TailQuantities t;
    t.qx_tau = x.quantile(tau);
    t.pe_tau = x.partial_expectation(tau);
    t.zeta_ett = t.pe_tau / (1.0 - tau);
    t.zeta_eed = t.zeta_ett - t.qx_tau;
    t.f_zeta = x.cdf(t.zeta_ett);
    t.tail = x.partial_expectation_closed(t.f_zeta);
    return t;
}

// Guards shared by every valuation operation: risk-averse preferences and a
// strictly positive standardized tau-quantile.
inline TailQuantities valuation_domain(const QuantileModel& m,
                                       const SchedulingPreferences& prefs) {
    if (!prefs.risk_averse())
        fail(errc::non_risk_averse, "valuations require gamma > beta (tau > 1/2)");
    if (m.stddev() <= 0.0)
        fail(errc::degenerate_variability, "valuations are undefined for zero variance");
    TailQuantities t = tail_quantities(m, prefs.tau());
    if (!(t.qx_tau > 0.0))
        fail(errc::non_risk_averse,
             "standardized tau-quantile is not positive; the valuation formulas "
             "do not apply at this tau");
    if (!(t.zeta_eed > 0.0))
        fail(errc::degenerate_variability, "no mass beyond the travel time budget");
    return t;
}

inline void cross_check(double a, double b, double tol, const char* what) {
    const double scale = std::max({std::fabs(a), std::fabs(b), 1e-30});
    if (std::fabs(a - b) > tol * scale + 1e-14) {
        fail(errc::cross_check_failed, std::string(what) + " routes disagree");
    }
}

// Identity cross-checks run at 1e-9 relative; the Burr partial expectation
// is quadrature-backed, so its dual routes get 1e-8.
inline double check_tol(const QuantileModel& m) {
    return m.kind() == Kind::BurrXII ? 1e-8 : 1e-9;
}

} // namespace detail

/// VOR = (beta+gamma) * int_tau^1 F_X^{-1} / F_X^{-1}(tau); cross-checked
/// against the utility-difference route (|EU(D_TTB)| - alpha*mu)/delta_TTM.
inline double value_of_reliability(const QuantileModel& m, const SchedulingPreferences& prefs) {
    const auto t = detail::valuation_domain(m, prefs);
    const double bg = prefs.beta() + prefs.gamma();
    const double vor = bg * t.pe_tau / t.qx_tau;
    const double eu_route =
        (optimal_departure(m, prefs).eu_magnitude - prefs.alpha() * m.mean()) /
        (m.stddev() * t.qx_tau);
    detail::cross_check(vor, eu_route, detail::check_tol(m), "VOR");
    return vor;
}

/// VOU = (beta+gamma) * [zeta*F(zeta) - zeta + int_{F(zeta)}^1 F_X^{-1}] / zeta_EED;
/// cross-checked against (|EU(D_METT)| - |EU(D_TTB)|)/delta_EED.
inline double value_of_unreliability(const QuantileModel& m,
                                     const SchedulingPreferences& prefs) {
    const auto t = detail::valuation_domain(m, prefs);
    const double bg = prefs.beta() + prefs.gamma();
    const double vou = bg * (t.zeta_ett * t.f_zeta - t.zeta_ett + t.tail) / t.zeta_eed;
    const double eu_route = (departure_mett(m, prefs).eu_magnitude -
                             optimal_departure(m, prefs).eu_magnitude) /
                            (m.stddev() * t.zeta_eed);
    detail::cross_check(vou, eu_route, detail::check_tol(m), "VOU");
    return vou;
}

/// VOV = -gamma + (beta+gamma)*F(zeta) + (beta+gamma)*int_{F(zeta)}^1 F_X^{-1} / zeta;
/// equals the zeta-weighted average of VOR and VOU (cross-checked).
inline double value_of_variability(const QuantileModel& m, const SchedulingPreferences& prefs) {
    const auto t = detail::valuation_domain(m, prefs);
    const double bg = prefs.beta() + prefs.gamma();
    const double vov = -prefs.gamma() + bg * t.f_zeta + bg * t.tail / t.zeta_ett;
    const double weighted = (value_of_reliability(m, prefs) * t.qx_tau +
                             value_of_unreliability(m, prefs) * t.zeta_eed) /
                            t.zeta_ett;
    detail::cross_check(vov, weighted, detail::check_tol(m), "VOV");
    return vov;
}

/// kappa = zeta_EED / F_X^{-1}(tau); l is the ratio of the conditional tail
/// mean of X beyond zeta_ETT to the one beyond zeta_TTM.
inline std::pair<double, double> kappa_and_ell(const QuantileModel& m,
                                               const SchedulingPreferences& prefs) {
    const auto t = detail::valuation_domain(m, prefs);
    const double kappa = t.zeta_eed / t.qx_tau;
    const double ell = (t.tail / (1.0 - t.f_zeta)) / t.zeta_ett;
    return {kappa, ell};
}

struct ValidVerdict {
    bool valid = false;
    double margin = 0.0;  // kappa + 1 - ell
};

/// Valid condition l <= kappa + 1 under which the VOV is non-increasing in
/// gamma (and in tau).
inline ValidVerdict valid_condition(const QuantileModel& m, const SchedulingPreferences& prefs) {
    const auto [kappa, ell] = kappa_and_ell(m, prefs);
    const double margin = kappa + 1.0 - ell;
    return {margin >= -1e-12, margin};
}

/// rho_TTVR = VOV / alpha, bounded below by beta/alpha.
inline double variability_ratio(const QuantileModel& m, const SchedulingPreferences& prefs) {
    return value_of_variability(m, prefs) / prefs.alpha();
}

/// rho_TTRR = ((beta+gamma)/alpha) * int_tau^1 F_X^{-1}(x) dx.
inline double reliability_ratio(const QuantileModel& m, const SchedulingPreferences& prefs) {
    const auto t = detail::valuation_domain(m, prefs);
    return (prefs.beta() + prefs.gamma()) / prefs.alpha() * t.pe_tau;
}

inline ValuationReport valuation_report(const QuantileModel& m,
                                        const SchedulingPreferences& prefs) {
    const auto t = detail::valuation_domain(m, prefs);
    ValuationReport r;
    r.vor = value_of_reliability(m, prefs);
    r.vou = value_of_unreliability(m, prefs);
    r.vov = value_of_variability(m, prefs);
    r.ttrr = reliability_ratio(m, prefs);
    r.ttvr = r.vov / prefs.alpha();
    const auto [kappa, ell] = kappa_and_ell(m, prefs);
    r.kappa = kappa;
    r.ell = ell;
    r.margin = kappa + 1.0 - ell;
    r.valid_condition = r.margin >= -1e-12;
    r.f_zeta_ett = t.f_zeta;

    const double sigma = m.stddev();
    const double amu = prefs.alpha() * m.mean();
    const double eu_ttb = optimal_departure(m, prefs).eu_magnitude;
    const double eu_mett = departure_mett(m, prefs).eu_magnitude;
    const auto rel_gap = [](double a, double b) {
        return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1e-30});
    };
    r.vor_residual = rel_gap(r.vor, (eu_ttb - amu) / (sigma * t.qx_tau));
    r.vou_residual = rel_gap(r.vou, (eu_mett - eu_ttb) / (sigma * t.zeta_eed));
    r.vov_residual = rel_gap(r.vov, (eu_mett - amu) / (sigma * t.zeta_ett));
    return r;
}

} // namespace ttv

#endif // TTV_VALUATION_HPP
