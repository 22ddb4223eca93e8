#ifndef TTV_RISK_MEASURES_HPP
#define TTV_RISK_MEASURES_HPP

#include <algorithm>
#include <cmath>

#include "ttv/errors.hpp"
#include "ttv/quantile_model.hpp"

namespace ttv {

/// Trip-scheduling preferences (alpha, beta, gamma) with the punctuality
/// requirement tau = gamma/(beta + gamma) enforced at construction: supply
/// the three rates and tau is derived, or supply (alpha, beta, tau) and
/// gamma = beta * tau/(1 - tau) is derived. alpha doubles as the value of
/// time. The preferred arrival time is normalized to zero throughout.
class SchedulingPreferences {
public:
    static SchedulingPreferences from_rates(double alpha, double beta, double gamma) {
        validate_positive(alpha, beta, gamma);
        return SchedulingPreferences(alpha, beta, gamma, gamma / (beta + gamma));
    }

    static SchedulingPreferences from_punctuality(double alpha, double beta, double tau) {
        if (!(tau > 0.0 && tau < 1.0))
            fail(errc::probability_out_of_range, "tau must lie in (0,1)");
        const double gamma = beta * tau / (1.0 - tau);
        validate_positive(alpha, beta, gamma);
        return SchedulingPreferences(alpha, beta, gamma, tau);
    }

    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }
    double gamma() const noexcept { return gamma_; }
    double tau() const noexcept { return tau_; }
    double value_of_time() const noexcept { return alpha_; }
    bool risk_averse() const noexcept { return gamma_ > beta_; }

private:
    SchedulingPreferences(double a, double b, double g, double t)
        : alpha_(a), beta_(b), gamma_(g), tau_(t) {}

    static void validate_positive(double a, double b, double g) {
        if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(g))
            fail(errc::non_finite, "preference rates");
        if (a <= 0.0 || b <= 0.0 || g <= 0.0)
            fail(errc::validation_error, "preference rates must be positive");
    }

    double alpha_, beta_, gamma_, tau_;
};

/// Tail quantities for one model + preferences: unreliability area,
/// travel time budget, margins, mean-excess travel time, the dimensionless
/// scaling factors, and the reliability premium at D = -b(tau).
struct RiskMeasures {
    double s_u = 0.0;        // unreliability area
    double ttb = 0.0;        // b(tau)
    double delta_ttm = 0.0;  // sigma * F_X^{-1}(tau)
    double delta_eed = 0.0;  // S_u / (1 - tau)
    double mett = 0.0;       // eta(tau) = ttb + delta_eed
    double zeta_ttm = 0.0;
    double zeta_eed = 0.0;
    double zeta_ett = 0.0;
    double premium = 0.0;    // pi at D = -b(tau)
};

enum class DepartureCriterion { Mean, TTB, METT, Custom };

struct DepartureAnalysis {
    double departure = 0.0;      // D, clock offset before the PAT at zero
    double eu_magnitude = 0.0;   // |EU|; utilities themselves are nonpositive
    DepartureCriterion criterion = DepartureCriterion::Custom;
    bool degenerate = false;     // set when the model has zero variance
};

namespace detail {

inline void check_tau(double tau) {
    if (!(tau > 0.0 && tau < 1.0)) fail(errc::probability_out_of_range, "tau must lie in (0,1)");
}

// E[(T + D)^+] evaluated in the quantile domain:
//   int_{p0}^1 (F_T^{-1}(u) + D) du  with p0 = F_T(-D).
// Exact for Step empirical models (right-continuous CDF + left-continuous
// quantile), closed-form-or-quadrature elsewhere.
inline double expected_lateness(const QuantileModel& m, double departure) {
    const double t0 = -departure;
    const double p0 = std::clamp(m.cdf(t0), 0.0, 1.0);
    return m.partial_expectation_closed(p0) - (1.0 - p0) * t0;
}

} // namespace detail

/// b(tau): the tau-percentile of travel time, mean + travel time margin.
inline double travel_time_budget(const QuantileModel& m, double tau) {
    detail::check_tau(tau);
    return m.quantile(tau);
}

/// S_u = int_tau^1 (F_T^{-1}(x) - F_T^{-1}(tau)) dx, the aggregate of all
/// unexpected delays. Zero (not an error) for degenerate models.
inline double unreliability_area(const QuantileModel& m, double tau) {
    detail::check_tau(tau);
    if (m.is_degenerate()) return 0.0;
    const double s = m.partial_expectation(tau) - (1.0 - tau) * m.quantile(tau);
    return std::max(0.0, s);
}

/// delta_EED = S_u / (1 - tau) = E[T - b(tau) | T >= b(tau)] for continuous
/// models.
inline double expected_excess_delay(const QuantileModel& m, double tau) {
    return unreliability_area(m, tau) / (1.0 - tau);
}

/// eta(tau) = b(tau) + delta_EED.
inline double mean_excess_travel_time(const QuantileModel& m, double tau) {
    return travel_time_budget(m, tau) + expected_excess_delay(m, tau);
}

inline RiskMeasures compute_risk_measures(const QuantileModel& m,
                                          const SchedulingPreferences& prefs) {
    const double tau = prefs.tau();
    detail::check_tau(tau);
    RiskMeasures r;
    if (m.is_degenerate()) {
        r.ttb = r.mett = m.mean();
        return r;
    }
    r.ttb = m.quantile(tau);
    r.delta_ttm = r.ttb - m.mean();
    r.s_u = unreliability_area(m, tau);
    r.delta_eed = r.s_u / (1.0 - tau);
    r.mett = r.ttb + r.delta_eed;
    const double sigma = m.stddev();
    r.zeta_ttm = r.delta_ttm / sigma;
    r.zeta_eed = r.delta_eed / sigma;
    r.zeta_ett = r.zeta_ttm + r.zeta_eed;
    r.premium = (prefs.beta() + prefs.gamma()) / prefs.alpha() * r.s_u;
    return r;
}

/// Expected utility of departing at D (nonpositive):
///   EU(D) = -{ alpha*mu + beta*E[(-D - T)^+] + gamma*E[(T + D)^+] }
/// evaluated in the quantile domain via
///   EU(D) = -{ (alpha-beta)*mu - beta*D + (beta+gamma)*E[(T+D)^+] }.
inline double expected_utility(const QuantileModel& m, const SchedulingPreferences& prefs,
                               double departure) {
    if (!std::isfinite(departure)) fail(errc::non_finite_departure, "departure must be finite");
    const double mu = m.mean();
    double lateness;
    if (m.is_degenerate()) {
        lateness = std::max(0.0, mu + departure);
    } else {
        lateness = std::max(0.0, detail::expected_lateness(m, departure));
    }
    return -((prefs.alpha() - prefs.beta()) * mu - prefs.beta() * departure +
             (prefs.beta() + prefs.gamma()) * lateness);
}

/// D* = -b(tau): the utility-maximizing head start (TTB criterion).
inline DepartureAnalysis optimal_departure(const QuantileModel& m,
                                           const SchedulingPreferences& prefs) {
    DepartureAnalysis d;
    d.criterion = DepartureCriterion::TTB;
    if (m.is_degenerate()) {
        d.departure = -m.mean();
        d.eu_magnitude = prefs.alpha() * m.mean();
        d.degenerate = true;
        return d;
    }
    d.departure = -travel_time_budget(m, prefs.tau());
    d.eu_magnitude = -expected_utility(m, prefs, d.departure);
    return d;
}

/// D_METT = -eta(tau): head start covering the travel time margin plus the
/// expected excess delay.
inline DepartureAnalysis departure_mett(const QuantileModel& m,
                                        const SchedulingPreferences& prefs) {
    DepartureAnalysis d;
    d.criterion = DepartureCriterion::METT;
    if (m.is_degenerate()) {
        d.departure = -m.mean();
        d.eu_magnitude = prefs.alpha() * m.mean();
        d.degenerate = true;
        return d;
    }
    d.departure = -mean_excess_travel_time(m, prefs.tau());
    d.eu_magnitude = -expected_utility(m, prefs, d.departure);
    return d;
}

/// Reliability premium at departure D: the maximum early adjustment a
/// traveler would accept to eliminate variability,
///   pi = ((beta+gamma)/alpha) * E[(T + D)^+].
/// At D = -b(tau) this equals ((beta+gamma)/alpha) * S_u exactly.
inline double reliability_premium(const QuantileModel& m, const SchedulingPreferences& prefs,
                                  double departure) {
    if (!std::isfinite(departure)) fail(errc::non_finite_departure, "departure must be finite");
    if (m.is_degenerate()) {
        return (prefs.beta() + prefs.gamma()) / prefs.alpha() *
               std::max(0.0, m.mean() + departure);
    }
    const double lateness = std::max(0.0, detail::expected_lateness(m, departure));
    return (prefs.beta() + prefs.gamma()) / prefs.alpha() * lateness;
}

} // namespace ttv

#endif // TTV_RISK_MEASURES_HPP
