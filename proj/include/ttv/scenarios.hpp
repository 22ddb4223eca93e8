#ifndef TTV_SCENARIOS_HPP
#define TTV_SCENARIOS_HPP

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ttv/errors.hpp"
#include "ttv/quantile_model.hpp"
#include "ttv/risk_measures.hpp"
#include "ttv/valuation.hpp"

namespace ttv {

enum class Scenario { Mean, TTB, METT };

inline const char* scenario_name(Scenario s) {
    switch (s) {
        case Scenario::Mean: return "mean";
        case Scenario::TTB:  return "ttb";
        case Scenario::METT: return "mett";
    }
    return "?";
}

/// Trip cost split into its certainty (alpha*mu), reliability
/// (delta_TTM * VOR) and unreliability (delta_EED * VOU) components.
/// The running totals reproduce |EU| at the matching departure criterion:
/// total(TTB) = |EU(D_TTB)| and total(METT) = |EU(D_METT)|.
struct TripCostBreakdown {
    double certainty = 0.0;
    double reliability = 0.0;
    double unreliability = 0.0;
    double total = 0.0;
    std::array<double, 3> percents{0.0, 0.0, 0.0};  // fractions of total, sum to 1
};

inline TripCostBreakdown trip_cost(const QuantileModel& m, const SchedulingPreferences& prefs,
                                   Scenario scenario) {
    TripCostBreakdown out;
    out.certainty = prefs.alpha() * m.mean();
    if (scenario != Scenario::Mean) {
        const auto rm = compute_risk_measures(m, prefs);
        out.reliability = rm.delta_ttm * value_of_reliability(m, prefs);
        detail::cross_check(out.certainty + out.reliability,
                            optimal_departure(m, prefs).eu_magnitude, 1e-8,
                            "trip cost [TTB] vs |EU(D_TTB)|");
        if (scenario == Scenario::METT) {
            out.unreliability = rm.delta_eed * value_of_unreliability(m, prefs);
            detail::cross_check(out.certainty + out.reliability + out.unreliability,
                                departure_mett(m, prefs).eu_magnitude, 1e-8,
                                "trip cost [METT] vs |EU(D_METT)|");
        }
    }
    out.total = out.certainty + out.reliability + out.unreliability;
    out.percents = {out.certainty / out.total, out.reliability / out.total,
                    out.unreliability / out.total};
    return out;
}

struct RouteResult {
    std::string name;
    std::optional<double> cost_mean;
    std::optional<double> cost_ttb;
    std::optional<double> cost_mett;
    std::optional<TripCostBreakdown> breakdown;  // METT decomposition
    std::optional<std::string> error;            // set when a scenario was refused
};

struct RouteComparison {
    std::vector<RouteResult> routes;             // input order
    std::optional<std::string> argmin_mean;
    std::optional<std::string> argmin_ttb;
    std::optional<std::string> argmin_mett;
};

/// Per-route scenario totals plus the METT percent decomposition, with the
/// per-scenario cheapest route. A route whose valuation is refused (e.g. a
/// degenerate route under TTB/METT) is reported with its error rather than
/// dropped. Ties break toward the lexicographically smaller route name.
inline RouteComparison compare_routes(
    const std::vector<std::pair<std::string, QuantileModel>>& routes,
    const SchedulingPreferences& prefs) {
    if (routes.size() < 2) fail(errc::validation_error, "route comparison needs >= 2 routes");
    RouteComparison out;
    const auto better = [](double cost, const std::string& name, double best_cost,
                           const std::string& best_name) {
        return cost < best_cost || (cost == best_cost && name < best_name);
    };
    double best_mean = 0.0, best_ttb = 0.0, best_mett = 0.0;
    for (const auto& [name, model] : routes) {
        RouteResult r;
        r.name = name;
        r.cost_mean = trip_cost(model, prefs, Scenario::Mean).total;
        if (!out.argmin_mean ||
            better(*r.cost_mean, name, best_mean, *out.argmin_mean)) {
            out.argmin_mean = name;
            best_mean = *r.cost_mean;
        }
        try {
            r.cost_ttb = trip_cost(model, prefs, Scenario::TTB).total;
            const auto mett = trip_cost(model, prefs, Scenario::METT);
            r.cost_mett = mett.total;
            r.breakdown = mett;
            if (!out.argmin_ttb || better(*r.cost_ttb, name, best_ttb, *out.argmin_ttb)) {
                out.argmin_ttb = name;
                best_ttb = *r.cost_ttb;
            }
            if (!out.argmin_mett ||
                better(*r.cost_mett, name, best_mett, *out.argmin_mett)) {
                out.argmin_mett = name;
                best_mett = *r.cost_mett;
            }
        } catch (const error& e) {
            r.error = e.what();
        }
        out.routes.push_back(std::move(r));
    }
    return out;
}

struct TradeoffRow {
    double tau = 0.0;
    double gamma = 0.0;            // beta * tau/(1-tau)
    double ett = 0.0;              // sigma * zeta_ETT
    double ttvr = 0.0;
    double ett_change_pct = 0.0;   // vs. the first row
    double ttvr_change_pct = 0.0;  // vs. the first row
};

/// Punctuality trade-off table: alpha and beta fixed, each row's gamma
/// implied by its tau. Percent changes are relative to the first row.
inline std::vector<TradeoffRow> tradeoff_table(const QuantileModel& m, double alpha,
                                               double beta,
                                               const std::vector<double>& tau_grid) {
    if (tau_grid.empty()) fail(errc::validation_error, "empty tau grid");
    for (std::size_t i = 0; i < tau_grid.size(); ++i) {
        if (!(tau_grid[i] > 0.5 && tau_grid[i] < 1.0))
            fail(errc::probability_out_of_range, "trade-off taus must lie in (0.5, 1)");
        if (i > 0 && tau_grid[i] <= tau_grid[i - 1])
            fail(errc::validation_error, "tau grid must be strictly increasing");
    }
    std::vector<TradeoffRow> rows;
    rows.reserve(tau_grid.size());
    for (double tau : tau_grid) {
        const auto prefs = SchedulingPreferences::from_punctuality(alpha, beta, tau);
        const auto rm = compute_risk_measures(m, prefs);
        TradeoffRow row;
        row.tau = tau;
        row.gamma = prefs.gamma();
        row.ett = m.stddev() * rm.zeta_ett;
        row.ttvr = variability_ratio(m, prefs);
        if (!rows.empty()) {
            row.ett_change_pct = 100.0 * (row.ett - rows.front().ett) / rows.front().ett;
            row.ttvr_change_pct = 100.0 * (row.ttvr - rows.front().ttvr) / rows.front().ttvr;
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace ttv

#endif // TTV_SCENARIOS_HPP
