#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ttv/scenarios.hpp"

using Catch::Approx;
using namespace ttv;

namespace {

const auto kUniform = QuantileModel::uniform_from_moments(10.0, 1.0);
const auto kPrefs214 = SchedulingPreferences::from_rates(2.0, 1.0, 4.0);
// route-table calibration: beta/alpha = 0.40 at tau = 0.8
const auto kRoutePrefs = SchedulingPreferences::from_rates(2.0, 0.8, 3.2);

struct PathSpec {
    const char* name;
    double cov;
    double cost_mean;  // scenario-1 published cost; mean = cost/alpha
    double rel_pub;    // published reliability cost
    double unrel_pub;  // published unreliability cost
};

// six-route benchmark: CoV and published scenario costs
constexpr PathSpec kPaths[] = {
    {"path1", 0.20, 19.94, 2.41, 0.39},
    {"path2", 0.41, 15.93, 4.01, 0.80},
    {"path3", 0.64, 13.93, 5.58, 1.32},
    {"path4", 0.79, 12.65, 6.15, 1.60},
    {"path5", 0.94, 12.36, 7.01, 1.98},
    {"path6", 1.10, 12.80, 8.21, 2.51},
};

std::vector<std::pair<std::string, QuantileModel>> route_suite() {
    std::vector<std::pair<std::string, QuantileModel>> routes;
    for (const auto& p : kPaths) {
        const double mu = p.cost_mean / 2.0;
        routes.emplace_back(p.name,
                            QuantileModel::lognormal_from_moments(mu, p.cov * mu));
    }
    return routes;
}

} // namespace

TEST_CASE("trip cost breakdown for the uniform point", "[scenarios]") {
    const auto b = trip_cost(kUniform, kPrefs214, Scenario::METT);
    REQUIRE(b.certainty == Approx(20.0).margin(1e-12));
    REQUIRE(b.reliability == Approx(1.3856406460551).margin(1e-5));
    REQUIRE(b.unreliability == Approx(0.0866025403784439).margin(1e-5));
    REQUIRE(b.total == Approx(21.4722431864335).margin(1e-5));
    REQUIRE(b.percents[0] + b.percents[1] + b.percents[2] == Approx(1.0).margin(1e-12));
}

TEST_CASE("mean scenario accepts any model", "[scenarios]") {
    const auto b = trip_cost(QuantileModel::degenerate(10.0), kPrefs214, Scenario::Mean);
    REQUIRE(b.certainty == Approx(20.0));
    REQUIRE(b.reliability == 0.0);
    REQUIRE(b.unreliability == 0.0);
    REQUIRE(b.total == Approx(20.0));
    REQUIRE_THROWS_AS(trip_cost(QuantileModel::degenerate(10.0), kPrefs214, Scenario::METT),
                      ttv::error);
}

TEST_CASE("path 1 reproduces the published reliability split", "[scenarios]") {
    const auto m = QuantileModel::lognormal_from_moments(9.97, 0.20 * 9.97);
    const auto b = trip_cost(m, kRoutePrefs, Scenario::METT);
    REQUIRE(b.certainty == Approx(19.94).margin(1e-10));
    REQUIRE(b.reliability == Approx(2.38977809226737).epsilon(1e-9));
    REQUIRE(b.unreliability == Approx(0.388685658240396).epsilon(1e-9));
    // published values within the 2% reproduction envelope
    REQUIRE(std::fabs(b.reliability - 2.41) / 2.41 < 0.02);
    REQUIRE(std::fabs(b.unreliability - 0.39) / 0.39 < 0.02);
}

TEST_CASE("all six routes reproduce published costs within 2%", "[scenarios]") {
    for (const auto& p : kPaths) {
        const double mu = p.cost_mean / 2.0;
        const auto m = QuantileModel::lognormal_from_moments(mu, p.cov * mu);
        const auto b = trip_cost(m, kRoutePrefs, Scenario::METT);
        INFO(p.name);
        REQUIRE(std::fabs(b.reliability - p.rel_pub) / p.rel_pub < 0.02);
        REQUIRE(std::fabs(b.unreliability - p.unrel_pub) / p.unrel_pub < 0.02);
    }
}

TEST_CASE("route ranking matches the published comparison", "[scenarios]") {
    const auto cmp = compare_routes(route_suite(), kRoutePrefs);
    REQUIRE(cmp.argmin_mean == "path5");
    REQUIRE(cmp.argmin_ttb == "path4");
    REQUIRE(cmp.argmin_mett == "path4");
    // highest METT cost sits on the longest tail
    double worst = -1.0;
    std::string worst_name;
    for (const auto& r : cmp.routes) {
        REQUIRE(r.cost_mett.has_value());
        if (*r.cost_mett > worst) {
            worst = *r.cost_mett;
            worst_name = r.name;
        }
    }
    REQUIRE(worst_name == "path6");
}

TEST_CASE("unreliability share of total grows along the tail ladder", "[scenarios]") {
    const auto cmp = compare_routes(route_suite(), kRoutePrefs);
    double prev = -1.0;
    for (const auto& r : cmp.routes) {
        const double share = r.breakdown->percents[2];
        REQUIRE(share > prev);
        prev = share;
    }
    REQUIRE(cmp.routes.front().breakdown->percents[2] == Approx(0.0171088002476272).margin(2e-3));
    REQUIRE(cmp.routes.back().breakdown->percents[2] == Approx(0.106434234818187).margin(5e-3));
}

TEST_CASE("tie breaking and failing routes", "[scenarios]") {
    const auto m = QuantileModel::lognormal_from_moments(9.97, 1.994);
    const auto cmp = compare_routes({{"bbb", m}, {"aaa", m}}, kPrefs214);
    REQUIRE(cmp.argmin_mean == "aaa");
    REQUIRE(cmp.argmin_mett == "aaa");
    REQUIRE(*cmp.routes[0].cost_mett == *cmp.routes[1].cost_mett);

    const auto with_deg = compare_routes(
        {{"live", m}, {"flat", QuantileModel::degenerate(5.0)}}, kPrefs214);
    REQUIRE(with_deg.routes[1].error.has_value());
    REQUIRE(with_deg.routes[1].cost_mean.has_value());  // mean scenario still reported
    REQUIRE_FALSE(with_deg.routes[1].cost_mett.has_value());
    REQUIRE(with_deg.argmin_mett == "live");
    REQUIRE(with_deg.argmin_mean == "flat");
}

TEST_CASE("ranking is invariant to preference scaling", "[scenarios][property]") {
    const auto base = compare_routes(route_suite(), kRoutePrefs);
    for (double lambda : {0.1, 5.0}) {
        const auto scaled_prefs = SchedulingPreferences::from_rates(
            lambda * 2.0, lambda * 0.8, lambda * 3.2);
        const auto cmp = compare_routes(route_suite(), scaled_prefs);
        REQUIRE(cmp.argmin_mean == base.argmin_mean);
        REQUIRE(cmp.argmin_ttb == base.argmin_ttb);
        REQUIRE(cmp.argmin_mett == base.argmin_mett);
    }
}

TEST_CASE("tradeoff table for the 101_1 lognormal", "[scenarios]") {
    const auto m = QuantileModel::lognormal_from_moments(52.60, 13.51);
    const std::vector<double> grid{0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90};
    const auto rows = tradeoff_table(m, 2.0, 1.0, grid);
    REQUIRE(rows.size() == 7);

    REQUIRE(rows[0].tau == 0.60);
    REQUIRE(rows[0].gamma == Approx(1.5).margin(1e-12));
    REQUIRE(rows[0].ett == Approx(13.1188397803704).epsilon(1e-9));
    REQUIRE(rows[0].ttvr == Approx(0.646518481909085).epsilon(1e-9));
    REQUIRE(rows[0].ett_change_pct == 0.0);

    // published external-method point values, within the documented 10% gap
    REQUIRE(std::fabs(rows[0].ett - 12.35) / 12.35 < 0.10);
    REQUIRE(std::fabs(rows[0].ttvr - 0.6889) / 0.6889 < 0.10);

    REQUIRE(rows[4].ett == Approx(20.5073931703279).epsilon(1e-9));
    REQUIRE(rows[4].ttvr == Approx(0.58605199437553).epsilon(1e-9));

    // monotone trade-off: every arrow direction
    for (std::size_t i = 1; i < rows.size(); ++i) {
        REQUIRE(rows[i].ett > rows[i - 1].ett);
        REQUIRE(rows[i].ttvr < rows[i - 1].ttvr);
        REQUIRE(rows[i].ett_change_pct > 0.0);
        REQUIRE(rows[i].ttvr_change_pct < 0.0);
    }
}

TEST_CASE("tradeoff guards", "[scenarios]") {
    REQUIRE_THROWS_AS(tradeoff_table(QuantileModel::degenerate(4.0), 2.0, 1.0, {0.6, 0.7}),
                      ttv::error);
    const auto m = QuantileModel::lognormal_from_moments(52.60, 13.51);
    REQUIRE_THROWS_AS(tradeoff_table(m, 2.0, 1.0, {0.5, 0.6}), ttv::error);
    REQUIRE_THROWS_AS(tradeoff_table(m, 2.0, 1.0, {0.7, 0.6}), ttv::error);
}

TEST_CASE("structural identities of the scenario ladder", "[scenarios][property]") {
    const auto logn = QuantileModel::lognormal_from_moments(9.97, 1.994);
    for (const auto& m : {kUniform, logn, QuantileModel::burr(3.0, 2.0, 10.0)}) {
        for (const auto& prefs : {kPrefs214, kRoutePrefs}) {
            const auto c1 = trip_cost(m, prefs, Scenario::Mean);
            const auto c2 = trip_cost(m, prefs, Scenario::TTB);
            const auto c3 = trip_cost(m, prefs, Scenario::METT);
            const auto rm = compute_risk_measures(m, prefs);
            REQUIRE(c2.total - c1.total ==
                    Approx(rm.delta_ttm * value_of_reliability(m, prefs)).epsilon(1e-8));
            REQUIRE(c3.total - c2.total ==
                    Approx(rm.delta_eed * value_of_unreliability(m, prefs))
                        .epsilon(1e-8).margin(1e-12));
            REQUIRE(c3.total == Approx(departure_mett(m, prefs).eu_magnitude).epsilon(1e-8));
            REQUIRE(c2.total == Approx(optimal_departure(m, prefs).eu_magnitude).epsilon(1e-8));
        }
    }
}
