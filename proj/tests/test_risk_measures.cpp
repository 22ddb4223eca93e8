#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "ttv/risk_measures.hpp"

using Catch::Approx;
using namespace ttv;

namespace {

const auto kUniform = QuantileModel::uniform_from_moments(10.0, 1.0);
const auto kLogn = QuantileModel::lognormal_from_moments(9.97, 1.994);
const auto kBurr = QuantileModel::burr(3.0, 2.0, 10.0);
const auto kPrefs214 = SchedulingPreferences::from_rates(2.0, 1.0, 4.0);  // tau = 0.8

std::vector<QuantileModel> identity_suite() {
    std::vector<QuantileModel> suite{
        kUniform,
        kLogn,
        QuantileModel::lognormal_from_moments(52.60, 13.51),
        QuantileModel::lognormal_from_moments(6.40, 7.04),
        kBurr,
        QuantileModel::burr(2.5, 1.5, 8.0),
    };
    suite.push_back(QuantileModel::empirical(draw_samples(kLogn, 4000, 21), Interpolation::Step));
    suite.push_back(QuantileModel::empirical(draw_samples(kLogn, 4000, 22), Interpolation::Linear));
    return suite;
}

} // namespace

TEST_CASE("preference coupling tau = gamma/(beta+gamma)", "[risk_measures]") {
    const auto p = SchedulingPreferences::from_rates(2.0, 1.0, 4.0);
    REQUIRE(p.tau() == Approx(0.8).margin(1e-15));
    REQUIRE(p.risk_averse());

    const auto q = SchedulingPreferences::from_punctuality(2.0, 1.0, 0.8);
    REQUIRE(q.gamma() == Approx(4.0).margin(1e-12));
    REQUIRE(q.tau() == Approx(q.gamma() / (q.beta() + q.gamma())).margin(1e-12));

    const auto r = SchedulingPreferences::from_rates(2.0, 2.0, 1.0);
    REQUIRE_FALSE(r.risk_averse());

    REQUIRE_THROWS_AS(SchedulingPreferences::from_rates(0.0, 1.0, 1.0), ttv::error);
    REQUIRE_THROWS_AS(SchedulingPreferences::from_punctuality(2.0, 1.0, 1.0), ttv::error);
}

TEST_CASE("travel time budget", "[risk_measures]") {
    REQUIRE(travel_time_budget(QuantileModel::degenerate(10.0), 0.9) == 10.0);
    REQUIRE(travel_time_budget(kLogn, 0.8) == Approx(11.5495531559978).epsilon(1e-12));
    REQUIRE(travel_time_budget(kUniform, 0.8) == Approx(11.0392304845413).margin(1e-10));
    REQUIRE_THROWS_AS(travel_time_budget(kLogn, 0.0), ttv::error);
    REQUIRE_THROWS_AS(travel_time_budget(kLogn, 1.0), ttv::error);
}

TEST_CASE("unreliability area", "[risk_measures]") {
    const auto std_uni = QuantileModel::uniform_from_moments(10.0, 1.0);
    REQUIRE(unreliability_area(std_uni, 0.8) == Approx(0.0692820323027548).margin(1e-12));
    REQUIRE(unreliability_area(QuantileModel::degenerate(123.0), 0.6) == 0.0);
    REQUIRE(unreliability_area(kLogn, 0.8) == Approx(0.281533891867282).epsilon(1e-10));
}

TEST_CASE("expected excess delay", "[risk_measures]") {
    REQUIRE(expected_excess_delay(kUniform, 0.8) ==
            Approx(0.2 * std::sqrt(3.0)).margin(1e-12));
    REQUIRE(expected_excess_delay(kLogn, 0.8) == Approx(1.40766945933641).epsilon(1e-10));
    REQUIRE(expected_excess_delay(QuantileModel::degenerate(5.0), 0.8) == 0.0);
}

TEST_CASE("risk measures block", "[risk_measures]") {
    SECTION("standardized uniform") {
        const auto r = compute_risk_measures(kUniform, kPrefs214);
        REQUIRE(r.zeta_ttm == Approx(1.03923048454133).margin(1e-10));
        REQUIRE(r.zeta_eed == Approx(0.346410161513774).margin(1e-10));
        REQUIRE(r.zeta_ett == Approx(1.3856406460551).margin(1e-10));
        REQUIRE(r.mett == Approx(11.3856406460551).margin(1e-10));
        REQUIRE(r.premium == Approx(0.173205080756888).margin(1e-10));
    }
    SECTION("lognormal CoV 0.2") {
        const auto r = compute_risk_measures(kLogn, kPrefs214);
        REQUIRE(r.zeta_ttm == Approx(0.79215303711023).epsilon(1e-10));
        REQUIRE(r.zeta_eed == Approx(0.705952587430499).epsilon(1e-10));
        REQUIRE(r.zeta_ett == Approx(1.49810562454073).epsilon(1e-10));
        REQUIRE(r.premium == Approx(0.703834729668207).epsilon(1e-10));
    }
    SECTION("degenerate") {
        const auto r = compute_risk_measures(QuantileModel::degenerate(10.0), kPrefs214);
        REQUIRE(r.mett == 10.0);
        REQUIRE(r.ttb == 10.0);
        REQUIRE(r.zeta_ttm == 0.0);
        REQUIRE(r.zeta_eed == 0.0);
        REQUIRE(r.zeta_ett == 0.0);
        REQUIRE(r.premium == 0.0);
    }
}

TEST_CASE("delta_EED * (1 - tau) = S_u for every model kind", "[risk_measures][property]") {
    for (const auto& m : identity_suite()) {
        for (double tau = 0.55; tau < 0.96; tau += 0.05) {
            const double lhs = expected_excess_delay(m, tau) * (1.0 - tau);
            const double rhs = unreliability_area(m, tau);
            REQUIRE(lhs == Approx(rhs).epsilon(1e-10).margin(1e-14));
        }
    }
}

TEST_CASE("zeta consistency: zeta_ett = zeta_ttm + zeta_eed", "[risk_measures][property]") {
    for (const auto& m : identity_suite()) {
        for (const auto& prefs :
             {kPrefs214, SchedulingPreferences::from_rates(2.0, 0.8, 3.2),
              SchedulingPreferences::from_punctuality(1.5, 0.6, 0.9)}) {
            const auto r = compute_risk_measures(m, prefs);
            REQUIRE(r.zeta_ett == Approx(r.zeta_ttm + r.zeta_eed).epsilon(1e-12));
            // direct route: zeta_ett = PE_X(tau)/(1-tau)
            const StandardizedView x(m);
            REQUIRE(r.zeta_ett ==
                    Approx(x.partial_expectation(prefs.tau()) / (1.0 - prefs.tau()))
                        .epsilon(1e-10));
        }
    }
}

TEST_CASE("expected utility", "[risk_measures]") {
    SECTION("uniform closed form at D = -b(0.8)") {
        const double eu = expected_utility(kUniform, kPrefs214, -11.0392304845413);
        REQUIRE(-eu == Approx(21.3856406460551).margin(1e-5));
    }
    SECTION("degenerate certainty") {
        const double eu =
            expected_utility(QuantileModel::degenerate(10.0), kPrefs214, -10.0);
        REQUIRE(eu == Approx(-20.0).margin(1e-14));
    }
    SECTION("EU <= -alpha*mu always") {
        SeededUniform rng(31);
        for (const auto& m : identity_suite()) {
            for (int i = 0; i < 25; ++i) {
                const double d = -m.mean() * (0.2 + 2.0 * rng.next());
                REQUIRE(expected_utility(m, kPrefs214, d) <=
                        -kPrefs214.alpha() * m.mean() + 1e-10);
            }
        }
    }
    SECTION("non-finite departure is rejected") {
        REQUIRE_THROWS_AS(
            expected_utility(kLogn, kPrefs214, std::numeric_limits<double>::infinity()),
            ttv::error);
    }
}

TEST_CASE("quantile-domain EU equals pdf-domain EU", "[risk_measures][oracle]") {
    for (const auto& m : {kUniform, kLogn, kBurr}) {
        const auto ttb = optimal_departure(m, kPrefs214);
        const auto mett = departure_mett(m, kPrefs214);
        for (double d : {ttb.departure, mett.departure, -0.8 * m.mean(), -1.6 * m.mean()}) {
            const double via_quantile = expected_utility(m, kPrefs214, d);
            const double via_pdf = testing::eu_pdf_domain(m, kPrefs214, d);
            REQUIRE(via_quantile == Approx(via_pdf).epsilon(1e-7));
        }
    }
}

TEST_CASE("EU for step empirical models is an exact finite sum", "[risk_measures]") {
    const auto m = QuantileModel::empirical({2.0, 3.0, 5.0, 7.0, 11.0}, Interpolation::Step);
    const auto prefs = kPrefs214;
    for (double d : {-4.0, -5.0, -6.9, -7.0, -7.1, -12.0}) {
        double acc = 0.0;
        for (double t : m.samples()) {
            const double a = t + d;
            acc += prefs.alpha() * t + prefs.beta() * std::max(-a, 0.0) +
                   prefs.gamma() * std::max(a, 0.0);
        }
        acc /= static_cast<double>(m.samples().size());
        REQUIRE(expected_utility(m, prefs, d) == Approx(-acc).epsilon(1e-13));
    }
}

TEST_CASE("optimal departure", "[risk_measures]") {
    const auto u = optimal_departure(kUniform, SchedulingPreferences::from_rates(2.0, 1.0, 4.0));
    REQUIRE(u.departure == Approx(-11.0392304845413).margin(1e-10));
    REQUIRE(u.criterion == DepartureCriterion::TTB);

    const auto l = optimal_departure(kLogn, kPrefs214);
    REQUIRE(l.departure == Approx(-11.5495531559978).epsilon(1e-12));

    // gamma = beta puts tau at 1/2; the uniform median equals its mean
    const auto sym = optimal_departure(
        kUniform, SchedulingPreferences::from_rates(2.0, 1.0, 1.0 + 1e-14));
    REQUIRE(sym.departure == Approx(-10.0).margin(1e-9));

    const auto d = optimal_departure(QuantileModel::degenerate(10.0), kPrefs214);
    REQUIRE(d.departure == -10.0);
    REQUIRE(d.degenerate);
    REQUIRE(d.eu_magnitude == Approx(20.0));
}

TEST_CASE("first-order optimality of D*", "[risk_measures][property]") {
    for (const auto& m : {kUniform, kLogn, kBurr}) {
        const auto best = optimal_departure(m, kPrefs214);
        const double h = 1e-3 * m.stddev();
        const double at = -expected_utility(m, kPrefs214, best.departure);
        REQUIRE(-expected_utility(m, kPrefs214, best.departure + h) >= at - 1e-12);
        REQUIRE(-expected_utility(m, kPrefs214, best.departure - h) >= at - 1e-12);
    }
}

TEST_CASE("METT departure and cost dominance", "[risk_measures]") {
    const auto d = departure_mett(kUniform, kPrefs214);
    REQUIRE(d.departure == Approx(-11.3856406460551).margin(1e-5));
    REQUIRE(d.eu_magnitude == Approx(21.4722431864335).margin(1e-5));

    const auto dd = departure_mett(QuantileModel::degenerate(10.0), kPrefs214);
    REQUIRE(dd.departure == -10.0);
    REQUIRE(dd.eu_magnitude == Approx(20.0));

    // |EU(D_METT)| >= |EU(D_TTB)| >= alpha*mu, equality only when degenerate
    for (const auto& m : identity_suite()) {
        const auto ttb = optimal_departure(m, kPrefs214);
        const auto mett = departure_mett(m, kPrefs214);
        REQUIRE(mett.eu_magnitude >= ttb.eu_magnitude - 1e-10);
        REQUIRE(ttb.eu_magnitude >= kPrefs214.alpha() * m.mean() - 1e-10);
        REQUIRE(mett.eu_magnitude > kPrefs214.alpha() * m.mean() + 1e-8);
    }
}

TEST_CASE("lognormal EU magnitudes at both criteria", "[risk_measures]") {
    const auto ttb = optimal_departure(kLogn, kPrefs214);
    REQUIRE(ttb.eu_magnitude == Approx(22.9272226153342).epsilon(1e-10));
    const auto mett = departure_mett(kLogn, kPrefs214);
    REQUIRE(mett.eu_magnitude == Approx(23.4130796881347).epsilon(1e-10));
    // structural identity |EU(D_TTB)| = alpha*mu + beta*sigma*zeta_ett
    const auto r = compute_risk_measures(kLogn, kPrefs214);
    REQUIRE(ttb.eu_magnitude ==
            Approx(2.0 * 9.97 + 1.0 * (r.delta_ttm + r.delta_eed)).epsilon(1e-12));
}

TEST_CASE("reliability premium", "[risk_measures]") {
    const double b08 = travel_time_budget(kUniform, 0.8);
    REQUIRE(reliability_premium(kUniform, kPrefs214, -b08) ==
            Approx(0.173205080756888).margin(1e-10));
    REQUIRE(reliability_premium(QuantileModel::degenerate(9.0), kPrefs214, -9.0) == 0.0);

    const double pi = reliability_premium(kLogn, kPrefs214, -travel_time_budget(kLogn, 0.8));
    REQUIRE(pi == Approx(0.703834729668207).epsilon(1e-10));
    REQUIRE(expected_excess_delay(kLogn, 0.8) / pi ==
            Approx(kPrefs214.alpha() / kPrefs214.beta()).epsilon(1e-9));
}

TEST_CASE("beta*delta_EED = alpha*pi at D = -b(tau)",
          "[risk_measures][property]") {
    for (const auto& m : identity_suite()) {
        if (m.kind() == Kind::Empirical && m.interpolation() == Interpolation::Linear) continue;
        for (const auto& prefs :
             {kPrefs214, SchedulingPreferences::from_rates(3.0, 0.5, 2.0),
              SchedulingPreferences::from_punctuality(2.0, 1.0, 0.9)}) {
            const double b = travel_time_budget(m, prefs.tau());
            const double pi = reliability_premium(m, prefs, -b);
            const double eed = expected_excess_delay(m, prefs.tau());
            REQUIRE(prefs.beta() * eed == Approx(prefs.alpha() * pi).epsilon(1e-9).margin(1e-12));
        }
    }
}

TEST_CASE("monte carlo confirms S_u and EU for the lognormal point",
          "[risk_measures][oracle][slow]") {
    const auto prefs = kPrefs214;
    const std::size_t n = 1'000'000;
    SeededUniform rng(42);
    const double b = travel_time_budget(kLogn, 0.8);
    std::vector<double> su(n);
    for (auto& v : su) v = std::max(kLogn.quantile(rng.next()) - b, 0.0);
    const auto su_stats = testing::mc_mean(su);
    REQUIRE(std::fabs(su_stats.mean - unreliability_area(kLogn, 0.8)) <=
            3.0 * su_stats.std_error);

    const auto cost = testing::mc_cost_draws(kLogn, prefs, -b, n, 43);
    const auto cost_stats = testing::mc_mean(cost);
    REQUIRE(std::fabs(cost_stats.mean - (-expected_utility(kLogn, prefs, -b))) <=
            3.0 * cost_stats.std_error);
}
