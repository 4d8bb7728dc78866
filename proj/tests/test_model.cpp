#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <stdexcept>

#include "plaas/model.hpp"
#include "support/scenarios.hpp"

using namespace plaas;
using testing::make_case_study;
namespace frozen = testing::frozen;

TEST_CASE("aero constant matches the hand-evaluated case-study value") {
    const model::Scenario s = make_case_study();
    CHECK(model::aero_constant(s.aero) ==
          doctest::Approx(frozen::kAeroT).epsilon(1e-12));
}

TEST_CASE("aero constant vanishes with zero specific fuel consumption") {
    model::AeroParams aero = make_case_study().aero;
    aero.specific_fuel_consumption = 0.0;
    CHECK(model::aero_constant(aero) == 0.0);
}

TEST_CASE("doubling efficiency halves the aero constant") {
    model::AeroParams aero = make_case_study().aero;
    const double t1 = model::aero_constant(aero);
    aero.vehicle_efficiency *= 2.0;
    CHECK(model::aero_constant(aero) == doctest::Approx(t1 / 2.0).epsilon(1e-15));
}

TEST_CASE("composite benefit vanishes when platooning changes nothing") {
    model::Scenario s = make_case_study();
    s.kinematics.platoon_velocity = s.kinematics.solo_velocity;  // beta = 1
    s.aero.drag_platoon = s.aero.drag_alone;                     // alpha = 1
    s.load.total_load = 0.0;
    CHECK(model::composite_g(s) == 0.0);
}

TEST_CASE("composite benefit matches the case-study value") {
    CHECK(model::composite_g(make_case_study()) ==
          doctest::Approx(frozen::kCompositeG).epsilon(1e-12));
}

TEST_CASE("composite benefit reduces to the delay term at half speed") {
    model::Scenario s = make_case_study();
    s.rates.fuel_price = 0.0;
    s.load.total_load = 0.0;
    s.kinematics.platoon_velocity = 0.5 * s.kinematics.solo_velocity;
    // (1 - 1/beta) = -1, so only -c_d / v remains.
    CHECK(model::composite_g(s) ==
          doctest::Approx(-s.rates.fv_delay_rate / s.kinematics.solo_velocity)
              .epsilon(1e-15));
    CHECK(model::composite_g(s) < 0.0);
}

TEST_CASE("follower cost at full participation has no solo terms") {
    const model::Scenario s = make_case_study();
    const model::CostBreakdown b = model::follower_cost(s, 500.0, 60.0);
    CHECK(b.delay_alone == 0.0);
    CHECK(b.fuel_alone == 0.0);
    CHECK(b.cognitive_alone == 0.0);
    CHECK(b.total == b.delay_platoon + b.fuel_platoon + b.compute_platoon +
                         b.service_fee_paid - b.subsidy_received);
}

TEST_CASE("follower cost at zero distance ignores the fee and platoon terms") {
    const model::Scenario s = make_case_study();
    const model::CostBreakdown zero_fee = model::follower_cost(s, 0.0, 0.0);
    const model::CostBreakdown big_fee = model::follower_cost(s, 0.0, 1e6);
    CHECK(zero_fee.total == big_fee.total);
    CHECK(zero_fee.delay_platoon == 0.0);
    CHECK(zero_fee.fuel_platoon == 0.0);
    CHECK(zero_fee.compute_platoon == 0.0);
    CHECK(zero_fee.service_fee_paid == 0.0);
    CHECK(zero_fee.subsidy_received == 0.0);
    CHECK(zero_fee.total == doctest::Approx(frozen::kSoloCost).epsilon(1e-12));
}

TEST_CASE("solo cost is invariant to fee, load and subsidy inputs") {
    model::Scenario s = make_case_study();
    const double base = model::solo_cost(s);
    s.load.total_load = 0.47;
    s.load.follower_share = 0.9;
    s.subsidy.follower_subsidy = 123.0;
    CHECK(model::solo_cost(s) == base);
}

TEST_CASE("follower cost spreadsheet value at d = 250, fee = 60") {
    CHECK(model::follower_cost(make_case_study(), 250.0, 60.0).total ==
          doctest::Approx(frozen::kFollowerCost250At60).epsilon(1e-12));
}

TEST_CASE("follower cost rejects out-of-range inputs") {
    const model::Scenario s = make_case_study();
    CHECK_THROWS_AS((void)model::follower_cost(s, -1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)model::follower_cost(s, 500.1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)model::follower_cost(s, 10.0, -0.5), std::invalid_argument);
}

TEST_CASE("provider profit is zero at zero distance") {
    CHECK(model::provider_profit(make_case_study(), 0.0, 123.0) == 0.0);
}

TEST_CASE("provider loses money serving for free without subsidy") {
    model::Scenario s = make_case_study();
    s.subsidy.provider_subsidy = 0.0;
    CHECK(model::provider_profit(s, 100.0, 0.0) < 0.0);
}

TEST_CASE("provider profit spreadsheet value at d = 357.27, fee = 62.735") {
    CHECK(model::provider_profit(make_case_study(), 357.27, 62.735) ==
          doctest::Approx(frozen::kProviderProfitSpot).epsilon(1e-12));
}

TEST_CASE("follower cost is an exact quadratic in distance") {
    const model::Scenario s = make_case_study();
    const double curvature = 2.0 * s.rates.fv_cognitive_rate /
                             (s.kinematics.solo_velocity * s.kinematics.solo_velocity);
    for (double step : {10.0, 62.5, 125.0}) {
        const double c0 = model::follower_cost(s, 250.0 - step, 60.0).total;
        const double c1 = model::follower_cost(s, 250.0, 60.0).total;
        const double c2 = model::follower_cost(s, 250.0 + step, 60.0).total;
        CHECK(c2 - 2.0 * c1 + c0 ==
              doctest::Approx(curvature * step * step).epsilon(1e-12));
    }
}

TEST_CASE("provider profit is an exact concave quadratic in distance") {
    const model::Scenario s = make_case_study();
    const double curvature = -2.0 * s.rates.psp_cognitive_rate /
                             (s.kinematics.platoon_velocity * s.kinematics.platoon_velocity);
    const double step = 125.0;
    const double w0 = model::provider_profit(s, 250.0 - step, 60.0);
    const double w1 = model::provider_profit(s, 250.0, 60.0);
    const double w2 = model::provider_profit(s, 250.0 + step, 60.0);
    CHECK(w2 - 2.0 * w1 + w0 == doctest::Approx(curvature * step * step).epsilon(1e-12));
    CHECK(w2 - 2.0 * w1 + w0 < 0.0);
}

TEST_CASE("costs are homogeneous of degree one in the money rates") {
    std::mt19937_64 rng(20240811);
    for (int i = 0; i < 50; ++i) {
        const model::Scenario s = testing::random_scenario(rng);
        const double k = 3.7;
        model::Scenario scaled = s;
        scaled.rates.fv_delay_rate *= k;
        scaled.rates.psp_delay_rate *= k;
        scaled.rates.fuel_price *= k;
        scaled.rates.fv_cognitive_rate *= k;
        scaled.rates.psp_cognitive_rate *= k;
        scaled.rates.compute_rate *= k;
        scaled.subsidy.follower_subsidy *= k;
        scaled.subsidy.provider_subsidy *= k;

        const double d = 0.4 * s.kinematics.trip_distance;
        const double fee = 25.0;
        CHECK(model::follower_cost(scaled, d, k * fee).total ==
              doctest::Approx(k * model::follower_cost(s, d, fee).total).epsilon(1e-12));
        CHECK(model::provider_profit(scaled, d, k * fee) ==
              doctest::Approx(k * model::provider_profit(s, d, fee)).epsilon(1e-12));
    }
}

TEST_CASE("validation names the offending field") {
    model::Scenario s = make_case_study();
    s.rates.fv_cognitive_rate = 0.0;
    CHECK_THROWS_WITH_AS(s.validate(), "fv_cognitive_rate must be > 0",
                         std::invalid_argument);
    s = make_case_study();
    s.load.follower_share = 1.5;
    CHECK_THROWS_WITH_AS(s.validate(), "follower_share must be within [0, 1]",
                         std::invalid_argument);
    s = make_case_study();
    s.kinematics.platoon_velocity = 0.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("drag ratio above one is a warning, not an error") {
    model::Scenario s = make_case_study();
    s.aero.drag_platoon = 1.2 * s.aero.drag_alone;
    CHECK_NOTHROW(s.validate());
    REQUIRE(s.warnings().size() == 1);
    CHECK(s.warnings().front().find("drag_platoon") != std::string::npos);
    CHECK(make_case_study().warnings().empty());
}
