#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "plaas/analysis.hpp"
#include "plaas/equilibrium.hpp"
#include "support/scenarios.hpp"

using namespace plaas;
using equilibrium::FeeRegime;
using testing::make_case_study;
namespace frozen = testing::frozen;

TEST_CASE("solo trip fuel matches the frozen value") {
    const model::Scenario s = make_case_study();
    CHECK(analysis::trip_fuel(s, 0.0) ==
          doctest::Approx(frozen::kTripFuelSolo).epsilon(1e-12));
}

TEST_CASE("fuel is distance-independent when platooning changes nothing") {
    model::Scenario s = make_case_study();
    s.kinematics.platoon_velocity = s.kinematics.solo_velocity;
    s.aero.drag_platoon = s.aero.drag_alone;
    const double solo = analysis::trip_fuel(s, 0.0);
    CHECK(analysis::trip_fuel(s, 250.0) == doctest::Approx(solo).epsilon(1e-12));
    CHECK(analysis::trip_fuel(s, 500.0) == doctest::Approx(solo).epsilon(1e-12));
}

TEST_CASE("full-platoon fuel uses the platoon drag and speed") {
    const model::Scenario s = make_case_study();
    const double t = model::aero_constant(s.aero);
    const double v_p = s.kinematics.platoon_velocity;
    CHECK(analysis::trip_fuel(s, 500.0) ==
          doctest::Approx(t * s.aero.drag_platoon * v_p * v_p * 500.0).epsilon(1e-12));
    CHECK_THROWS_AS((void)analysis::trip_fuel(s, 500.5), std::invalid_argument);
    CHECK_THROWS_AS((void)analysis::trip_fuel(s, -0.5), std::invalid_argument);
}

TEST_CASE("no subsidies means no emission delta") {
    model::Scenario s = make_case_study();
    s.subsidy = {0.0, 0.0};
    const analysis::EmissionsReport report = analysis::subsidy_emissions(s);
    CHECK(report.delta_distance == 0.0);
    CHECK(report.delta_fuel == 0.0);
    CHECK(report.delta_co2 == 0.0);
    CHECK(report.closed_form);
}

TEST_CASE("fuel delta vanishes when drag and speed effects cancel") {
    model::Scenario s = make_case_study();
    // alpha * beta^2 = 1 with beta = 1, alpha = 1.
    s.kinematics.platoon_velocity = s.kinematics.solo_velocity;
    s.aero.drag_platoon = s.aero.drag_alone;
    const analysis::EmissionsReport report = analysis::subsidy_emissions(s);
    REQUIRE(report.closed_form);
    CHECK(report.delta_distance > 0.0);
    CHECK(report.delta_fuel == 0.0);
    CHECK(report.delta_co2 == 0.0);
}

TEST_CASE("case-study emission deltas match the frozen closed forms") {
    const analysis::EmissionsReport report = analysis::subsidy_emissions(make_case_study());
    REQUIRE(report.closed_form);
    CHECK(report.delta_distance == doctest::Approx(frozen::kDeltaDistance).epsilon(1e-9));
    CHECK(report.delta_fuel == doctest::Approx(frozen::kDeltaFuel).epsilon(1e-9));
    CHECK(report.delta_co2 == doctest::Approx(frozen::kDeltaCo2).epsilon(1e-9));
    CHECK(report.delta_co2 == 2.69 * report.delta_fuel);  // exact product
    CHECK(report.fuel_alone_trip == doctest::Approx(frozen::kTripFuelSolo).epsilon(1e-12));
    // Direct equilibrium difference agrees with the closed form.
    CHECK(report.delta_fuel_direct ==
          doctest::Approx(report.delta_fuel).epsilon(1e-9));
}

TEST_CASE("closed form agrees with the direct difference when interior") {
    std::mt19937_64 rng(211);
    int interior_seen = 0;
    for (int i = 0; i < 60; ++i) {
        const model::Scenario s = testing::random_scenario(rng);
        const analysis::EmissionsReport report = analysis::subsidy_emissions(s);
        CHECK(report.delta_co2 == s.emission_factor * report.delta_fuel);
        if (!report.closed_form) continue;
        ++interior_seen;
        CHECK(std::abs(report.delta_fuel - report.delta_fuel_direct) <=
              1e-9 * std::max(1.0, std::abs(report.delta_fuel_direct)));
        const double ab2 = s.aero.drag_ratio() * s.kinematics.beta() * s.kinematics.beta();
        const double gamma =
            s.subsidy.follower_subsidy + s.subsidy.provider_subsidy;
        if (ab2 < 1.0 && gamma > 0.0) CHECK(report.delta_fuel > 0.0);
    }
    CHECK(interior_seen > 10);
}

TEST_CASE("non-interior quadrants fall back to the direct difference") {
    model::Scenario s = make_case_study();
    s.subsidy.follower_subsidy = 10.0 * frozen::kFeeBoth;  // clamps to full participation
    const analysis::EmissionsReport report = analysis::subsidy_emissions(s);
    CHECK(!report.closed_form);
    CHECK(report.delta_fuel == report.delta_fuel_direct);
    CHECK(report.delta_co2 == s.emission_factor * report.delta_fuel_direct);
}

TEST_CASE("a single-point sweep equals a direct solve") {
    analysis::SweepSpec spec;
    spec.base = make_case_study();
    spec.axis1 = {analysis::SweepParam::Beta, {0.7}};
    const analysis::SweepTable table = analysis::run_sweep(spec);
    REQUIRE(table.rows.size() == 1);
    const equilibrium::Equilibrium direct = equilibrium::solve_equilibrium(spec.base);
    CHECK(table.rows[0].eq.fee == direct.fee);
    CHECK(table.rows[0].eq.distance == direct.distance);
    CHECK(table.rows[0].eq.provider_profit == direct.provider_profit);
    CHECK(table.rows[0].axis_values == std::vector<double>{0.7});
}

TEST_CASE("distance grows with the velocity ratio on the case-study base") {
    analysis::SweepSpec spec;
    spec.base = make_case_study();
    spec.axis1 = {analysis::SweepParam::Beta, {0.5, 0.7, 0.9}};
    const analysis::SweepTable table = analysis::run_sweep(spec);
    REQUIRE(table.rows.size() == 3);
    CHECK(table.rows[0].eq.distance < table.rows[1].eq.distance);
    CHECK(table.rows[1].eq.distance < table.rows[2].eq.distance);
    // Each row must equal an independent solve of the substituted scenario.
    for (std::size_t i = 0; i < 3; ++i) {
        model::Scenario point = spec.base;
        point.kinematics.platoon_velocity =
            spec.axis1.values[i] * spec.base.kinematics.solo_velocity;
        CHECK(table.rows[i].eq.fee == equilibrium::solve_equilibrium(point).fee);
    }
}

TEST_CASE("a subsidy sweep turns on the emission delta") {
    analysis::SweepSpec spec;
    spec.base = make_case_study();
    spec.axis1 = {analysis::SweepParam::GammaTotal, {0.0, 100.0}};
    const analysis::SweepTable table = analysis::run_sweep(spec);
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0].emissions.delta_co2 == 0.0);
    CHECK(table.rows[1].emissions.delta_co2 > 0.0);
    // 50/50 split reproduces the case-study subsidy pair.
    CHECK(table.rows[1].eq.fee == doctest::Approx(frozen::kFeeBoth).epsilon(1e-12));
    CHECK(table.rows[1].emissions.delta_co2 ==
          doctest::Approx(frozen::kDeltaCo2).epsilon(1e-9));
}

TEST_CASE("invalid substitutions name the parameter and value") {
    analysis::SweepSpec spec;
    spec.base = make_case_study();
    spec.axis1 = {analysis::SweepParam::Beta, {0.0}};
    CHECK_THROWS_WITH_AS((void)analysis::run_sweep(spec),
                         doctest::Contains("beta = 0"), std::invalid_argument);
    spec.axis1 = {analysis::SweepParam::Xi, {1.5}};
    CHECK_THROWS_WITH_AS((void)analysis::run_sweep(spec),
                         doctest::Contains("xi = 1.5"), std::invalid_argument);
}

TEST_CASE("two-axis sweeps stay rectangular through corner regimes") {
    analysis::SweepSpec spec;
    spec.base = make_case_study();
    spec.axis1 = {analysis::SweepParam::Beta, {0.5, 1.0, 1.5}};
    spec.axis2 = analysis::SweepAxis{analysis::SweepParam::GammaTotal, {0.0, 100.0, 400.0}};
    const analysis::SweepTable table = analysis::run_sweep(spec);
    REQUIRE(table.rows.size() == 9);
    bool corner_seen = false;
    for (const analysis::SweepRow& row : table.rows) {
        REQUIRE(row.axis_values.size() == 2);
        corner_seen = corner_seen || row.eq.fee_regime != FeeRegime::InteriorFee;
    }
    CHECK(corner_seen);
    // Row-major ordering over axis1 x axis2.
    CHECK(table.rows[0].axis_values == std::vector<double>{0.5, 0.0});
    CHECK(table.rows[1].axis_values == std::vector<double>{0.5, 100.0});
    CHECK(table.rows[5].axis_values == std::vector<double>{1.0, 400.0});
}

TEST_CASE("sweeps are deterministic") {
    analysis::SweepSpec spec;
    spec.base = make_case_study();
    spec.axis1 = {analysis::SweepParam::Beta, {0.4, 0.6, 0.8, 1.0, 1.2}};
    spec.axis2 = analysis::SweepAxis{analysis::SweepParam::DelayRate, {0.0, 75.0, 150.0}};
    const analysis::SweepTable a = analysis::run_sweep(spec);
    const analysis::SweepTable b = analysis::run_sweep(spec);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].eq.fee == b.rows[i].eq.fee);
        CHECK(a.rows[i].eq.distance == b.rows[i].eq.distance);
        CHECK(a.rows[i].emissions.delta_co2 == b.rows[i].emissions.delta_co2);
    }
}

TEST_CASE("velocity-ratio sweep shapes on the no-subsidy base") {
    // Without subsidies every point in [0.3, 1.7] stays interior; the
    // distance rises with beta while the fee eventually falls.
    analysis::SweepSpec spec;
    spec.base = make_case_study();
    spec.base.subsidy = {0.0, 0.0};
    std::vector<double> betas;
    for (int i = 0; i < 20; ++i) betas.push_back(0.3 + 1.4 * i / 19.0);
    spec.axis1 = {analysis::SweepParam::Beta, betas};
    const analysis::SweepTable table = analysis::run_sweep(spec);
    REQUIRE(table.rows.size() == 20);
    for (const analysis::SweepRow& row : table.rows) {
        REQUIRE(row.eq.fee_regime == FeeRegime::InteriorFee);
    }
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        CHECK(table.rows[i].eq.distance >= table.rows[i - 1].eq.distance);
        if (betas[i - 1] > 1.0) {
            CHECK(table.rows[i].eq.fee < table.rows[i - 1].eq.fee);
        }
    }
}

TEST_CASE("emission delta peaks at a moderate velocity ratio") {
    analysis::SweepSpec spec;
    spec.base = make_case_study();
    std::vector<double> betas;
    for (int i = 0; i <= 22; ++i) betas.push_back(0.48 + 0.025 * i);  // 0.48 .. 1.03
    spec.axis1 = {analysis::SweepParam::Beta, betas};
    const analysis::SweepTable table = analysis::run_sweep(spec);
    std::size_t argmax = 0;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        REQUIRE(table.rows[i].emissions.closed_form);
        if (table.rows[i].emissions.delta_co2 > table.rows[argmax].emissions.delta_co2) {
            argmax = i;
        }
    }
    // Interior peak inside (0.6, 1.0), strictly better than the bracket ends.
    CHECK(betas[argmax] > 0.6);
    CHECK(betas[argmax] < 1.0);
    CHECK(argmax > 0);
    CHECK(argmax + 1 < table.rows.size());
}

TEST_CASE("urgency levels converge at equal velocities when decoupled") {
    // With the platoon exactly matching the solo speed and the provider's
    // delay rate held fixed, the follower's delay rate cancels out of the
    // equilibrium entirely.
    analysis::SweepSpec spec;
    spec.base = make_case_study();
    spec.base.kinematics.platoon_velocity = spec.base.kinematics.solo_velocity;
    spec.couple_delay_rates = false;
    spec.axis1 = {analysis::SweepParam::DelayRate, {0.0, 50.0, 100.0, 150.0}};
    const analysis::SweepTable table = analysis::run_sweep(spec);
    REQUIRE(table.rows.size() == 4);
    for (std::size_t i = 1; i < 4; ++i) {
        CHECK(std::abs(table.rows[i].eq.fee - table.rows[0].eq.fee) <= 1e-9);
        CHECK(std::abs(table.rows[i].eq.distance - table.rows[0].eq.distance) <= 1e-9);
    }
    // Coupled sweeps do not converge: the provider prices its own delay.
    analysis::SweepSpec coupled = spec;
    coupled.couple_delay_rates = true;
    const analysis::SweepTable moved = analysis::run_sweep(coupled);
    CHECK(std::abs(moved.rows[3].eq.fee - moved.rows[0].eq.fee) > 0.1);
}

TEST_CASE("gamma split and alpha substitution semantics") {
    analysis::SweepSpec spec;
    spec.base = make_case_study();
    spec.gamma_split = 0.25;
    const model::Scenario g =
        analysis::apply_sweep_param(spec.base, analysis::SweepParam::GammaTotal, 100.0, spec);
    CHECK(g.subsidy.follower_subsidy == 25.0);
    CHECK(g.subsidy.provider_subsidy == 75.0);

    const model::Scenario a =
        analysis::apply_sweep_param(spec.base, analysis::SweepParam::Alpha, 0.9, spec);
    CHECK(a.aero.drag_platoon == doctest::Approx(0.9 * 0.6).epsilon(1e-15));
    CHECK(a.aero.drag_alone == 0.6);

    const model::Scenario b =
        analysis::apply_sweep_param(spec.base, analysis::SweepParam::Beta, 1.1, spec);
    CHECK(b.kinematics.solo_velocity == 60.0);
    CHECK(b.kinematics.platoon_velocity == doctest::Approx(66.0).epsilon(1e-15));
}
