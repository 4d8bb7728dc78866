#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plaas/equilibrium.hpp"
#include "plaas/model.hpp"

// Emissions accounting and parameter-sweep engines that tabulate how the
// equilibrium responds to the model inputs.

namespace plaas::analysis {

// Subsidy-induced fuel and CO2 savings per trip. The closed form applies when
// the subsidized and unsubsidized equilibria are both interior; otherwise only
// the direct equilibrium difference is meaningful and the delta_* fields carry
// it, with closed_form set to false.
struct EmissionsReport {
    double fuel_alone_trip = 0.0;     // L, whole trip driven solo
    double fuel_mixed_trip = 0.0;     // L, at the subsidized equilibrium distance
    double delta_distance = 0.0;      // km gained by the subsidies
    double delta_fuel = 0.0;          // L saved per trip
    double delta_co2 = 0.0;           // kg, emission_factor * delta_fuel
    bool closed_form = false;         // delta_* from the closed form
    double delta_fuel_direct = 0.0;   // L, always the equilibrium difference
};

enum class SweepParam {
    Beta,        // platoon_velocity = value * solo_velocity
    Alpha,       // drag_platoon = value * drag_alone
    DelayRate,   // fv_delay_rate; psp_delay_rate follows unless decoupled
    GammaF,
    GammaL,
    GammaTotal,  // split between the two subsidies by gamma_split
    Xi,
    LoadTotal,
    TripDistance,
};

enum class SweepColumn {
    Fee,
    Distance,
    FollowerCost,
    ProviderProfit,
    DeltaCo2,
    Regime,
};

struct SweepAxis {
    SweepParam param = SweepParam::Beta;
    std::vector<double> values;
};

struct SweepSpec {
    model::Scenario base;
    SweepAxis axis1;
    std::optional<SweepAxis> axis2;
    std::vector<SweepColumn> outputs;   // empty means all columns
    bool couple_delay_rates = true;     // DelayRate also updates psp_delay_rate
    double gamma_split = 0.5;           // GammaTotal share given to the follower
};

struct SweepRow {
    std::vector<double> axis_values;  // axis1 value, then axis2 value if present
    equilibrium::Equilibrium eq;
    EmissionsReport emissions;
};

// One row per grid point, row-major over axis1 x axis2; corner-regime points
// still produce rows so the table stays rectangular.
struct SweepTable {
    std::vector<std::string> header;
    std::vector<SweepColumn> outputs;
    std::vector<SweepRow> rows;
};

[[nodiscard]] const char* to_string(SweepParam param);
[[nodiscard]] const char* to_string(SweepColumn column);
[[nodiscard]] const char* to_string(equilibrium::FeeRegime regime);
[[nodiscard]] std::optional<SweepParam> parse_sweep_param(const std::string& name);
[[nodiscard]] std::optional<SweepColumn> parse_sweep_column(const std::string& name);
[[nodiscard]] std::vector<std::string> sweep_param_names();

/// Trip fuel volume when d km of the trip run inside the platoon.
[[nodiscard]] double trip_fuel(const model::Scenario& s, double d);

/// Subsidy-induced CO2 reduction, closed form cross-checked against the
/// direct difference of the with/without-subsidy equilibria.
[[nodiscard]] EmissionsReport subsidy_emissions(const model::Scenario& s);

/// Substitute one swept parameter into a copy of the scenario. Throws
/// std::invalid_argument naming the parameter and value if the result is not
/// a valid scenario.
[[nodiscard]] model::Scenario apply_sweep_param(const model::Scenario& base, SweepParam param,
                                                double value, const SweepSpec& spec);

/// Solve every grid point; deterministic row order (axis1-major), grid points
/// evaluated concurrently with results assembled by grid index.
[[nodiscard]] SweepTable run_sweep(const SweepSpec& spec);

}  // namespace plaas::analysis
