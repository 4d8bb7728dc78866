#pragma once

#include <string>
#include <vector>

// Parameters and raw cost/profit functions of the platooning service game.
// Everything downstream (best responses, equilibria, certificates, sweeps)
// consumes only these types and functions.
//
// Money is an opaque unit (reports label it INR); no locale formatting.

namespace plaas::model {

struct AeroParams {
    double frontal_area              = 0.0;  // m^2
    double drag_alone                = 0.0;  // dimensionless, solo drag coefficient
    double drag_platoon              = 0.0;  // dimensionless, in-platoon drag coefficient
    double air_density               = 0.0;  // kg/m^3
    double fuel_density              = 0.0;  // kg/m^3
    double specific_fuel_consumption = 0.0;  // kg/kWh
    double vehicle_efficiency        = 0.0;  // km/L

    // alpha, the drag reduction factor. Values > 1 are accepted but reported
    // as a warning by Scenario::warnings() since sweeps vary alpha freely.
    [[nodiscard]] double drag_ratio() const { return drag_platoon / drag_alone; }

    void validate() const;
};

struct CostRates {
    double fv_delay_rate      = 0.0;  // INR/hr, follower
    double psp_delay_rate     = 0.0;  // INR/hr, provider
    double fuel_price         = 0.0;  // INR/L
    double fv_cognitive_rate  = 0.0;  // INR/hr^2, follower; must stay > 0
    double psp_cognitive_rate = 0.0;  // INR/hr^2, provider
    double compute_rate       = 0.0;  // INR/TB^2

    void validate() const;
};

struct Kinematics {
    double solo_velocity    = 0.0;  // km/hr
    double platoon_velocity = 0.0;  // km/hr
    double trip_distance    = 0.0;  // km

    // beta, the velocity reduction factor. No upper bound; sweeps go past 1.
    [[nodiscard]] double beta() const { return platoon_velocity / solo_velocity; }

    void validate() const;
};

struct ComputeLoad {
    double total_load     = 0.0;  // TB/km for the whole platoon
    double follower_share = 0.0;  // fraction carried by the follower, in [0, 1]

    void validate() const;
};

struct SubsidyPolicy {
    double follower_subsidy = 0.0;  // INR/km
    double provider_subsidy = 0.0;  // INR/km

    void validate() const;
};

// Full immutable parameter record; input to everything.
struct Scenario {
    AeroParams aero;
    CostRates rates;
    Kinematics kinematics;
    ComputeLoad load;
    SubsidyPolicy subsidy;
    double emission_factor = 2.69;  // kg CO2 per litre of fuel burnt

    void validate() const;

    // Non-fatal oddities (currently: drag_platoon > drag_alone).
    [[nodiscard]] std::vector<std::string> warnings() const;
};

// Follower trip cost split into the individual cost terms. `total` counts the
// service fee as a cost and subtracts the subsidy received.
struct CostBreakdown {
    double delay_alone      = 0.0;  // INR
    double fuel_alone       = 0.0;  // INR
    double cognitive_alone  = 0.0;  // INR
    double delay_platoon    = 0.0;  // INR
    double fuel_platoon     = 0.0;  // INR
    double compute_platoon  = 0.0;  // INR
    double service_fee_paid = 0.0;  // INR
    double subsidy_received = 0.0;  // INR
    double total            = 0.0;  // INR
};

/// Fuel-volume coefficient T in L per (km * (km/hr)^2): combines air density,
/// frontal area, specific fuel consumption, efficiency and fuel density.
[[nodiscard]] double aero_constant(const AeroParams& aero);

/// Composite per-km net benefit G of platooning to the follower, before fee
/// and subsidy: aerodynamic fuel saving, minus the extra delay burden, minus
/// the follower's share of the compute cost.
[[nodiscard]] double composite_g(const Scenario& s);

/// All follower cost terms for platooning d km of the trip at the given
/// per-km fee. Requires 0 <= d <= trip_distance and fee >= 0; never clamps.
[[nodiscard]] CostBreakdown follower_cost(const Scenario& s, double d, double fee);

/// Provider profit for serving the follower over d km at the given fee.
[[nodiscard]] double provider_profit(const Scenario& s, double d, double fee);

/// Follower cost of driving the whole trip alone (d = 0, fee irrelevant).
[[nodiscard]] double solo_cost(const Scenario& s);

}  // namespace plaas::model
