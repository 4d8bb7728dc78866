#include "plaas/model.hpp"

#include <cmath>
#include <stdexcept>

namespace plaas::model {

namespace {

void require(bool ok, const char* message) {
    if (!ok) {
        throw std::invalid_argument(message);
    }
}

void require_finite(double x, const char* message) {
    require(std::isfinite(x), message);
}

}  // namespace

void AeroParams::validate() const {
    require_finite(frontal_area, "frontal_area must be finite");
    require_finite(drag_alone, "drag_alone must be finite");
    require_finite(drag_platoon, "drag_platoon must be finite");
    require_finite(air_density, "air_density must be finite");
    require_finite(fuel_density, "fuel_density must be finite");
    require_finite(specific_fuel_consumption, "specific_fuel_consumption must be finite");
    require_finite(vehicle_efficiency, "vehicle_efficiency must be finite");
    require(frontal_area > 0.0, "frontal_area must be > 0");
    require(drag_alone > 0.0, "drag_alone must be > 0");
    require(drag_platoon > 0.0, "drag_platoon must be > 0");
    require(air_density > 0.0, "air_density must be > 0");
    require(fuel_density > 0.0, "fuel_density must be > 0");
    require(specific_fuel_consumption > 0.0, "specific_fuel_consumption must be > 0");
    require(vehicle_efficiency > 0.0, "vehicle_efficiency must be > 0");
}

void CostRates::validate() const {
    require_finite(fv_delay_rate, "fv_delay_rate must be finite");
    require_finite(psp_delay_rate, "psp_delay_rate must be finite");
    require_finite(fuel_price, "fuel_price must be finite");
    require_finite(fv_cognitive_rate, "fv_cognitive_rate must be finite");
    require_finite(psp_cognitive_rate, "psp_cognitive_rate must be finite");
    require_finite(compute_rate, "compute_rate must be finite");
    require(fv_delay_rate >= 0.0, "fv_delay_rate must be >= 0");
    require(psp_delay_rate >= 0.0, "psp_delay_rate must be >= 0");
    require(fuel_price >= 0.0, "fuel_price must be >= 0");
    require(fv_cognitive_rate > 0.0, "fv_cognitive_rate must be > 0");
    require(psp_cognitive_rate >= 0.0, "psp_cognitive_rate must be >= 0");
    require(compute_rate >= 0.0, "compute_rate must be >= 0");
}

void Kinematics::validate() const {
    require_finite(solo_velocity, "solo_velocity must be finite");
    require_finite(platoon_velocity, "platoon_velocity must be finite");
    require_finite(trip_distance, "trip_distance must be finite");
    require(solo_velocity > 0.0, "solo_velocity must be > 0");
    require(platoon_velocity > 0.0, "platoon_velocity must be > 0");
    require(trip_distance >= 0.0, "trip_distance must be >= 0");
}

void ComputeLoad::validate() const {
    require_finite(total_load, "total_load must be finite");
    require_finite(follower_share, "follower_share must be finite");
    require(total_load >= 0.0, "total_load must be >= 0");
    require(follower_share >= 0.0 && follower_share <= 1.0,
            "follower_share must be within [0, 1]");
}

void SubsidyPolicy::validate() const {
    require_finite(follower_subsidy, "follower_subsidy must be finite");
    require_finite(provider_subsidy, "provider_subsidy must be finite");
    require(follower_subsidy >= 0.0, "follower_subsidy must be >= 0");
    require(provider_subsidy >= 0.0, "provider_subsidy must be >= 0");
}

void Scenario::validate() const {
    aero.validate();
    rates.validate();
    kinematics.validate();
    load.validate();
    subsidy.validate();
    require_finite(emission_factor, "emission_factor must be finite");
    require(emission_factor >= 0.0, "emission_factor must be >= 0");
}

std::vector<std::string> Scenario::warnings() const {
    std::vector<std::string> out;
    if (aero.drag_platoon > aero.drag_alone) {
        out.push_back("drag_platoon exceeds drag_alone (alpha = " +
                      std::to_string(aero.drag_ratio()) + " > 1)");
    }
    return out;
}

double aero_constant(const AeroParams& aero) {
    // 3.6^2 converts (km/hr)^2 to (m/s)^2; the 1000 converts m^3 to litres.
    return 0.5 * aero.air_density * aero.frontal_area * aero.specific_fuel_consumption /
           (3.6 * 3.6 * aero.vehicle_efficiency * 1000.0 * aero.fuel_density);
}

double composite_g(const Scenario& s) {
    const double beta = s.kinematics.beta();
    if (!(beta > 0.0)) {
        throw std::invalid_argument("composite_g: velocity ratio must be > 0");
    }
    const double v = s.kinematics.solo_velocity;
    const double c_ad = aero_constant(s.aero) * s.aero.drag_alone * s.rates.fuel_price;
    const double follower_load = s.load.follower_share * s.load.total_load;
    return c_ad * v * v * (1.0 - s.aero.drag_ratio() * beta * beta) +
           s.rates.fv_delay_rate / v * (1.0 - 1.0 / beta) -
           0.5 * s.rates.compute_rate * follower_load * follower_load;
}

CostBreakdown follower_cost(const Scenario& s, double d, double fee) {
    const double trip = s.kinematics.trip_distance;
    if (!(d >= 0.0 && d <= trip)) {
        throw std::invalid_argument("follower_cost: d must be within [0, trip_distance]");
    }
    if (!(fee >= 0.0)) {
        throw std::invalid_argument("follower_cost: fee must be >= 0");
    }
    const double v = s.kinematics.solo_velocity;
    const double v_p = s.kinematics.platoon_velocity;
    const double t = aero_constant(s.aero);
    const double solo_leg = trip - d;
    const double follower_load = s.load.follower_share * s.load.total_load;

    CostBreakdown b;
    b.delay_alone = solo_leg / v * s.rates.fv_delay_rate;
    b.fuel_alone = t * s.aero.drag_alone * v * v * solo_leg * s.rates.fuel_price;
    b.cognitive_alone = s.rates.fv_cognitive_rate * solo_leg * solo_leg / (v * v);
    b.delay_platoon = d / v_p * s.rates.fv_delay_rate;
    b.fuel_platoon = t * s.aero.drag_platoon * v_p * v_p * d * s.rates.fuel_price;
    b.compute_platoon = 0.5 * s.rates.compute_rate * follower_load * follower_load * d;
    b.service_fee_paid = d * fee;
    b.subsidy_received = s.subsidy.follower_subsidy * d;
    b.total = b.delay_alone + b.fuel_alone + b.cognitive_alone + b.delay_platoon +
              b.fuel_platoon + b.compute_platoon + b.service_fee_paid - b.subsidy_received;
    return b;
}

double provider_profit(const Scenario& s, double d, double fee) {
    const double trip = s.kinematics.trip_distance;
    if (!(d >= 0.0 && d <= trip)) {
        throw std::invalid_argument("provider_profit: d must be within [0, trip_distance]");
    }
    if (!(fee >= 0.0)) {
        throw std::invalid_argument("provider_profit: fee must be >= 0");
    }
    const double v_p = s.kinematics.platoon_velocity;
    const double t = aero_constant(s.aero);
    const double provider_load = (1.0 - s.load.follower_share) * s.load.total_load;
    // The lead vehicle runs at platoon speed with no drag reduction.
    return fee * d + s.subsidy.provider_subsidy * d -
           s.rates.psp_delay_rate * d / v_p -
           0.5 * s.rates.compute_rate * provider_load * provider_load * d -
           s.rates.psp_cognitive_rate * d * d / (v_p * v_p) -
           t * s.aero.drag_alone * v_p * v_p * d * s.rates.fuel_price;
}

double solo_cost(const Scenario& s) {
    return follower_cost(s, 0.0, 0.0).total;
}

}  // namespace plaas::model
