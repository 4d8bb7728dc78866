#include "plaas/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace plaas::equilibrium {

namespace {

// Frequently reused derived quantities.
struct Derived {
    double v;
    double v_p;
    double trip;
    double beta;
    double m;             // v^2 / (2 c_o), slope of the interior best response
    double q;             // (c_o_psp / c_o_fv) / beta^2
    double g;             // composite per-km benefit
    double full_fee;      // G + gamma_f
    double no_trade;      // full_fee + trip / m
    double margin_terms;  // provider per-km margin besides the fee
    double quad_coeff;    // c_o_psp / v_p^2
};

Derived derive(const model::Scenario& s) {
    Derived d;
    d.v = s.kinematics.solo_velocity;
    d.v_p = s.kinematics.platoon_velocity;
    d.trip = s.kinematics.trip_distance;
    d.beta = s.kinematics.beta();
    d.m = d.v * d.v / (2.0 * s.rates.fv_cognitive_rate);
    d.q = s.rates.psp_cognitive_rate / s.rates.fv_cognitive_rate / (d.beta * d.beta);
    d.g = model::composite_g(s);
    d.full_fee = d.g + s.subsidy.follower_subsidy;
    d.no_trade = d.full_fee + d.trip / d.m;
    const double provider_load = (1.0 - s.load.follower_share) * s.load.total_load;
    const double c_ad = model::aero_constant(s.aero) * s.aero.drag_alone * s.rates.fuel_price;
    d.margin_terms = s.subsidy.provider_subsidy - s.rates.psp_delay_rate / d.v_p -
                     0.5 * s.rates.compute_rate * provider_load * provider_load -
                     c_ad * d.beta * d.beta * d.v * d.v;
    d.quad_coeff = s.rates.psp_cognitive_rate / (d.v_p * d.v_p);
    return d;
}

// d(substituted profit)/d(fee) via the product rule; the best response enters
// with slope -m inside the interior window and 0 at the corners.
double substituted_profit_slope(const Derived& d, double fee, const BestResponse& br) {
    const double response_slope = br.regime == ResponseRegime::Interior ? -d.m : 0.0;
    return br.distance + (fee + d.margin_terms) * response_slope -
           2.0 * d.quad_coeff * br.distance * response_slope;
}

BestResponse best_response(const Derived& d, double fee) {
    BestResponse br;
    if (fee <= d.full_fee + kRegimeTol) {
        br.distance = d.trip;
        br.regime = ResponseRegime::CornerFull;
        br.multiplier_high = std::max(0.0, d.full_fee - fee);
    } else if (fee >= d.no_trade - kRegimeTol) {
        br.distance = 0.0;
        br.regime = ResponseRegime::CornerZero;
        br.multiplier_low = std::max(0.0, fee - d.no_trade);
    } else {
        br.distance = std::clamp(d.trip + d.m * (d.full_fee - fee), 0.0, d.trip);
        br.regime = ResponseRegime::Interior;
    }
    return br;
}

double interior_fee(const model::Scenario& s, const Derived& d) {
    const double provider_load = (1.0 - s.load.follower_share) * s.load.total_load;
    const double c_ad = model::aero_constant(s.aero) * s.aero.drag_alone * s.rates.fuel_price;
    return ((d.full_fee + d.trip / d.m) * (1.0 + d.q) +
            0.5 * s.rates.compute_rate * provider_load * provider_load +
            c_ad * d.beta * d.beta * d.v * d.v +
            s.rates.psp_delay_rate / d.v_p -
            s.subsidy.provider_subsidy) /
           (2.0 + d.q);
}

struct Candidate {
    double fee;
    BestResponse response;
    double profit;
};

// Higher profit wins; ties go to larger distance, then smaller fee.
bool better(const Candidate& a, const Candidate& b) {
    if (a.profit != b.profit) return a.profit > b.profit;
    if (a.response.distance != b.response.distance) {
        return a.response.distance > b.response.distance;
    }
    return a.fee < b.fee;
}

}  // namespace

double full_participation_fee(const model::Scenario& s) {
    return derive(s).full_fee;
}

double no_trade_fee(const model::Scenario& s) {
    return derive(s).no_trade;
}

BestResponse follower_best_response(const model::Scenario& s, double fee) {
    if (!(fee >= 0.0)) {
        throw std::invalid_argument("follower_best_response: fee must be >= 0");
    }
    return best_response(derive(s), fee);
}

double provider_interior_fee(const model::Scenario& s) {
    const Derived d = derive(s);
    return interior_fee(s, d);
}

Equilibrium solve_equilibrium(const model::Scenario& s) {
    const Derived d = derive(s);

    Equilibrium eq;
    eq.solo_baseline_cost = model::solo_cost(s);

    if (d.trip == 0.0) {
        eq.fee_regime = FeeRegime::NoTrade;
        eq.follower_breakdown = model::follower_cost(s, 0.0, 0.0);
        return eq;
    }

    const double stationary = interior_fee(s, d);

    std::vector<double> fees;
    if (std::isfinite(stationary)) fees.push_back(std::max(0.0, stationary));
    if (std::isfinite(d.full_fee) && d.full_fee >= 0.0) fees.push_back(d.full_fee);
    if (std::isfinite(d.no_trade) && d.no_trade >= 0.0) fees.push_back(d.no_trade);
    fees.push_back(0.0);

    Candidate winner{fees.front(), best_response(d, fees.front()), 0.0};
    winner.profit = model::provider_profit(s, winner.response.distance, winner.fee);
    for (std::size_t i = 1; i < fees.size(); ++i) {
        Candidate c{fees[i], best_response(d, fees[i]), 0.0};
        c.profit = model::provider_profit(s, c.response.distance, c.fee);
        if (better(c, winner)) winner = c;
    }

    eq.fee = winner.fee;
    eq.distance = winner.response.distance;
    eq.provider_profit = winner.profit;
    eq.follower_breakdown = model::follower_cost(s, eq.distance, eq.fee);

    if (winner.response.distance == 0.0 && winner.profit <= 0.0) {
        eq.fee_regime = FeeRegime::NoTrade;
    } else if (std::abs(winner.fee - stationary) <= kRegimeTol &&
               winner.response.regime == ResponseRegime::Interior) {
        eq.fee_regime = FeeRegime::InteriorFee;
    } else if (std::abs(winner.fee - d.full_fee) <= kRegimeTol) {
        eq.fee_regime = FeeRegime::ClampedToFullParticipation;
        eq.boundary_multipliers = {0.0, d.trip};
    } else if (winner.fee <= kRegimeTol) {
        eq.fee_regime = FeeRegime::ClampedToZeroFee;
        eq.psp_multiplier =
            std::max(0.0, -substituted_profit_slope(d, winner.fee, winner.response));
    } else {
        // Unreached for well-posed inputs; classify by the follower's regime.
        eq.fee_regime = winner.response.regime == ResponseRegime::CornerFull
                            ? FeeRegime::ClampedToFullParticipation
                            : FeeRegime::InteriorFee;
        if (eq.fee_regime == FeeRegime::ClampedToFullParticipation) {
            eq.boundary_multipliers = {0.0, d.trip};
        }
    }
    return eq;
}

SubsidyQuadrant subsidy_quadrant(const model::Scenario& s) {
    SubsidyQuadrant quad;
    model::Scenario t = s;
    t.subsidy = {0.0, 0.0};
    quad.case_none = solve_equilibrium(t);
    t.subsidy = {s.subsidy.follower_subsidy, 0.0};
    quad.case_follower_only = solve_equilibrium(t);
    t.subsidy = {0.0, s.subsidy.provider_subsidy};
    quad.case_provider_only = solve_equilibrium(t);
    quad.case_both = solve_equilibrium(s);
    return quad;
}

GammaInterval follower_subsidy_bounds(const model::Scenario& s, double fee) {
    if (!(fee >= 0.0)) {
        throw std::invalid_argument("follower_subsidy_bounds: fee must be >= 0");
    }
    const Derived d = derive(s);
    GammaInterval interval;
    interval.low = std::max(0.0, fee - d.g - d.trip / d.m);
    interval.high = fee - d.g;
    return interval;
}

}  // namespace plaas::equilibrium
