#pragma once

#include <optional>
#include <utility>

#include "plaas/model.hpp"

// Closed-form best responses and the subgame-perfect equilibrium of the
// fee-setting game, including the corner regimes and the four subsidy cases.

namespace plaas::equilibrium {

// Absolute tolerance on fee units used to classify regimes at exact
// thresholds; boundary points go to the closed side (corner-at-full when the
// fee equals the full-participation fee).
inline constexpr double kRegimeTol = 1e-9;

enum class ResponseRegime {
    CornerZero,  // stays out of the platoon entirely
    Interior,    // platooning for part of the trip
    CornerFull,  // platooning for the whole trip
};

// Follower's optimal platoon distance for a given fee, with the Lagrange
// multipliers of the 0 <= d <= D box.
struct BestResponse {
    double distance = 0.0;  // km
    ResponseRegime regime = ResponseRegime::CornerZero;
    double multiplier_low = 0.0;   // INR/km, d >= 0 constraint
    double multiplier_high = 0.0;  // INR/km, d <= D constraint
};

enum class FeeRegime {
    InteriorFee,                 // unconstrained stationary fee
    ClampedToFullParticipation,  // fee pinned at the full-participation threshold
    ClampedToZeroFee,            // fee pinned at zero
    NoTrade,                     // no fee yields positive profit; follower stays out
};

struct Equilibrium {
    double fee = 0.0;       // INR/km
    double distance = 0.0;  // km
    FeeRegime fee_regime = FeeRegime::NoTrade;
    model::CostBreakdown follower_breakdown;
    double provider_profit = 0.0;
    double solo_baseline_cost = 0.0;
    // Multiplier of the fee >= 0 constraint; nonzero only when the fee clamps
    // to zero.
    double psp_multiplier = 0.0;
    // Multipliers (low, high) of the 0 <= fee <= full-participation bound in
    // the d = D regime; absent otherwise.
    std::optional<std::pair<double, double>> boundary_multipliers;
};

struct SubsidyQuadrant {
    Equilibrium case_none;           // both subsidies forced to zero
    Equilibrium case_follower_only;  // provider subsidy forced to zero
    Equilibrium case_provider_only;  // follower subsidy forced to zero
    Equilibrium case_both;           // subsidies as given in the scenario
};

// Closed follower-subsidy interval for which the best response is within
// [0, D] at the given fee. The lower end is clamped at zero; high < low means
// no feasible non-negative subsidy.
struct GammaInterval {
    double low = 0.0;
    double high = 0.0;
    [[nodiscard]] bool empty() const { return high < low; }
};

/// Fee below which the follower platoons the whole trip (G + follower subsidy).
[[nodiscard]] double full_participation_fee(const model::Scenario& s);

/// Fee at or above which the follower stays out entirely. Exceeds
/// full_participation_fee by exactly 2 c_o D / v^2.
[[nodiscard]] double no_trade_fee(const model::Scenario& s);

[[nodiscard]] BestResponse follower_best_response(const model::Scenario& s, double fee);

/// Unconstrained stationary fee of the provider's profit after substituting
/// the follower's interior best response. May be negative.
[[nodiscard]] double provider_interior_fee(const model::Scenario& s);

/// Subgame-perfect equilibrium: evaluates the stationary fee and the regime
/// thresholds as fee candidates and keeps the most profitable pair, breaking
/// ties toward larger distance, then smaller fee.
[[nodiscard]] Equilibrium solve_equilibrium(const model::Scenario& s);

/// Equilibria of the four subsidy on/off combinations.
[[nodiscard]] SubsidyQuadrant subsidy_quadrant(const model::Scenario& s);

[[nodiscard]] GammaInterval follower_subsidy_bounds(const model::Scenario& s, double fee);

}  // namespace plaas::equilibrium
