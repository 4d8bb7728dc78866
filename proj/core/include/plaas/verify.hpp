#pragma once

#include <vector>

#include "plaas/equilibrium.hpp"
#include "plaas/model.hpp"

// Independent correctness machinery: first-order certificates, curvature
// checks, and a brute-force bilevel search that must agree with the closed
// forms. The oracle path works only from the raw cost terms (their analytic
// per-term derivatives and a bisection inner solve); it never evaluates the
// assembled best-response or stationary-fee formulas.

namespace plaas::verify {

// Residuals and multiplier checks proving (or refuting) first-order
// optimality of a candidate solution. A failing certificate is a valid
// result, not an error. Residuals are compared against tol times a
// term-magnitude scale, so tol acts as a relative tolerance.
struct KktCertificate {
    double stationarity_residual = 0.0;
    std::vector<double> complementary_slackness_residuals;
    std::vector<double> primal_violations;
    std::vector<double> dual_violations;
    bool passed = false;
};

struct ConvexityReport {
    double follower_curvature = 0.0;  // INR/km^2, equals 2 c_o / v^2
    double provider_curvature = 0.0;  // second difference of fee-substituted profit
    bool degenerate = false;          // no interior fee window to measure
};

struct OracleResult {
    double fee = 0.0;       // INR/km
    double distance = 0.0;  // km
    double profit = 0.0;    // INR
    double fee_grid_step = 0.0;
};

/// d(follower cost)/dd assembled term by term from the cost components.
[[nodiscard]] double follower_cost_gradient(const model::Scenario& s, double d, double fee);

/// Follower's exact cost minimizer on [0, D]: bisection on the (monotone)
/// cost gradient, independent of the closed-form best response.
[[nodiscard]] double exact_best_distance(const model::Scenario& s, double fee);

/// First-order system for the follower's box-constrained minimization,
/// evaluated at the candidate best response produced for (s, fee).
[[nodiscard]] KktCertificate check_follower_kkt(const model::Scenario& s, double fee,
                                                const equilibrium::BestResponse& candidate,
                                                double tol);

/// First-order system for the provider's fee choice, dispatched on the
/// equilibrium's fee regime (stationarity, boundary system, or one-sided
/// derivative signs).
[[nodiscard]] KktCertificate check_provider_kkt(const model::Scenario& s,
                                                const equilibrium::Equilibrium& eq,
                                                double tol);

/// Curvatures of the two scalar objectives. Throws std::logic_error if the
/// follower side is not convex or the provider side not concave.
[[nodiscard]] ConvexityReport check_convexity(const model::Scenario& s);

/// Exhaustive fee-grid search with an exact inner solve per fee. Grid points
/// may be evaluated concurrently; the argmax is deterministic with ties
/// resolved to the lowest fee.
[[nodiscard]] OracleResult brute_force_equilibrium(const model::Scenario& s,
                                                   double fee_grid_step);

}  // namespace plaas::verify
