#include "plaas/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace plaas::verify {

namespace {

// Per-term derivatives of the follower cost. The gradient is affine in d:
//   grad(d) = base + fee + curvature * (d - trip)
struct GradientTerms {
    double base = 0.0;       // fee-independent terms, evaluated at d = trip
    double curvature = 0.0;  // 2 c_o / v^2
    double trip = 0.0;
    double term_scale = 0.0;  // sum of term magnitudes, excluding fee

    explicit GradientTerms(const model::Scenario& s) {
        const double v = s.kinematics.solo_velocity;
        const double v_p = s.kinematics.platoon_velocity;
        const double t = model::aero_constant(s.aero);
        const double follower_load = s.load.follower_share * s.load.total_load;
        const double delay_solo = s.rates.fv_delay_rate / v;
        const double fuel_solo = t * s.aero.drag_alone * v * v * s.rates.fuel_price;
        const double delay_platoon = s.rates.fv_delay_rate / v_p;
        const double fuel_platoon = t * s.aero.drag_platoon * v_p * v_p * s.rates.fuel_price;
        const double compute = 0.5 * s.rates.compute_rate * follower_load * follower_load;
        base = -delay_solo - fuel_solo + delay_platoon + fuel_platoon + compute -
               s.subsidy.follower_subsidy;
        curvature = 2.0 * s.rates.fv_cognitive_rate / (v * v);
        trip = s.kinematics.trip_distance;
        term_scale = delay_solo + fuel_solo + delay_platoon + fuel_platoon + compute +
                     s.subsidy.follower_subsidy;
    }

    [[nodiscard]] double at(double d, double fee) const {
        return base + fee + curvature * (d - trip);
    }

    // Fee with zero gradient at d = trip (the full-participation threshold).
    [[nodiscard]] double full_fee() const { return -base; }

    // Fee with zero gradient at d = 0 (the exit threshold).
    [[nodiscard]] double exit_fee() const { return curvature * trip - base; }

    [[nodiscard]] double scale(double d, double fee) const {
        return 1.0 + term_scale + std::abs(fee) + curvature * std::abs(d - trip);
    }
};

double bisect_minimum(const GradientTerms& g, double fee) {
    if (g.at(0.0, fee) >= 0.0) return 0.0;
    if (g.at(g.trip, fee) <= 0.0) return g.trip;
    double lo = 0.0;
    double hi = g.trip;
    const double width_tol = 1e-13 * (1.0 + g.trip);
    for (int i = 0; i < 200 && hi - lo > width_tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (g.at(mid, fee) > 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Provider-side pieces of the fee-substituted profit
//   w(fee) = (fee + margin) * d(fee) - quad * d(fee)^2.
struct ProviderTerms {
    double margin = 0.0;          // per-km margin besides the fee
    double margin_scale = 0.0;    // sum of magnitudes of the margin terms
    double quad = 0.0;            // c_o_psp / v_p^2
    double response_slope = 0.0;  // -v^2 / (2 c_o), slope of the interior response

    explicit ProviderTerms(const model::Scenario& s) {
        const double v = s.kinematics.solo_velocity;
        const double v_p = s.kinematics.platoon_velocity;
        const double t = model::aero_constant(s.aero);
        const double provider_load = (1.0 - s.load.follower_share) * s.load.total_load;
        const double fuel = t * s.aero.drag_alone * v_p * v_p * s.rates.fuel_price;
        const double compute = 0.5 * s.rates.compute_rate * provider_load * provider_load;
        const double delay = s.rates.psp_delay_rate / v_p;
        margin = s.subsidy.provider_subsidy - delay - compute - fuel;
        margin_scale = s.subsidy.provider_subsidy + delay + compute + fuel;
        quad = s.rates.psp_cognitive_rate / (v_p * v_p);
        response_slope = -v * v / (2.0 * s.rates.fv_cognitive_rate);
    }

    // Derivative of the substituted profit; `slope` is the local derivative of
    // the best response (response_slope inside the interior window, 0 at the
    // corners).
    [[nodiscard]] double profit_slope(double fee, double d, double slope) const {
        return d + (fee + margin) * slope - 2.0 * quad * d * slope;
    }

    [[nodiscard]] double scale(double fee, double d) const {
        const double s = -response_slope;
        return 1.0 + std::abs(d) + (std::abs(fee) + margin_scale) * s +
               2.0 * quad * std::abs(d) * s;
    }
};

// Complementary slackness holds when either factor vanishes at its own scale.
bool slack_ok(double multiplier, double mult_scale, double constraint, double cons_scale,
              double tol) {
    return (std::isfinite(multiplier) && std::isfinite(constraint)) &&
           (std::abs(multiplier) <= tol * mult_scale ||
            std::abs(constraint) <= tol * cons_scale);
}

bool all_small(const std::vector<double>& values, double bound) {
    return std::all_of(values.begin(), values.end(), [bound](double v) {
        return std::isfinite(v) && std::abs(v) <= bound;
    });
}

}  // namespace

double follower_cost_gradient(const model::Scenario& s, double d, double fee) {
    return GradientTerms(s).at(d, fee);
}

double exact_best_distance(const model::Scenario& s, double fee) {
    return bisect_minimum(GradientTerms(s), fee);
}

KktCertificate check_follower_kkt(const model::Scenario& s, double fee,
                                  const equilibrium::BestResponse& candidate, double tol) {
    const GradientTerms g(s);
    const double d = candidate.distance;
    const double lambda_low = candidate.multiplier_low;
    const double lambda_high = candidate.multiplier_high;

    KktCertificate cert;
    cert.stationarity_residual = g.at(d, fee) - lambda_low + lambda_high;
    cert.complementary_slackness_residuals = {lambda_low * d, lambda_high * (d - g.trip)};
    cert.primal_violations = {std::max(0.0, -d), std::max(0.0, d - g.trip)};
    cert.dual_violations = {std::max(0.0, -lambda_low), std::max(0.0, -lambda_high)};

    const double scale =
        g.scale(d, fee) + std::abs(lambda_low) + std::abs(lambda_high);
    const double span = std::max(1.0, g.trip);
    cert.passed = std::isfinite(cert.stationarity_residual) &&
                  std::abs(cert.stationarity_residual) <= tol * scale &&
                  slack_ok(lambda_low, scale, d, span, tol) &&
                  slack_ok(lambda_high, scale, d - g.trip, span, tol) &&
                  all_small(cert.primal_violations, tol * span) &&
                  all_small(cert.dual_violations, tol * scale);
    return cert;
}

KktCertificate check_provider_kkt(const model::Scenario& s,
                                  const equilibrium::Equilibrium& eq, double tol) {
    using equilibrium::FeeRegime;
    const GradientTerms g(s);
    const ProviderTerms p(s);
    const double fee = eq.fee;
    const double d_check = bisect_minimum(g, fee);
    const bool interior = d_check > 0.0 && d_check < g.trip;
    const double scale = p.scale(fee, d_check);
    const double span = std::max(1.0, g.trip);
    const double fee_span = std::max(1.0, std::abs(fee) + std::abs(g.full_fee()));

    KktCertificate cert;
    // The reported distance must be the follower's actual best response.
    cert.primal_violations.push_back(std::abs(eq.distance - d_check));
    cert.primal_violations.push_back(std::max(0.0, -fee));
    bool slack_passed = true;

    switch (eq.fee_regime) {
        case FeeRegime::InteriorFee:
        case FeeRegime::ClampedToZeroFee: {
            // Stationarity of the substituted profit with the fee >= 0
            // multiplier; at an interior fee the multiplier is zero.
            const double theta = eq.psp_multiplier;
            const double slope =
                p.profit_slope(fee, d_check, interior ? p.response_slope : 0.0);
            cert.stationarity_residual = slope + theta;
            cert.complementary_slackness_residuals = {theta * fee};
            cert.dual_violations = {std::max(0.0, -theta)};
            slack_passed = slack_ok(theta, scale, fee, fee_span, tol);
            break;
        }
        case FeeRegime::ClampedToFullParticipation: {
            const double mu_low =
                eq.boundary_multipliers ? eq.boundary_multipliers->first : 0.0;
            const double mu_high =
                eq.boundary_multipliers ? eq.boundary_multipliers->second : 0.0;
            const double full_fee = g.full_fee();
            // On the d = trip branch the profit is linear in the fee with
            // slope equal to the trip distance.
            cert.stationarity_residual = d_check - mu_high + mu_low;
            cert.complementary_slackness_residuals = {mu_low * fee,
                                                      mu_high * (full_fee - fee)};
            cert.primal_violations.push_back(std::max(0.0, fee - full_fee));
            cert.dual_violations = {std::max(0.0, -mu_low), std::max(0.0, -mu_high)};
            // No profitable deviation into the interior window just above the
            // threshold: the interior branch must be non-increasing there.
            cert.dual_violations.push_back(
                std::max(0.0, p.profit_slope(fee, d_check, p.response_slope)));
            slack_passed = slack_ok(mu_low, span, fee, fee_span, tol) &&
                           slack_ok(mu_high, span, full_fee - fee, fee_span, tol);
            break;
        }
        case FeeRegime::NoTrade: {
            cert.stationarity_residual = 0.0;
            // Zero profit at a zero response, and no profit left just below
            // the fee: the interior branch must still be climbing there.
            cert.complementary_slackness_residuals = {
                model::provider_profit(s, d_check, fee)};
            slack_passed =
                std::abs(cert.complementary_slackness_residuals.front()) <=
                tol * scale * span;
            if (fee > tol && g.trip > 0.0) {
                cert.dual_violations.push_back(
                    std::max(0.0, -p.profit_slope(fee, d_check, p.response_slope)));
            }
            break;
        }
    }

    cert.passed = std::isfinite(cert.stationarity_residual) &&
                  std::abs(cert.stationarity_residual) <= tol * scale && slack_passed &&
                  all_small(cert.primal_violations, tol * span) &&
                  all_small(cert.dual_violations, tol * scale);
    return cert;
}

ConvexityReport check_convexity(const model::Scenario& s) {
    const GradientTerms g(s);

    ConvexityReport report;
    report.follower_curvature = g.curvature;

    // Measure the substituted profit's curvature strictly inside the interior
    // fee window; for a quadratic the wide-step second difference is exact.
    const double lo = std::max(0.0, g.full_fee());
    const double width = g.exit_fee() - lo;
    if (width > 0.0 && g.trip > 0.0) {
        const double h = width / 4.0;
        auto profit_at = [&](double fee) {
            return model::provider_profit(s, bisect_minimum(g, fee), fee);
        };
        report.provider_curvature =
            (profit_at(lo + h) - 2.0 * profit_at(lo + 2.0 * h) + profit_at(lo + 3.0 * h)) /
            (h * h);
    } else {
        report.provider_curvature = 0.0;
        report.degenerate = true;
    }
    if (report.follower_curvature == 0.0) report.degenerate = true;

    if (report.follower_curvature < 0.0) {
        throw std::logic_error("check_convexity: follower objective is not convex");
    }
    if (report.provider_curvature > 1e-6 * (1.0 + std::abs(report.provider_curvature))) {
        throw std::logic_error("check_convexity: substituted provider objective is not concave");
    }
    return report;
}

OracleResult brute_force_equilibrium(const model::Scenario& s, double fee_grid_step) {
    if (!(fee_grid_step > 0.0) || !std::isfinite(fee_grid_step)) {
        throw std::invalid_argument("brute_force_equilibrium: fee_grid_step must be > 0");
    }
    const GradientTerms g(s);
    const double exit_fee = g.exit_fee();
    if (!std::isfinite(exit_fee)) {
        throw std::invalid_argument(
            "brute_force_equilibrium: fee grid upper bound is not finite");
    }
    const double hi = std::max(0.0, exit_fee);
    const double margin = 1.0 + 0.05 * hi;
    const auto count =
        static_cast<std::size_t>(std::ceil((hi + margin) / fee_grid_step)) + 1;

    struct Best {
        double profit = -std::numeric_limits<double>::infinity();
        double fee = 0.0;
        double distance = 0.0;
    };
    auto scan = [&](std::size_t begin, std::size_t end) {
        Best best;
        for (std::size_t i = begin; i < end; ++i) {
            const double fee = static_cast<double>(i) * fee_grid_step;
            const double d = bisect_minimum(g, fee);
            const double profit = model::provider_profit(s, d, fee);
            // Strict improvement keeps the lowest-fee maximizer.
            if (profit > best.profit) {
                best = {profit, fee, d};
            }
        }
        return best;
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers =
        std::min<std::size_t>(hw, std::max<std::size_t>(count / 4096, 1));
    Best best;
    if (workers <= 1) {
        best = scan(0, count);
    } else {
        std::vector<Best> partial(workers);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const std::size_t chunk = (count + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(count, begin + chunk);
            pool.emplace_back([&, w, begin, end] { partial[w] = scan(begin, end); });
        }
        for (auto& t : pool) t.join();
        // Merge in index order so ties still resolve to the lowest fee.
        best = partial.front();
        for (std::size_t w = 1; w < workers; ++w) {
            if (partial[w].profit > best.profit) best = partial[w];
        }
    }

    OracleResult result;
    result.fee = best.fee;
    result.distance = best.distance;
    result.profit = best.profit;
    result.fee_grid_step = fee_grid_step;
    return result;
}

}  // namespace plaas::verify
