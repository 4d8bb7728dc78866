#include "plaas/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace plaas::analysis {

namespace {

const SweepColumn kAllColumns[] = {
    SweepColumn::Fee,           SweepColumn::Distance, SweepColumn::FollowerCost,
    SweepColumn::ProviderProfit, SweepColumn::DeltaCo2, SweepColumn::Regime,
};

}  // namespace

const char* to_string(SweepParam param) {
    switch (param) {
        case SweepParam::Beta: return "beta";
        case SweepParam::Alpha: return "alpha";
        case SweepParam::DelayRate: return "c_d";
        case SweepParam::GammaF: return "gamma_f";
        case SweepParam::GammaL: return "gamma_l";
        case SweepParam::GammaTotal: return "gamma_total";
        case SweepParam::Xi: return "xi";
        case SweepParam::LoadTotal: return "L_T";
        case SweepParam::TripDistance: return "D";
    }
    return "?";
}

const char* to_string(SweepColumn column) {
    switch (column) {
        case SweepColumn::Fee: return "fee_per_km";
        case SweepColumn::Distance: return "distance_km";
        case SweepColumn::FollowerCost: return "follower_cost";
        case SweepColumn::ProviderProfit: return "provider_profit";
        case SweepColumn::DeltaCo2: return "delta_co2_kg";
        case SweepColumn::Regime: return "regime";
    }
    return "?";
}

const char* to_string(equilibrium::FeeRegime regime) {
    switch (regime) {
        case equilibrium::FeeRegime::InteriorFee: return "interior";
        case equilibrium::FeeRegime::ClampedToFullParticipation: return "full_participation";
        case equilibrium::FeeRegime::ClampedToZeroFee: return "zero_fee";
        case equilibrium::FeeRegime::NoTrade: return "no_trade";
    }
    return "?";
}

std::optional<SweepParam> parse_sweep_param(const std::string& name) {
    for (SweepParam p : {SweepParam::Beta, SweepParam::Alpha, SweepParam::DelayRate,
                         SweepParam::GammaF, SweepParam::GammaL, SweepParam::GammaTotal,
                         SweepParam::Xi, SweepParam::LoadTotal, SweepParam::TripDistance}) {
        if (name == to_string(p)) return p;
    }
    return std::nullopt;
}

std::optional<SweepColumn> parse_sweep_column(const std::string& name) {
    for (SweepColumn c : kAllColumns) {
        if (name == to_string(c)) return c;
    }
    // Short aliases used on the command line.
    if (name == "fee") return SweepColumn::Fee;
    if (name == "distance") return SweepColumn::Distance;
    if (name == "delta_co2") return SweepColumn::DeltaCo2;
    return std::nullopt;
}

std::vector<std::string> sweep_param_names() {
    std::vector<std::string> names;
    for (SweepParam p : {SweepParam::Beta, SweepParam::Alpha, SweepParam::DelayRate,
                         SweepParam::GammaF, SweepParam::GammaL, SweepParam::GammaTotal,
                         SweepParam::Xi, SweepParam::LoadTotal, SweepParam::TripDistance}) {
        names.emplace_back(to_string(p));
    }
    return names;
}

double trip_fuel(const model::Scenario& s, double d) {
    const double trip = s.kinematics.trip_distance;
    if (!(d >= 0.0 && d <= trip)) {
        throw std::invalid_argument("trip_fuel: d must be within [0, trip_distance]");
    }
    const double t = model::aero_constant(s.aero);
    const double v = s.kinematics.solo_velocity;
    const double beta = s.kinematics.beta();
    const double alpha = s.aero.drag_ratio();
    return t * s.aero.drag_alone * v * v * (trip - d) +
           t * alpha * s.aero.drag_alone * beta * beta * v * v * d;
}

EmissionsReport subsidy_emissions(const model::Scenario& s) {
    model::Scenario bare = s;
    bare.subsidy = {0.0, 0.0};
    const equilibrium::Equilibrium none = equilibrium::solve_equilibrium(bare);
    const equilibrium::Equilibrium both = equilibrium::solve_equilibrium(s);

    EmissionsReport report;
    report.fuel_alone_trip = trip_fuel(s, 0.0);
    report.fuel_mixed_trip = trip_fuel(s, both.distance);
    report.delta_fuel_direct = trip_fuel(s, none.distance) - trip_fuel(s, both.distance);

    const bool interior =
        none.fee_regime == equilibrium::FeeRegime::InteriorFee &&
        both.fee_regime == equilibrium::FeeRegime::InteriorFee;
    if (interior) {
        const double v = s.kinematics.solo_velocity;
        const double beta = s.kinematics.beta();
        const double m = v * v / (2.0 * s.rates.fv_cognitive_rate);
        const double q =
            s.rates.psp_cognitive_rate / s.rates.fv_cognitive_rate / (beta * beta);
        const double gamma_sum = s.subsidy.follower_subsidy + s.subsidy.provider_subsidy;
        report.delta_distance = m * gamma_sum / (2.0 + q);
        report.delta_fuel = model::aero_constant(s.aero) * s.aero.drag_alone * v * v *
                            (1.0 - s.aero.drag_ratio() * beta * beta) *
                            report.delta_distance;
        report.closed_form = true;
    } else {
        report.delta_distance = both.distance - none.distance;
        report.delta_fuel = report.delta_fuel_direct;
        report.closed_form = false;
    }
    report.delta_co2 = s.emission_factor * report.delta_fuel;
    return report;
}

model::Scenario apply_sweep_param(const model::Scenario& base, SweepParam param, double value,
                                  const SweepSpec& spec) {
    model::Scenario s = base;
    switch (param) {
        case SweepParam::Beta:
            s.kinematics.platoon_velocity = value * base.kinematics.solo_velocity;
            break;
        case SweepParam::Alpha:
            s.aero.drag_platoon = value * base.aero.drag_alone;
            break;
        case SweepParam::DelayRate:
            s.rates.fv_delay_rate = value;
            if (spec.couple_delay_rates) s.rates.psp_delay_rate = value;
            break;
        case SweepParam::GammaF:
            s.subsidy.follower_subsidy = value;
            break;
        case SweepParam::GammaL:
            s.subsidy.provider_subsidy = value;
            break;
        case SweepParam::GammaTotal:
            s.subsidy.follower_subsidy = spec.gamma_split * value;
            s.subsidy.provider_subsidy = (1.0 - spec.gamma_split) * value;
            break;
        case SweepParam::Xi:
            s.load.follower_share = value;
            break;
        case SweepParam::LoadTotal:
            s.load.total_load = value;
            break;
        case SweepParam::TripDistance:
            s.kinematics.trip_distance = value;
            break;
    }
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        std::ostringstream msg;
        msg << "sweep point " << to_string(param) << " = " << value
            << " yields an invalid scenario: " << e.what();
        throw std::invalid_argument(msg.str());
    }
    return s;
}

SweepTable run_sweep(const SweepSpec& spec) {
    if (spec.axis1.values.empty()) {
        throw std::invalid_argument("run_sweep: axis1 needs at least one value");
    }
    if (spec.axis2 && spec.axis2->values.empty()) {
        throw std::invalid_argument("run_sweep: axis2 needs at least one value");
    }
    for (double v : spec.axis1.values) {
        if (!std::isfinite(v)) throw std::invalid_argument("run_sweep: axis values must be finite");
    }
    if (spec.axis2) {
        for (double v : spec.axis2->values) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("run_sweep: axis values must be finite");
            }
        }
    }

    SweepTable table;
    table.outputs = spec.outputs.empty()
                        ? std::vector<SweepColumn>(std::begin(kAllColumns), std::end(kAllColumns))
                        : spec.outputs;
    table.header.emplace_back(to_string(spec.axis1.param));
    if (spec.axis2) table.header.emplace_back(to_string(spec.axis2->param));
    for (SweepColumn c : table.outputs) table.header.emplace_back(to_string(c));

    const std::size_t n1 = spec.axis1.values.size();
    const std::size_t n2 = spec.axis2 ? spec.axis2->values.size() : 1;
    const std::size_t total = n1 * n2;
    table.rows.resize(total);

    // Substitute sequentially so an invalid grid point surfaces before any
    // solving starts and independently of the evaluation order.
    std::vector<model::Scenario> grid;
    grid.reserve(total);
    for (std::size_t i = 0; i < n1; ++i) {
        model::Scenario first =
            apply_sweep_param(spec.base, spec.axis1.param, spec.axis1.values[i], spec);
        for (std::size_t j = 0; j < n2; ++j) {
            model::Scenario point =
                spec.axis2
                    ? apply_sweep_param(first, spec.axis2->param, spec.axis2->values[j], spec)
                    : first;
            SweepRow& row = table.rows[i * n2 + j];
            row.axis_values.push_back(spec.axis1.values[i]);
            if (spec.axis2) row.axis_values.push_back(spec.axis2->values[j]);
            grid.push_back(point);
        }
    }

    auto solve_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            table.rows[k].eq = equilibrium::solve_equilibrium(grid[k]);
            table.rows[k].emissions = subsidy_emissions(grid[k]);
        }
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min<std::size_t>(hw, std::max<std::size_t>(total / 64, 1));
    if (workers <= 1) {
        solve_range(0, total);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const std::size_t chunk = (total + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(total, begin + chunk);
            pool.emplace_back([&, begin, end] { solve_range(begin, end); });
        }
        for (auto& t : pool) t.join();
    }
    return table;
}

}  // namespace plaas::analysis
