// plaas: solver CLI for the platooning service pricing game.
//
// Subcommands:
//   solve    equilibrium fee/distance report for one scenario
//   subsidy  equilibria of the four subsidy on/off cases
//   sweep    equilibrium table over one or two swept parameters
//
// Exit codes: 0 success, 1 input error, 2 verification failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "plaas/analysis.hpp"
#include "plaas/csv.hpp"
#include "plaas/equilibrium.hpp"
#include "plaas/model.hpp"
#include "plaas/scenario_io.hpp"
#include "plaas/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitVerifyFailure = 2;

using plaas::io::format_number;

plaas::io::ScenarioFile load_scenario(const std::string& path) {
    plaas::io::ScenarioFile file = plaas::io::load_scenario_file(path);
    for (const std::string& key : file.unknown_keys) {
        std::cerr << "warning: unknown key '" << key << "' ignored\n";
    }
    for (const std::string& warning : file.scenario.warnings()) {
        std::cerr << "warning: " << warning << "\n";
    }
    return file;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw plaas::io::ParseError("cannot open output file '" + path + "'");
    }
    out << content;
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
    } else {
        write_text_file(path, content);
    }
}

std::string solve_csv(const plaas::equilibrium::Equilibrium& eq,
                      const plaas::analysis::EmissionsReport& emissions) {
    std::string out = plaas::io::csv_row({"fee_per_km", "fee_total", "distance_km", "regime",
                                          "follower_cost", "solo_cost", "provider_profit",
                                          "delta_co2_kg"});
    out += plaas::io::csv_row({format_number(eq.fee), format_number(eq.fee * eq.distance),
                               format_number(eq.distance), plaas::analysis::to_string(eq.fee_regime),
                               format_number(eq.follower_breakdown.total),
                               format_number(eq.solo_baseline_cost),
                               format_number(eq.provider_profit),
                               format_number(emissions.delta_co2)});
    return out;
}

int run_solve(const std::string& scenario_path, const std::string& csv_path, bool verify,
              double kkt_tol, double oracle_step) {
    const plaas::model::Scenario s = load_scenario(scenario_path).scenario;
    const plaas::equilibrium::Equilibrium eq = plaas::equilibrium::solve_equilibrium(s);
    const plaas::analysis::EmissionsReport emissions = plaas::analysis::subsidy_emissions(s);

    std::cout << "scenario:        " << scenario_path << "\n"
              << "regime:          " << plaas::analysis::to_string(eq.fee_regime) << "\n"
              << "service fee:     " << format_number(eq.fee) << " INR/km"
              << "  (x distance: " << format_number(eq.fee * eq.distance) << " INR)\n"
              << "platoon leg:     " << format_number(eq.distance) << " km of "
              << format_number(s.kinematics.trip_distance) << " km\n"
              << "follower cost:   " << format_number(eq.follower_breakdown.total)
              << " INR  (solo baseline: " << format_number(eq.solo_baseline_cost) << " INR)\n"
              << "provider profit: " << format_number(eq.provider_profit) << " INR\n"
              << "subsidy CO2 cut: " << format_number(emissions.delta_co2) << " kg/trip"
              << (emissions.closed_form ? "" : "  (equilibrium difference; closed form n/a)")
              << "\n";

    if (!csv_path.empty()) {
        write_text_file(csv_path, solve_csv(eq, emissions));
    }

    if (verify) {
        bool ok = true;

        const plaas::equilibrium::BestResponse br =
            plaas::equilibrium::follower_best_response(s, eq.fee);
        const plaas::verify::KktCertificate follower =
            plaas::verify::check_follower_kkt(s, eq.fee, br, kkt_tol);
        std::cout << "verify: follower KKT " << (follower.passed ? "pass" : "FAIL")
                  << " (stationarity " << format_number(follower.stationarity_residual)
                  << ")\n";
        ok = ok && follower.passed;

        const plaas::verify::KktCertificate provider =
            plaas::verify::check_provider_kkt(s, eq, kkt_tol);
        std::cout << "verify: provider KKT " << (provider.passed ? "pass" : "FAIL")
                  << " (stationarity " << format_number(provider.stationarity_residual)
                  << ")\n";
        ok = ok && provider.passed;

        const plaas::verify::OracleResult oracle =
            plaas::verify::brute_force_equilibrium(s, oracle_step);
        const double m =
            s.kinematics.solo_velocity * s.kinematics.solo_velocity /
            (2.0 * s.rates.fv_cognitive_rate);
        const bool fee_ok = std::abs(eq.fee - oracle.fee) <= oracle_step;
        const bool distance_ok = std::abs(eq.distance - oracle.distance) <= m * oracle_step;
        const bool profit_ok =
            eq.provider_profit >= oracle.profit - 1e-6 * std::abs(oracle.profit);
        std::cout << "verify: oracle (step " << format_number(oracle_step) << ") "
                  << ((fee_ok && distance_ok && profit_ok) ? "pass" : "FAIL") << " (|dfee| "
                  << format_number(std::abs(eq.fee - oracle.fee)) << ", |dd| "
                  << format_number(std::abs(eq.distance - oracle.distance)) << ")\n";
        ok = ok && fee_ok && distance_ok && profit_ok;

        if (!ok) {
            std::cerr << "verification failed\n";
            return kExitVerifyFailure;
        }
    }
    return kExitOk;
}

int run_subsidy(const std::string& scenario_path, const std::string& out_path) {
    const plaas::model::Scenario s = load_scenario(scenario_path).scenario;
    const plaas::equilibrium::SubsidyQuadrant quad = plaas::equilibrium::subsidy_quadrant(s);

    const double fuel_none = plaas::analysis::trip_fuel(s, quad.case_none.distance);
    auto row = [&](const char* label, const plaas::equilibrium::Equilibrium& eq) {
        const double co2_vs_none =
            s.emission_factor * (fuel_none - plaas::analysis::trip_fuel(s, eq.distance));
        return plaas::io::csv_row({label, format_number(eq.fee), format_number(eq.distance),
                                   format_number(eq.provider_profit),
                                   format_number(eq.follower_breakdown.total),
                                   format_number(co2_vs_none)});
    };

    std::string out = plaas::io::csv_row(
        {"case", "fee_per_km", "distance_km", "provider_profit", "follower_cost",
         "delta_co2_vs_none_kg"});
    out += row("none", quad.case_none);
    out += row("follower_only", quad.case_follower_only);
    out += row("provider_only", quad.case_provider_only);
    out += row("both", quad.case_both);
    emit(out_path, out);
    return kExitOk;
}

std::string sweep_csv(const plaas::analysis::SweepTable& table) {
    std::vector<std::string> header;
    for (const std::string& name : table.header) header.push_back(name);
    std::string out = plaas::io::csv_row(header);
    for (const plaas::analysis::SweepRow& row : table.rows) {
        std::vector<std::string> fields;
        for (double v : row.axis_values) fields.push_back(format_number(v));
        for (plaas::analysis::SweepColumn column : table.outputs) {
            switch (column) {
                case plaas::analysis::SweepColumn::Fee:
                    fields.push_back(format_number(row.eq.fee));
                    break;
                case plaas::analysis::SweepColumn::Distance:
                    fields.push_back(format_number(row.eq.distance));
                    break;
                case plaas::analysis::SweepColumn::FollowerCost:
                    fields.push_back(format_number(row.eq.follower_breakdown.total));
                    break;
                case plaas::analysis::SweepColumn::ProviderProfit:
                    fields.push_back(format_number(row.eq.provider_profit));
                    break;
                case plaas::analysis::SweepColumn::DeltaCo2:
                    fields.push_back(format_number(row.emissions.delta_co2));
                    break;
                case plaas::analysis::SweepColumn::Regime:
                    fields.push_back(plaas::analysis::to_string(row.eq.fee_regime));
                    break;
            }
        }
        out += plaas::io::csv_row(fields);
    }
    return out;
}

int run_sweep_command(const std::string& scenario_path, const std::vector<std::string>& axes,
                      const std::vector<std::string>& outputs, const std::string& out_path,
                      double gamma_split, bool decouple_delay) {
    plaas::analysis::SweepSpec spec;
    spec.base = load_scenario(scenario_path).scenario;
    spec.gamma_split = gamma_split;
    spec.couple_delay_rates = !decouple_delay;

    const plaas::io::AxisRange first = plaas::io::parse_axis(axes.at(0));
    spec.axis1 = {first.param, first.values()};
    if (axes.size() > 1) {
        const plaas::io::AxisRange second = plaas::io::parse_axis(axes.at(1));
        spec.axis2 = plaas::analysis::SweepAxis{second.param, second.values()};
    }
    for (const std::string& name : outputs) {
        const auto column = plaas::analysis::parse_sweep_column(name);
        if (!column) {
            throw plaas::io::ParseError(
                "unknown output column '" + name +
                "' (valid: fee_per_km, distance_km, follower_cost, provider_profit, "
                "delta_co2_kg, regime)");
        }
        spec.outputs.push_back(*column);
    }

    emit(out_path, sweep_csv(plaas::analysis::run_sweep(spec)));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Equilibrium solver for the platooning-as-a-service pricing game"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string csv_path;
    std::string out_path;
    bool verify = false;
    double kkt_tol = 1e-9;
    double oracle_step = 1e-3;
    std::vector<std::string> axes;
    std::vector<std::string> outputs;
    double gamma_split = 0.5;
    bool decouple_delay = false;

    CLI::App* solve = app.add_subcommand("solve", "Solve one scenario and report the result");
    solve->footer("CSV columns: fee_per_km,fee_total,distance_km,regime,follower_cost,"
                  "solo_cost,provider_profit,delta_co2_kg");
    solve->add_option("scenario", scenario_path, "Scenario file")->required();
    solve->add_option("--csv", csv_path, "Write a one-row CSV to this path");
    solve->add_flag("--verify", verify,
                    "Re-check the result with KKT certificates and a fee-grid search");
    solve->add_option("--kkt-tol", kkt_tol, "Relative tolerance for the KKT certificates")
        ->capture_default_str();
    solve->add_option("--oracle-step", oracle_step, "Fee grid step for the search oracle")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    CLI::App* subsidy =
        app.add_subcommand("subsidy", "Equilibria of the four subsidy on/off cases (CSV)");
    subsidy->footer("CSV columns: case,fee_per_km,distance_km,provider_profit,"
                    "follower_cost,delta_co2_vs_none_kg");
    subsidy->add_option("scenario", scenario_path, "Scenario file")->required();
    subsidy->add_option("-o,--output", out_path, "Write CSV here instead of stdout");

    CLI::App* sweep = app.add_subcommand("sweep", "Equilibrium table over swept parameters (CSV)");
    sweep->footer("CSV columns: one per axis parameter, then the selected outputs\n"
                  "(default: fee_per_km,distance_km,follower_cost,provider_profit,"
                  "delta_co2_kg,regime)");
    sweep->add_option("scenario", scenario_path, "Scenario file")->required();
    sweep->add_option("--axis", axes, "param=start:stop:count (repeat once for a second axis)")
        ->required()
        ->expected(1, 2);
    sweep->add_option("--outputs", outputs, "Comma-separated output columns")->delimiter(',');
    sweep->add_option("-o,--output", out_path, "Write CSV here instead of stdout");
    sweep->add_option("--gamma-split", gamma_split,
                      "Follower share of a swept total subsidy")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    sweep->add_flag("--decouple-delay", decouple_delay,
                    "Sweep c_d without updating the provider delay rate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (solve->parsed()) {
            return run_solve(scenario_path, csv_path, verify, kkt_tol, oracle_step);
        }
        if (subsidy->parsed()) {
            return run_subsidy(scenario_path, out_path);
        }
        if (sweep->parsed()) {
            return run_sweep_command(scenario_path, axes, outputs, out_path, gamma_split,
                                     decouple_delay);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}
