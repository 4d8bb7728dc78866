#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "plaas/analysis.hpp"
#include "plaas/model.hpp"

// Scenario file format: UTF-8 text, one `key = value` per line, `#` starts a
// comment. Keys mirror the model notation:
//
//   v, v_p, D            solo/platoon velocity [km/hr], trip distance [km]
//   c_d, c_d_psp         delay rates [INR/hr]; c_d_psp defaults to c_d
//   c_f                  fuel price [INR/L]
//   c_o, c_o_psp         cognitive rates [INR/hr^2]; c_o_psp defaults to c_o
//   c_c                  compute rate [INR/TB^2]
//   xi, L_T              follower load share, total load [TB/km]
//   gamma_f, gamma_l     subsidies [INR/km]
//   A, C_df, C_dp        frontal area [m^2], drag coefficients
//   rho_air, rho_diesel  densities [kg/m^3]
//   psi, eta             specific fuel consumption [kg/kWh], efficiency [km/L]
//   phi                  kg CO2 per litre; defaults to 2.69
//
// Unknown keys are collected as warnings, never errors. Missing required keys
// are reported alphabetically; duplicates are errors.

namespace plaas::io {

class ParseError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ScenarioFile {
    std::string path;  // empty when parsed from a string
    model::Scenario scenario;
    std::vector<std::string> unknown_keys;
};

[[nodiscard]] ScenarioFile parse_scenario(const std::string& text);
[[nodiscard]] ScenarioFile load_scenario_file(const std::string& path);
[[nodiscard]] std::string serialize_scenario(const model::Scenario& s);

// One `--axis param=start:stop:count` flag.
struct AxisRange {
    analysis::SweepParam param = analysis::SweepParam::Beta;
    double start = 0.0;
    double stop = 0.0;
    int count = 1;

    [[nodiscard]] std::vector<double> values() const;
};

[[nodiscard]] AxisRange parse_axis(const std::string& text);

}  // namespace plaas::io
