#include "plaas/scenario_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace plaas::io {

namespace {

std::string trim(const std::string& text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    return text.substr(begin, end - begin);
}

// Keys with a default are not required.
const char* const kRequiredKeys[] = {
    "A", "C_df", "C_dp", "D", "L_T", "c_c", "c_d", "c_f", "c_o",
    "eta", "gamma_f", "gamma_l", "psi", "rho_air", "rho_diesel", "v", "v_p", "xi",
};
const char* const kOptionalKeys[] = {"c_d_psp", "c_o_psp", "phi"};

bool known_key(const std::string& key) {
    for (const char* k : kRequiredKeys) {
        if (key == k) return true;
    }
    for (const char* k : kOptionalKeys) {
        if (key == k) return true;
    }
    return false;
}

}  // namespace

ScenarioFile parse_scenario(const std::string& text) {
    std::map<std::string, double> values;
    ScenarioFile file;

    std::istringstream stream(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        const std::size_t hash = raw.find('#');
        std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("line " + std::to_string(line_no) +
                             ": expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value_text = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ParseError("line " + std::to_string(line_no) + ": empty key");
        }

        char* parse_end = nullptr;
        const double value = std::strtod(value_text.c_str(), &parse_end);
        if (value_text.empty() || parse_end != value_text.c_str() + value_text.size()) {
            throw ParseError("line " + std::to_string(line_no) + ": non-numeric value for '" +
                             key + "'");
        }

        if (!known_key(key)) {
            file.unknown_keys.push_back(key);
            continue;
        }
        if (values.count(key) != 0) {
            throw ParseError("duplicate key '" + key + "' (line " + std::to_string(line_no) +
                             ")");
        }
        values[key] = value;
    }

    // Alphabetical so the reported key is deterministic.
    for (const char* key : kRequiredKeys) {
        if (values.count(key) == 0) {
            throw ParseError("missing required key '" + std::string(key) + "'");
        }
    }

    model::Scenario& s = file.scenario;
    s.kinematics.solo_velocity = values["v"];
    s.kinematics.platoon_velocity = values["v_p"];
    s.kinematics.trip_distance = values["D"];
    s.rates.fv_delay_rate = values["c_d"];
    s.rates.psp_delay_rate = values.count("c_d_psp") ? values["c_d_psp"] : values["c_d"];
    s.rates.fuel_price = values["c_f"];
    s.rates.fv_cognitive_rate = values["c_o"];
    s.rates.psp_cognitive_rate = values.count("c_o_psp") ? values["c_o_psp"] : values["c_o"];
    s.rates.compute_rate = values["c_c"];
    s.load.follower_share = values["xi"];
    s.load.total_load = values["L_T"];
    s.subsidy.follower_subsidy = values["gamma_f"];
    s.subsidy.provider_subsidy = values["gamma_l"];
    s.aero.frontal_area = values["A"];
    s.aero.drag_alone = values["C_df"];
    s.aero.drag_platoon = values["C_dp"];
    s.aero.air_density = values["rho_air"];
    s.aero.fuel_density = values["rho_diesel"];
    s.aero.specific_fuel_consumption = values["psi"];
    s.aero.vehicle_efficiency = values["eta"];
    s.emission_factor = values.count("phi") ? values["phi"] : 2.69;

    s.validate();
    return file;
}

ScenarioFile load_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open scenario file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    ScenarioFile file = parse_scenario(buffer.str());
    file.path = path;
    return file;
}

std::string serialize_scenario(const model::Scenario& s) {
    auto line = [](const char* key, double value) {
        char buffer[96];
        std::snprintf(buffer, sizeof(buffer), "%s = %.17g\n", key, value);
        return std::string(buffer);
    };
    std::string out;
    out += line("v", s.kinematics.solo_velocity);
    out += line("v_p", s.kinematics.platoon_velocity);
    out += line("D", s.kinematics.trip_distance);
    out += line("c_d", s.rates.fv_delay_rate);
    out += line("c_d_psp", s.rates.psp_delay_rate);
    out += line("c_f", s.rates.fuel_price);
    out += line("c_o", s.rates.fv_cognitive_rate);
    out += line("c_o_psp", s.rates.psp_cognitive_rate);
    out += line("c_c", s.rates.compute_rate);
    out += line("xi", s.load.follower_share);
    out += line("L_T", s.load.total_load);
    out += line("gamma_f", s.subsidy.follower_subsidy);
    out += line("gamma_l", s.subsidy.provider_subsidy);
    out += line("A", s.aero.frontal_area);
    out += line("C_df", s.aero.drag_alone);
    out += line("C_dp", s.aero.drag_platoon);
    out += line("rho_air", s.aero.air_density);
    out += line("rho_diesel", s.aero.fuel_density);
    out += line("psi", s.aero.specific_fuel_consumption);
    out += line("eta", s.aero.vehicle_efficiency);
    out += line("phi", s.emission_factor);
    return out;
}

std::vector<double> AxisRange::values() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        out.push_back(start);
        return out;
    }
    for (int i = 0; i < count; ++i) {
        out.push_back(start + (stop - start) * static_cast<double>(i) /
                                  static_cast<double>(count - 1));
    }
    return out;
}

AxisRange parse_axis(const std::string& text) {
    const std::size_t eq = text.find('=');
    if (eq == std::string::npos) {
        throw ParseError("axis '" + text + "': expected param=start:stop:count");
    }
    const std::string name = trim(text.substr(0, eq));
    const auto param = analysis::parse_sweep_param(name);
    if (!param) {
        std::string valid;
        for (const std::string& n : analysis::sweep_param_names()) {
            if (!valid.empty()) valid += ", ";
            valid += n;
        }
        throw ParseError("axis '" + text + "': unknown parameter '" + name +
                         "' (valid: " + valid + ")");
    }

    AxisRange range;
    range.param = *param;
    const std::string spec = text.substr(eq + 1);
    double start = 0.0;
    double stop = 0.0;
    long count = 0;
    char extra = '\0';
    if (std::sscanf(spec.c_str(), "%lf:%lf:%ld%c", &start, &stop, &count, &extra) != 3 ||
        count < 1) {
        throw ParseError("axis '" + text + "': expected start:stop:count with count >= 1");
    }
    range.start = start;
    range.stop = stop;
    range.count = static_cast<int>(count);
    return range;
}

}  // namespace plaas::io
