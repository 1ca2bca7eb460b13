#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "uavnet/orchestrator.hpp"

namespace uavnet {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Scenario configuration exactly as written in the config file. Keys carry
/// their units; dB fields are converted to linear once, when the runtime
/// Scenario is built. Unknown keys are rejected at parse time.
struct ScenarioConfig {
    double area_width_m = 1000.0;
    double area_height_m = 1000.0;
    int n_devices = 500;
    int n_uavs = 5;
    int n_channels = 20;
    double p_max_w = 0.2;
    double gamma_db = 5.0;
    double noise_dbm = -130.0;

    std::string env_preset = "urban";  // urban | custom
    double psi_deg = 11.95;
    double beta_per_deg = 0.14;
    double eta_los_db = 3.0;
    double eta_nlos_db = 23.0;
    double carrier_hz = 2.0e9;
    double pathloss_exp = 2.0;

    std::string activation_model = "beta";  // beta | periodic
    double beta_kappa = 3.0;
    double beta_omega = 4.0;
    std::string periods_file;  // one activation period (seconds) per line
    double horizon_s = 3600.0;
    int n_updates = 10;
    double update_target = 0.0;   // 0: fill the channel budget each update
    std::string update_targets;   // semicolon list a_1;a_2;...; overrides the scalar

    double uav_speed_mps = 10.0;
    double air_density_kgm3 = 1.225;
    double drag_coeff = 0.05;
    double ref_area_m2 = 0.1;
    double n_blades = 4.0;
    double blade_chord_m = 0.1;
    double rotor_rad_s = 20.0;
    double rotor_radius_m = 0.5;
    double uav_weight_n = 50.0;
    double e_max_j = 5.0e5;

    double h_min_m = 100.0;
    double h_max_m = 400.0;
    int altitude_grid_points = 21;
    double fit_radius_m = 200.0;
    int reliability_per_horizon = 0;
    std::uint64_t seed = 1;

    bool operator==(const ScenarioConfig&) const = default;
};

/// Parse `key = value` lines; '#' starts a comment. Errors carry the line
/// number and offending key.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig parse_config_file(const std::string& path);

/// Fixed key order, full precision; parse(serialize(c)) == c.
std::string serialize_config(const ScenarioConfig& config);

/// Build the runtime scenario: dB -> linear, device scatter from the seed,
/// activation model resolution (reads periods_file for periodic).
Scenario build_scenario(const ScenarioConfig& config);

double db_to_linear(double db);
double dbm_to_watts(double dbm);

}  // namespace uavnet
