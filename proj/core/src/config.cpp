#include "uavnet/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace uavnet {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct FieldBinding {
    std::function<void(ScenarioConfig&, const std::string&, int line)> set;
    std::function<std::string(const ScenarioConfig&)> get;
};

double parse_number(const std::string& value, const std::string& key, int line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": bad numeric value for '" + key +
                          "': " + value);
    }
}

std::map<std::string, FieldBinding> bindings() {
    std::map<std::string, FieldBinding> b;
    auto num = [&b](const std::string& key, double ScenarioConfig::* field) {
        b[key] = {[key, field](ScenarioConfig& c, const std::string& v, int line) {
                      c.*field = parse_number(v, key, line);
                  },
                  [field](const ScenarioConfig& c) { return format_double(c.*field); }};
    };
    auto integer = [&b](const std::string& key, int ScenarioConfig::* field) {
        b[key] = {[key, field](ScenarioConfig& c, const std::string& v, int line) {
                      c.*field = static_cast<int>(parse_number(v, key, line));
                  },
                  [field](const ScenarioConfig& c) { return std::to_string(c.*field); }};
    };
    auto text = [&b](const std::string& key, std::string ScenarioConfig::* field) {
        b[key] = {[field](ScenarioConfig& c, const std::string& v, int) { c.*field = v; },
                  [field](const ScenarioConfig& c) { return c.*field; }};
    };

    num("area_width_m", &ScenarioConfig::area_width_m);
    num("area_height_m", &ScenarioConfig::area_height_m);
    integer("n_devices", &ScenarioConfig::n_devices);
    integer("n_uavs", &ScenarioConfig::n_uavs);
    integer("n_channels", &ScenarioConfig::n_channels);
    num("p_max_w", &ScenarioConfig::p_max_w);
    num("gamma_db", &ScenarioConfig::gamma_db);
    num("noise_dbm", &ScenarioConfig::noise_dbm);
    text("env_preset", &ScenarioConfig::env_preset);
    num("psi_deg", &ScenarioConfig::psi_deg);
    num("beta_per_deg", &ScenarioConfig::beta_per_deg);
    num("eta_los_db", &ScenarioConfig::eta_los_db);
    num("eta_nlos_db", &ScenarioConfig::eta_nlos_db);
    num("carrier_hz", &ScenarioConfig::carrier_hz);
    num("pathloss_exp", &ScenarioConfig::pathloss_exp);
    text("activation_model", &ScenarioConfig::activation_model);
    num("beta_kappa", &ScenarioConfig::beta_kappa);
    num("beta_omega", &ScenarioConfig::beta_omega);
    text("periods_file", &ScenarioConfig::periods_file);
    num("horizon_s", &ScenarioConfig::horizon_s);
    integer("n_updates", &ScenarioConfig::n_updates);
    num("update_target", &ScenarioConfig::update_target);
    text("update_targets", &ScenarioConfig::update_targets);
    num("uav_speed_mps", &ScenarioConfig::uav_speed_mps);
    num("air_density_kgm3", &ScenarioConfig::air_density_kgm3);
    num("drag_coeff", &ScenarioConfig::drag_coeff);
    num("ref_area_m2", &ScenarioConfig::ref_area_m2);
    num("n_blades", &ScenarioConfig::n_blades);
    num("blade_chord_m", &ScenarioConfig::blade_chord_m);
    num("rotor_rad_s", &ScenarioConfig::rotor_rad_s);
    num("rotor_radius_m", &ScenarioConfig::rotor_radius_m);
    num("uav_weight_n", &ScenarioConfig::uav_weight_n);
    num("e_max_j", &ScenarioConfig::e_max_j);
    num("h_min_m", &ScenarioConfig::h_min_m);
    num("h_max_m", &ScenarioConfig::h_max_m);
    integer("altitude_grid_points", &ScenarioConfig::altitude_grid_points);
    num("fit_radius_m", &ScenarioConfig::fit_radius_m);
    integer("reliability_per_horizon", &ScenarioConfig::reliability_per_horizon);
    b["seed"] = {[](ScenarioConfig& c, const std::string& v, int line) {
                     try {
                         c.seed = std::stoull(v);
                     } catch (const std::exception&) {
                         throw ConfigError("line " + std::to_string(line) +
                                           ": bad value for 'seed': " + v);
                     }
                 },
                 [](const ScenarioConfig& c) { return std::to_string(c.seed); }};
    return b;
}

// Serialization order: grouped the way the file reads naturally.
const char* kKeyOrder[] = {
    "area_width_m", "area_height_m", "n_devices", "n_uavs", "n_channels",
    "p_max_w", "gamma_db", "noise_dbm",
    "env_preset", "psi_deg", "beta_per_deg", "eta_los_db", "eta_nlos_db",
    "carrier_hz", "pathloss_exp",
    "activation_model", "beta_kappa", "beta_omega", "periods_file",
    "horizon_s", "n_updates", "update_target", "update_targets",
    "uav_speed_mps", "air_density_kgm3", "drag_coeff", "ref_area_m2", "n_blades",
    "blade_chord_m", "rotor_rad_s", "rotor_radius_m", "uav_weight_n", "e_max_j",
    "h_min_m", "h_max_m", "altitude_grid_points", "fit_radius_m",
    "reliability_per_horizon", "seed",
};

void validate(const ScenarioConfig& c) {
    // n_devices 0 is allowed: a snapshot of an empty active set is valid.
    if (c.n_devices < 0 || c.n_uavs <= 0 || c.n_channels <= 0 || c.n_updates <= 0) {
        throw ConfigError("config: counts must be positive");
    }
    if (!(c.area_width_m > 0.0) || !(c.area_height_m > 0.0)) {
        throw ConfigError("config: area must be positive");
    }
    if (!(c.p_max_w > 0.0) || !(c.horizon_s > 0.0)) {
        throw ConfigError("config: p_max_w and horizon_s must be positive");
    }
    if (c.env_preset != "urban" && c.env_preset != "custom") {
        throw ConfigError("config: env_preset must be 'urban' or 'custom'");
    }
    if (c.activation_model != "beta" && c.activation_model != "periodic") {
        throw ConfigError("config: activation_model must be 'beta' or 'periodic'");
    }
    if (c.activation_model == "periodic" && c.periods_file.empty()) {
        throw ConfigError("config: periodic activation needs periods_file");
    }
    if (!(c.h_max_m > c.h_min_m) || !(c.h_min_m > 0.0)) {
        throw ConfigError("config: need h_max_m > h_min_m > 0");
    }
}

}  // namespace

ScenarioConfig parse_config(std::istream& in) {
    static const auto kBindings = bindings();
    ScenarioConfig config;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = kBindings.find(key);
        if (it == kBindings.end()) {
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
        it->second.set(config, value, line_no);
    }
    validate(config);
    return config;
}

ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path);
    }
    return parse_config(in);
}

std::string serialize_config(const ScenarioConfig& config) {
    static const auto kBindings = bindings();
    std::ostringstream out;
    for (const char* key : kKeyOrder) {
        out << key << " = " << kBindings.at(key).get(config) << "\n";
    }
    return out.str();
}

Scenario build_scenario(const ScenarioConfig& config) {
    validate(config);
    Scenario s;
    s.area_w_m = config.area_width_m;
    s.area_h_m = config.area_height_m;
    s.n_uavs = config.n_uavs;
    s.n_channels = config.n_channels;
    s.p_max_w = config.p_max_w;
    s.gamma = db_to_linear(config.gamma_db);

    s.env.psi = config.psi_deg;
    s.env.beta_env = config.beta_per_deg;
    s.env.eta_los = db_to_linear(config.eta_los_db);
    s.env.eta_nlos = db_to_linear(config.eta_nlos_db);
    s.env.carrier_hz = config.carrier_hz;
    s.env.pathloss_exp = config.pathloss_exp;
    s.env.noise_w = dbm_to_watts(config.noise_dbm);
    s.env.validate();

    s.activation.horizon_s = config.horizon_s;
    if (config.activation_model == "beta") {
        s.activation.variant = BetaActivation{config.beta_kappa, config.beta_omega};
    } else {
        PeriodicActivation periodic;
        std::ifstream in(config.periods_file);
        if (!in) {
            throw ConfigError("cannot open periods_file: " + config.periods_file);
        }
        double tau = 0.0;
        while (in >> tau) {
            if (!(tau > 0.0)) {
                throw ConfigError("periods_file: periods must be positive");
            }
            periodic.periods_s.push_back(tau);
        }
        if (periodic.periods_s.size() < static_cast<std::size_t>(config.n_devices)) {
            throw ConfigError("periods_file: fewer periods than devices");
        }
        periodic.periods_s.resize(static_cast<std::size_t>(config.n_devices));
        s.activation.variant = std::move(periodic);
    }

    s.n_updates = config.n_updates;
    if (!config.update_targets.empty()) {
        std::istringstream list(config.update_targets);
        std::string item;
        while (std::getline(list, item, ';')) {
            try {
                s.update_targets.push_back(std::stod(item));
            } catch (const std::exception&) {
                throw ConfigError("config: bad entry in update_targets: " + item);
            }
        }
        s.n_updates = static_cast<int>(s.update_targets.size());
    } else if (config.update_target > 0.0) {
        s.update_targets.assign(static_cast<std::size_t>(config.n_updates),
                                config.update_target);
    }

    s.airframe.speed_mps = config.uav_speed_mps;
    s.airframe.air_density = config.air_density_kgm3;
    s.airframe.drag_coeff = config.drag_coeff;
    s.airframe.ref_area_m2 = config.ref_area_m2;
    s.airframe.n_blades = config.n_blades;
    s.airframe.blade_chord_m = config.blade_chord_m;
    s.airframe.rotor_rad_s = config.rotor_rad_s;
    s.airframe.rotor_radius_m = config.rotor_radius_m;
    s.airframe.weight_n = config.uav_weight_n;
    s.airframe.validate();
    s.e_max_j = config.e_max_j;

    s.h_lo_m = config.h_min_m;
    s.h_hi_m = config.h_max_m;
    s.h_grid_points = config.altitude_grid_points;
    s.fit_radius_m = config.fit_radius_m;
    s.reliability_per_horizon = config.reliability_per_horizon != 0;
    s.seed = config.seed;
    s.devices = scatter_devices(static_cast<std::size_t>(config.n_devices),
                                config.area_width_m, config.area_height_m, config.seed);
    return s;
}

}  // namespace uavnet
