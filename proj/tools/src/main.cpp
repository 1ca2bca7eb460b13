// Command-line front end: snapshot | horizon | sweep | oracle.

#include <chrono>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "uavnet/config.hpp"
#include "uavnet/report.hpp"
#include "uavnet/rng.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;

uavnet::Scenario scenario_for_run(const uavnet::ScenarioConfig& config, std::uint64_t seed) {
    uavnet::ScenarioConfig per_run = config;
    per_run.seed = seed;
    return uavnet::build_scenario(per_run);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
    if (!out) {
        throw std::runtime_error("cannot open output file: " + path);
    }
    return out;
}

int run_snapshot(const uavnet::ScenarioConfig& config, const std::string& out_path,
                 const std::string& metrics_path) {
    const uavnet::Scenario scenario = uavnet::build_scenario(config);
    std::vector<std::size_t> active(scenario.devices.size());
    std::iota(active.begin(), active.end(), std::size_t{0});

    const double alt = uavnet::initial_altitude(scenario);
    const auto grid = uavnet::initial_grid(static_cast<std::size_t>(scenario.n_uavs),
                                           scenario.area_w_m, scenario.area_h_m, alt);
    const uavnet::Deployment dep = uavnet::optimize_snapshot(scenario, active, grid);

    auto out = open_out(out_path);
    uavnet::write_deployment(out, dep);

    if (!metrics_path.empty()) {
        uavnet::HorizonRun run;
        run.deployments.push_back(dep);
        auto rows = uavnet::metrics_rows(0, "proposed", run);
        auto metrics = open_out(metrics_path);
        uavnet::write_metrics_csv(metrics, rows);
    }
    return kExitOk;
}

int run_horizon(const uavnet::ScenarioConfig& config, const std::string& out_path,
                int runs, bool baseline) {
    std::vector<uavnet::MetricsRow> rows;
    for (int r = 0; r < runs; ++r) {
        const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(r);
        const uavnet::Scenario scenario = scenario_for_run(config, seed);
        const uavnet::UpdateSchedule schedule = uavnet::make_schedule(scenario);
        const uavnet::HorizonRun proposed = uavnet::simulate_horizon(scenario, schedule, seed);
        for (auto& row : uavnet::metrics_rows(r, "proposed", proposed)) rows.push_back(row);
        if (baseline) {
            const uavnet::HorizonRun fixed =
                uavnet::stationary_baseline(scenario, schedule, seed);
            for (auto& row : uavnet::metrics_rows(r, "stationary", fixed)) rows.push_back(row);
        }
    }
    auto out = open_out(out_path);
    uavnet::write_metrics_csv(out, rows);
    return kExitOk;
}

void apply_axis(uavnet::ScenarioConfig& config, const std::string& axis, double value) {
    if (axis == "n_uavs") {
        config.n_uavs = static_cast<int>(value);
    } else if (axis == "n_channels") {
        config.n_channels = static_cast<int>(value);
    } else if (axis == "p_max") {
        config.p_max_w = value;
    } else if (axis == "n_updates") {
        config.n_updates = static_cast<int>(value);
    } else {
        throw uavnet::ConfigError("unknown sweep axis: " + axis);
    }
}

int run_sweep(const uavnet::ScenarioConfig& config, const std::string& out_path,
              const std::string& axis, const std::vector<double>& values, int runs,
              bool baseline) {
    std::vector<uavnet::SweepRow> rows;
    for (double value : values) {
        uavnet::ScenarioConfig point = config;
        try {
            apply_axis(point, axis, value);
            for (int r = 0; r < runs; ++r) {
                const std::uint64_t seed = point.seed + static_cast<std::uint64_t>(r);
                const uavnet::Scenario scenario = scenario_for_run(point, seed);
                const uavnet::UpdateSchedule schedule = uavnet::make_schedule(scenario);
                const auto add = [&](const std::string& variant, const uavnet::HorizonRun& run) {
                    for (auto& m : uavnet::metrics_rows(r, variant, run)) {
                        rows.push_back(uavnet::SweepRow{axis, value, m, "ok"});
                    }
                };
                add("proposed", uavnet::simulate_horizon(scenario, schedule, seed));
                if (baseline) {
                    add("stationary", uavnet::stationary_baseline(scenario, schedule, seed));
                }
            }
        } catch (const std::exception& e) {
            uavnet::SweepRow row;
            row.axis = axis;
            row.value = value;
            row.status = std::string("error:") + e.what();
            rows.push_back(row);
        }
    }
    auto out = open_out(out_path);
    uavnet::write_sweep_csv(out, rows);
    return kExitOk;
}

int run_oracle(const uavnet::ScenarioConfig& config, const std::string& out_path, int runs) {
    if (config.n_devices > 6 || config.n_uavs > 2) {
        std::cerr << "oracle: instance too large (need n_devices <= 6, n_uavs <= 2)\n";
        return kExitConfig;
    }
    if (config.n_devices > config.n_channels) {
        std::cerr << "oracle: need n_devices <= n_channels\n";
        return kExitConfig;
    }
    using clock = std::chrono::steady_clock;
    std::vector<uavnet::OracleRow> rows;
    for (int r = 0; r < runs; ++r) {
        const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(r);
        const uavnet::Scenario scenario = scenario_for_run(config, seed);
        std::vector<std::size_t> active(scenario.devices.size());
        std::iota(active.begin(), active.end(), std::size_t{0});

        const auto grid = uavnet::initial_grid(static_cast<std::size_t>(scenario.n_uavs),
                                               scenario.area_w_m, scenario.area_h_m,
                                               uavnet::initial_altitude(scenario));
        const auto t0 = clock::now();
        const uavnet::Deployment dep = uavnet::optimize_snapshot(scenario, active, grid);
        const auto t1 = clock::now();

        uavnet::OracleOptions opts;
        opts.area_w_m = scenario.area_w_m;
        opts.area_h_m = scenario.area_h_m;
        opts.n_channels = scenario.n_channels;
        opts.gamma = scenario.gamma;
        opts.p_max_w = scenario.p_max_w;
        opts.env = scenario.env;
        const auto t2 = clock::now();
        const uavnet::OracleResult oracle = uavnet::brute_force_oracle(
            scenario.devices, static_cast<std::size_t>(scenario.n_uavs), opts, dep.uav_locs);
        const auto t3 = clock::now();
        if (!oracle.feasible) {
            continue;  // unservable instance, skip
        }

        uavnet::OracleRow row;
        row.instance = r;
        row.n_devices = scenario.devices.size();
        row.proposed_w = dep.total_power_w;
        row.oracle_w = oracle.total_power_w;
        row.gap_rel = (row.proposed_w - row.oracle_w) / row.oracle_w;
        row.proposed_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        row.oracle_ms = std::chrono::duration<double, std::milli>(t3 - t2).count();
        rows.push_back(row);
    }
    auto out = open_out(out_path);
    uavnet::write_oracle_csv(out, rows);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"UAV aerial base-station placement, power control and mobility planner"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path = "out.csv";
    std::string metrics_path;
    std::uint64_t seed_override = 0;
    bool seed_set = false;
    bool baseline = false;
    int runs = 1;
    std::string axis;
    std::vector<double> values;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "scenario config file")->required();
        cmd->add_option("--out", out_path, "output path");
        cmd->add_option_function<std::uint64_t>(
            "--seed", [&](std::uint64_t s) { seed_override = s; seed_set = true; },
            "seed override");
    };

    CLI::App* snapshot = app.add_subcommand("snapshot", "optimize one deployment snapshot");
    add_common(snapshot);
    snapshot->add_option("--metrics", metrics_path, "also write a one-row metrics CSV");

    CLI::App* horizon = app.add_subcommand("horizon", "simulate the full update horizon");
    add_common(horizon);
    horizon->add_flag("--baseline", baseline, "add paired stationary rows");
    horizon->add_option("--runs", runs, "number of seeds");

    CLI::App* sweep = app.add_subcommand("sweep", "sweep one scenario axis");
    add_common(sweep);
    sweep->add_flag("--baseline", baseline, "add paired stationary rows");
    sweep->add_option("--runs", runs, "number of seeds per value");
    sweep->add_option("--axis", axis, "n_uavs | n_channels | p_max | n_updates")->required();
    sweep->add_option("--values", values, "axis values")->required()->delimiter(',');

    CLI::App* oracle = app.add_subcommand("oracle", "compare against the exhaustive search");
    add_common(oracle);
    oracle->add_option("--runs", runs, "number of instances");

    CLI11_PARSE(app, argc, argv);

    try {
        uavnet::ScenarioConfig config = uavnet::parse_config_file(config_path);
        if (seed_set) config.seed = seed_override;

        if (snapshot->parsed()) return run_snapshot(config, out_path, metrics_path);
        if (horizon->parsed()) return run_horizon(config, out_path, runs, baseline);
        if (sweep->parsed()) return run_sweep(config, out_path, axis, values, runs, baseline);
        if (oracle->parsed()) return run_oracle(config, out_path, runs);
    } catch (const uavnet::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const uavnet::InfeasibleScheduleError& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kExitOk;
}
