#pragma once

#include <cstdint>
#include <vector>

#include "uavnet/activation.hpp"
#include "uavnet/assoc_power.hpp"
#include "uavnet/channel.hpp"
#include "uavnet/energy.hpp"
#include "uavnet/geometry.hpp"
#include "uavnet/placement.hpp"
#include "uavnet/spectrum.hpp"

namespace uavnet {

/// Everything a full run needs: geometry, radio, activation, airframe.
struct Scenario {
    double area_w_m = 1000.0;
    double area_h_m = 1000.0;
    int n_uavs = 5;
    int n_channels = 20;
    double gamma = 3.1622776601683795;  // 5 dB, linear
    double p_max_w = 0.2;
    Environment env;
    ActivationModel activation;
    int n_updates = 10;
    std::vector<double> update_targets;  // empty: one channel budget per update
    AirframeParams airframe;
    double e_max_j = 5.0e5;
    double h_lo_m = 100.0;
    double h_hi_m = 400.0;
    int h_grid_points = 21;
    double fit_radius_m = 200.0;
    bool reliability_per_horizon = false;
    std::uint64_t seed = 1;
    std::vector<Vec3> devices;

    PlaceAllOptions place_options() const;
};

/// One optimized network snapshot at an update instant.
struct Deployment {
    double t_s = 0.0;
    std::vector<std::size_t> active;  // global device ids
    std::vector<Vec3> uav_locs;
    ChannelMap channel_map;
    PowerSolution solution;  // indexed over `active`
    double total_power_w = 0.0;  // served devices only
    int outer_iterations = 0;
    std::vector<double> power_trace;  // all-device totals, non-increasing
};

struct HorizonRun {
    UpdateSchedule schedule;
    std::vector<Deployment> deployments;
    std::vector<RelocationPlan> relocations;  // one per update, first leaves the initial grid
    std::vector<double> uav_energy_j;         // spent per UAV over the horizon
    std::vector<double> remaining_j;          // e_max minus spent
    double reliability = 0.0;                 // fraction of fully served updates
    bool relocation_shortfall = false;
};

std::vector<Vec3> scatter_devices(std::size_t count, double area_w_m, double area_h_m,
                                  std::uint64_t seed);

/// Deterministic initial/stationary placement: near-square grid of cell
/// centers at the given altitude.
std::vector<Vec3> initial_grid(std::size_t n_uavs, double area_w_m, double area_h_m,
                               double altitude_m);

double initial_altitude(const Scenario& scenario);

UpdateSchedule make_schedule(const Scenario& scenario);

/// Alternates association/power control with per-UAV placement until the
/// total power settles. The recorded trace counts every active device (pinned
/// devices at their cap) and is asserted non-increasing.
Deployment optimize_snapshot(const Scenario& scenario,
                             const std::vector<std::size_t>& active,
                             const std::vector<Vec3>& init_uavs, double t_s = 0.0);

/// Association/power control only, at fixed UAV locations.
Deployment stationary_snapshot(const Scenario& scenario,
                               const std::vector<std::size_t>& active,
                               const std::vector<Vec3>& uav_locs, double t_s = 0.0);

HorizonRun simulate_horizon(const Scenario& scenario, const UpdateSchedule& schedule,
                            std::uint64_t seed);

HorizonRun stationary_baseline(const Scenario& scenario, const UpdateSchedule& schedule,
                               std::uint64_t seed);

double reliability(const std::vector<HorizonRun>& runs, bool per_horizon = false);

/// Exhaustive grid search over UAV positions and device associations for tiny
/// instances; exact power control per association. Extra candidate positions
/// (e.g. a solver's output) can be added to the grid.
struct OracleOptions {
    double area_w_m = 300.0;
    double area_h_m = 300.0;
    double grid_res_m = 10.0;
    std::vector<double> altitudes_m = {100.0, 150.0, 200.0, 250.0, 300.0};
    int n_channels = 20;
    double gamma = 3.1622776601683795;
    double p_max_w = 0.2;
    Environment env;
};

struct OracleResult {
    bool feasible = false;
    std::vector<Vec3> uav_locs;
    std::vector<int> assoc;
    std::vector<double> power_w;
    double total_power_w = 0.0;
};

OracleResult brute_force_oracle(const std::vector<Vec3>& devices, std::size_t n_uavs,
                                const OracleOptions& opts,
                                const std::vector<Vec3>& extra_candidates = {});

}  // namespace uavnet
