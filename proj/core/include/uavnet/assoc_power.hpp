#pragma once

#include <cstddef>
#include <vector>

#include "uavnet/channel.hpp"
#include "uavnet/geometry.hpp"
#include "uavnet/spectrum.hpp"

namespace uavnet {

/// Joint association/power state over the active devices.
struct PowerSolution {
    std::vector<int> assoc;       // device -> serving UAV index
    std::vector<double> power_w;  // transmit power, linear Watts
    std::vector<char> served;     // SINR target met under the power cap
    bool converged = false;
    int iterations = 0;

    double total_power_w() const;  // sum over served devices
    std::size_t n_served() const;
};

/// Altitude band within which a UAV at the given ground offset can serve the
/// device at its power cap. `feasible == false` means no altitude works.
struct AltitudeBand {
    bool feasible = false;
    double h_min_m = 0.0;
    double h_max_m = 0.0;
};

AltitudeBand altitude_bounds(const Vec3& device, double uav_x, double uav_y,
                             const Environment& env, double gamma, double p_max_w);

/// Closed-form altitude cap from the pure-LoS link budget (geometry-free).
double altitude_upper_bound(const Environment& env, double gamma, double p_max_w);

/// Minimum-total-power fixed point of the joint power-control/association
/// iteration. Devices that cannot meet the SINR target at the cap stay pinned
/// at p_max and are flagged unserved; they keep interfering at p_max.
PowerSolution joint_power_association(const std::vector<Vec3>& uavs,
                                      const std::vector<Vec3>& devices,
                                      const ChannelMap& map,
                                      const Environment& env,
                                      double gamma,
                                      double p_max_w,
                                      const std::vector<double>* initial_power = nullptr);

/// Interference-free association (active devices <= channels): minimum total
/// path loss matching under the per-link cap, solved with the shared
/// assignment solver on a device x (UAV-slot) matrix. Unservable devices are
/// flagged rather than raised as errors.
struct InterferenceFreeResult {
    PowerSolution solution;
    bool feasible = false;
    std::vector<std::size_t> unservable;
};

InterferenceFreeResult interference_free_assignment(const std::vector<Vec3>& uavs,
                                                    const std::vector<Vec3>& devices,
                                                    const Environment& env,
                                                    double gamma,
                                                    double p_max_w);

}  // namespace uavnet
