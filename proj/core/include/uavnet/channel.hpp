#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "uavnet/geometry.hpp"

namespace uavnet {

/// Air-to-ground propagation constants. Excess-loss factors and noise are
/// stored linear; dB only appears at the CLI boundary.
struct Environment {
    double psi = 11.95;               // LoS logistic offset, degrees
    double beta_env = 0.14;           // LoS logistic slope, 1/degree
    double eta_los = 1.9952623149688795;    // 3 dB excess loss, LoS
    double eta_nlos = 199.52623149688787;   // 23 dB excess loss, NLoS
    double carrier_hz = 2.0e9;
    double pathloss_exp = 2.0;        // alpha
    double noise_w = 1.0e-16;         // -130 dBm
    double lightspeed = 299792458.0;

    /// Free-space scale factor 4*pi*f_c/c.
    double k_o() const { return 4.0 * kPi * carrier_hz / lightspeed; }

    void validate() const;
};

struct LinkBudget {
    double distance_m = 0.0;
    double elevation_deg = 0.0;
    double p_los = 0.0;
    double avg_pathloss = 0.0;  // linear ratio >= 1-ish
    double avg_gain = 0.0;      // 1 / avg_pathloss
};

struct DegenerateGeometryError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Elevation angle in degrees seen from the ground device toward the UAV.
/// Throws DegenerateGeometryError when the points coincide.
double elevation_angle(const Vec3& device, const Vec3& uav);

/// LoS probability as a logistic function of the elevation angle.
double los_probability(double elevation_deg, const Environment& env);

/// LoS/NLoS-probability-weighted path loss (linear ratio). Distances below
/// 1 m are floored to avoid the hover singularity.
double avg_path_loss(const Vec3& device, const Vec3& uav, const Environment& env);

double avg_gain(const Vec3& device, const Vec3& uav, const Environment& env);

LinkBudget link_budget(const Vec3& device, const Vec3& uav, const Environment& env);

/// Uplink SINR of `device` given the full deployment state. Interference is
/// accumulated over `interferers` at the serving UAV using average gains.
double sinr(std::size_t device,
            const std::vector<Vec3>& devices,
            const std::vector<Vec3>& uavs,
            const std::vector<int>& assoc,
            const std::vector<double>& power_w,
            const std::vector<std::size_t>& interferers,
            const Environment& env);

}  // namespace uavnet
