#include "uavnet/channel.hpp"

#include <cmath>

namespace uavnet {

namespace {
constexpr double kDistanceFloorM = 1.0;
}

void Environment::validate() const {
    if (!(eta_los > 1.0) || !(eta_nlos > eta_los)) {
        throw std::invalid_argument("Environment: need eta_nlos > eta_los > 1");
    }
    if (!(carrier_hz > 0.0) || !(lightspeed > 0.0)) {
        throw std::invalid_argument("Environment: carrier and lightspeed must be positive");
    }
    if (!(pathloss_exp >= 2.0)) {
        throw std::invalid_argument("Environment: path loss exponent must be >= 2");
    }
    if (!(noise_w > 0.0)) {
        throw std::invalid_argument("Environment: noise power must be positive");
    }
    if (!(psi > 0.0) || !(beta_env > 0.0)) {
        throw std::invalid_argument("Environment: logistic constants must be positive");
    }
}

double elevation_angle(const Vec3& device, const Vec3& uav) {
    const double d = distance(device, uav);
    if (d <= 0.0) {
        throw DegenerateGeometryError("elevation_angle: device and UAV co-located");
    }
    const double dh = uav.h - device.h;
    double ratio = dh / d;
    if (ratio > 1.0) ratio = 1.0;
    if (ratio < -1.0) ratio = -1.0;
    return rad_to_deg(std::asin(ratio));
}

double los_probability(double elevation_deg, const Environment& env) {
    return 1.0 / (1.0 + env.psi * std::exp(-env.beta_env * (elevation_deg - env.psi)));
}

double avg_path_loss(const Vec3& device, const Vec3& uav, const Environment& env) {
    const double theta = elevation_angle(device, uav);
    const double p_los = los_probability(theta, env);
    const double d = std::max(distance(device, uav), kDistanceFloorM);
    const double weight = p_los * env.eta_los + (1.0 - p_los) * env.eta_nlos;
    return weight * std::pow(env.k_o() * d, env.pathloss_exp);
}

double avg_gain(const Vec3& device, const Vec3& uav, const Environment& env) {
    return 1.0 / avg_path_loss(device, uav, env);
}

LinkBudget link_budget(const Vec3& device, const Vec3& uav, const Environment& env) {
    LinkBudget lb;
    lb.distance_m = distance(device, uav);
    lb.elevation_deg = elevation_angle(device, uav);
    lb.p_los = los_probability(lb.elevation_deg, env);
    lb.avg_pathloss = avg_path_loss(device, uav, env);
    lb.avg_gain = 1.0 / lb.avg_pathloss;
    return lb;
}

double sinr(std::size_t device,
            const std::vector<Vec3>& devices,
            const std::vector<Vec3>& uavs,
            const std::vector<int>& assoc,
            const std::vector<double>& power_w,
            const std::vector<std::size_t>& interferers,
            const Environment& env) {
    if (device >= devices.size() || assoc[device] < 0) {
        throw std::invalid_argument("sinr: device not associated");
    }
    const Vec3& serving = uavs[static_cast<std::size_t>(assoc[device])];
    double interference = 0.0;
    for (std::size_t k : interferers) {
        interference += power_w[k] * avg_gain(devices[k], serving, env);
    }
    const double desired = power_w[device] * avg_gain(devices[device], serving, env);
    return desired / (interference + env.noise_w);
}

}  // namespace uavnet
