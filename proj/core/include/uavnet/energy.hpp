#pragma once

#include <cstddef>
#include <vector>

#include "uavnet/geometry.hpp"

namespace uavnet {

/// Rotary-wing airframe constants. Drag coefficient and reference area are
/// not part of the standard parameter set and ship as configurable defaults.
struct AirframeParams {
    double speed_mps = 10.0;      // cruise speed v
    double air_density = 1.225;   // rho, kg/m^3
    double drag_coeff = 0.05;     // C_Do (configured default, see README)
    double ref_area_m2 = 0.1;     // A_e (configured default, see README)
    double n_blades = 4.0;        // N_b
    double blade_chord_m = 0.1;   // c_b
    double rotor_rad_s = 20.0;    // rotor angular velocity
    double rotor_radius_m = 0.5;  // rotor disk radius
    double weight_n = 50.0;       // W

    void validate() const;
    /// Squared windmill-state descent threshold 2W/(rho*pi*R^2).
    double windmill_vv2() const;
};

/// Parasitic power at horizontal speed v_h: airframe drag plus blade profile.
double parasitic_power(double v_h, const AirframeParams& p);

/// Induced inflow ratio: unique positive root of the rotor momentum balance.
double induced_inflow(double v_h, const AirframeParams& p);

/// Induced power omega * R * W * lambda(v_h).
double induced_power(double v_h, const AirframeParams& p);

struct VerticalPower {
    bool in_model = false;  // false: descent below the windmill state
    double watts = 0.0;
};

/// Climb/descent power. v_v > 0 climbs; v_v < 0 descends (magnitude is the
/// descent rate). Descent below the windmill threshold is out of model.
VerticalPower vertical_power(double v_v, const AirframeParams& p);

struct LegEnergy {
    double joules = 0.0;
    bool windmill_fallback = false;  // descent priced with the climb formula
};

/// Energy of a straight constant-speed leg between two stop locations.
LegEnergy leg_energy(const Vec3& from, const Vec3& to, const AirframeParams& p);

/// Minimum-total-energy assignment of UAVs to destination stops under
/// per-UAV remaining budgets.
struct RelocationPlan {
    bool feasible = false;
    std::vector<std::size_t> dest_of_uav;   // bijection when feasible
    std::vector<double> leg_energy_j;       // per UAV
    std::vector<double> remaining_j;        // budget after the move
    std::vector<std::size_t> binding_uavs;  // UAVs with no affordable leg
    std::vector<char> fallback_leg;         // windmill fallback used on the leg
    std::vector<char> reached;              // UAV could afford its assigned leg
};

RelocationPlan plan_relocation(const std::vector<Vec3>& from_locs,
                               const std::vector<Vec3>& to_locs,
                               const std::vector<double>& remaining_j,
                               const AirframeParams& p);

}  // namespace uavnet
