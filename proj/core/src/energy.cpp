#include "uavnet/energy.hpp"

#include <cmath>
#include <stdexcept>

#include "uavnet/assignment.hpp"

namespace uavnet {

void AirframeParams::validate() const {
    const double fields[] = {speed_mps,    air_density,   drag_coeff,     ref_area_m2, n_blades,
                             blade_chord_m, rotor_rad_s,  rotor_radius_m, weight_n};
    for (double f : fields) {
        if (!(f > 0.0)) {
            throw std::invalid_argument("AirframeParams: all fields must be strictly positive");
        }
    }
    if (rotor_rad_s * rotor_radius_m < speed_mps) {
        throw std::invalid_argument("AirframeParams: rotor tip speed below cruise speed");
    }
}

double AirframeParams::windmill_vv2() const {
    return 2.0 * weight_n / (air_density * kPi * rotor_radius_m * rotor_radius_m);
}

double parasitic_power(double v_h, const AirframeParams& p) {
    if (v_h < 0.0) {
        throw std::invalid_argument("parasitic_power: v_h must be non-negative");
    }
    const double tip = p.rotor_rad_s * p.rotor_radius_m;
    const double r4 = std::pow(p.rotor_radius_m, 4.0);
    const double body = 0.5 * p.air_density * p.drag_coeff * p.ref_area_m2 * v_h * v_h * v_h;
    const double blade = (kPi / 4.0) * p.n_blades * p.blade_chord_m * p.air_density *
                         p.drag_coeff * std::pow(p.rotor_rad_s, 3.0) * r4 *
                         (1.0 + 3.0 * (v_h / tip) * (v_h / tip));
    return body + blade;
}

double induced_inflow(double v_h, const AirframeParams& p) {
    if (v_h < 0.0) {
        throw std::invalid_argument("induced_inflow: v_h must be non-negative");
    }
    const double r4 = std::pow(p.rotor_radius_m, 4.0);
    const double scale = 2.0 * p.air_density * kPi * p.rotor_rad_s * p.rotor_rad_s * r4;
    const double mu = v_h / (p.rotor_rad_s * p.rotor_radius_m);
    auto g = [&](double lambda) {
        return scale * lambda * std::sqrt(mu * mu + lambda * lambda) - p.weight_n;
    };
    // g is strictly increasing in lambda; the hover inflow bounds the root.
    double hi = std::sqrt(p.weight_n / scale);
    double lo = 0.0;
    const double tol = 1e-9 * p.weight_n;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double v = g(mid);
        if (std::fabs(v) <= tol) return mid;
        if (v > 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double induced_power(double v_h, const AirframeParams& p) {
    return p.rotor_rad_s * p.rotor_radius_m * p.weight_n * induced_inflow(v_h, p);
}

VerticalPower vertical_power(double v_v, const AirframeParams& p) {
    VerticalPower out;
    const double disk = p.windmill_vv2();
    if (v_v >= 0.0) {
        out.in_model = true;
        out.watts = 0.5 * p.weight_n * v_v + 0.5 * p.weight_n * std::sqrt(v_v * v_v + disk);
        return out;
    }
    const double mag = -v_v;
    if (mag * mag < disk * (1.0 - 1e-12)) {
        out.in_model = false;  // below the windmill state
        return out;
    }
    out.in_model = true;
    out.watts = 0.5 * p.weight_n * mag -
                0.5 * p.weight_n * std::sqrt(std::max(mag * mag - disk, 0.0));
    return out;
}

LegEnergy leg_energy(const Vec3& from, const Vec3& to, const AirframeParams& p) {
    LegEnergy leg;
    const double d = distance(from, to);
    if (d <= 0.0) return leg;

    const double dh = to.h - from.h;
    const double phi = std::asin(std::clamp(dh / d, -1.0, 1.0));
    const double v_v = p.speed_mps * std::sin(phi);
    const double v_h = p.speed_mps * std::cos(phi);

    const double p_h = parasitic_power(v_h, p) + induced_power(v_h, p);
    VerticalPower pv = vertical_power(v_v, p);
    if (!pv.in_model) {
        // Slow descent: price it like the equivalent climb (conservative).
        pv = vertical_power(-v_v, p);
        leg.windmill_fallback = true;
    }
    leg.joules = d / p.speed_mps * (pv.watts + p_h);
    return leg;
}

RelocationPlan plan_relocation(const std::vector<Vec3>& from_locs,
                               const std::vector<Vec3>& to_locs,
                               const std::vector<double>& remaining_j,
                               const AirframeParams& p) {
    if (from_locs.size() != to_locs.size() || from_locs.size() != remaining_j.size()) {
        throw std::invalid_argument("plan_relocation: size mismatch");
    }
    const std::size_t k = from_locs.size();
    RelocationPlan plan;
    plan.dest_of_uav.assign(k, 0);
    plan.leg_energy_j.assign(k, 0.0);
    plan.remaining_j = remaining_j;
    plan.fallback_leg.assign(k, 0);
    plan.reached.assign(k, 1);
    if (k == 0) {
        plan.feasible = true;
        return plan;
    }

    std::vector<LegEnergy> legs(k * k);
    CostMatrix costs(k);
    for (std::size_t u = 0; u < k; ++u) {
        bool any = false;
        for (std::size_t d = 0; d < k; ++d) {
            legs[u * k + d] = leg_energy(from_locs[u], to_locs[d], p);
            const double e = legs[u * k + d].joules;
            if (e <= remaining_j[u]) {
                costs.at(u, d) = e;
                any = true;
            } else {
                costs.at(u, d) = CostMatrix::kInfeasible;
            }
        }
        if (!any) plan.binding_uavs.push_back(u);
    }

    const AssignmentResult matching = hungarian(costs);
    plan.feasible = matching.feasible;
    for (std::size_t u = 0; u < k; ++u) {
        const std::size_t d = matching.col_of_row[u];
        plan.dest_of_uav[u] = d;
        if (costs.at(u, d) < CostMatrix::kInfeasible) {
            plan.leg_energy_j[u] = legs[u * k + d].joules;
            plan.fallback_leg[u] = legs[u * k + d].windmill_fallback ? 1 : 0;
            plan.remaining_j[u] = remaining_j[u] - plan.leg_energy_j[u];
        } else {
            plan.reached[u] = 0;  // stays put; no energy spent
        }
    }
    return plan;
}

}  // namespace uavnet
