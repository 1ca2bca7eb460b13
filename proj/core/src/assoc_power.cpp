#include "uavnet/assoc_power.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "uavnet/assignment.hpp"

namespace uavnet {

double PowerSolution::total_power_w() const {
    double total = 0.0;
    for (std::size_t i = 0; i < power_w.size(); ++i) {
        if (served[i]) total += power_w[i];
    }
    return total;
}

std::size_t PowerSolution::n_served() const {
    std::size_t n = 0;
    for (char s : served) n += (s != 0);
    return n;
}

double altitude_upper_bound(const Environment& env, double gamma, double p_max_w) {
    const double alpha = env.pathloss_exp;
    return std::pow(p_max_w / (gamma * std::pow(env.k_o(), alpha) * env.noise_w * env.eta_los),
                    1.0 / alpha);
}

namespace {

// LoS-probability threshold a link at 3D distance d must clear to be
// servable at the power cap.
double required_p_los(double d, const Environment& env, double gamma, double p_max_w) {
    const double alpha = env.pathloss_exp;
    const double denom = gamma * std::pow(d, alpha) * std::pow(env.k_o(), alpha) * env.noise_w *
                         (env.eta_los - env.eta_nlos);
    return p_max_w / denom - env.eta_nlos / (env.eta_los - env.eta_nlos);
}

bool servable_at(double h, double ground_r, const Environment& env, double gamma,
                 double p_max_w) {
    const double d = std::sqrt(ground_r * ground_r + h * h);
    const double q = required_p_los(std::max(d, 1.0), env, gamma, p_max_w);
    if (q <= 0.0) return true;
    if (q >= 1.0) return false;
    const double theta = rad_to_deg(std::asin(h / std::max(d, 1e-12)));
    return los_probability(theta, env) >= q;
}

}  // namespace

AltitudeBand altitude_bounds(const Vec3& device, double uav_x, double uav_y,
                             const Environment& env, double gamma, double p_max_w) {
    if (!(gamma > 0.0) || !(p_max_w > 0.0)) {
        throw std::invalid_argument("altitude_bounds: gamma and p_max must be positive");
    }
    AltitudeBand band;
    band.h_max_m = altitude_upper_bound(env, gamma, p_max_w);

    const double r = std::hypot(device.x - uav_x, device.y - uav_y);

    // The defining condition is monotone-increasing in distance on both
    // sides, so scan for the first feasible altitude and refine by bisection.
    constexpr int kScan = 512;
    double lo = -1.0;
    double prev_h = 0.0;
    bool prev_ok = servable_at(0.0, r, env, gamma, p_max_w);
    if (prev_ok) {
        band.feasible = true;
        band.h_min_m = 0.0;
        return band;
    }
    for (int s = 1; s <= kScan; ++s) {
        const double h = band.h_max_m * static_cast<double>(s) / kScan;
        const bool ok = servable_at(h, r, env, gamma, p_max_w);
        if (ok && !prev_ok) {
            lo = prev_h;
            double hi = h;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (servable_at(mid, r, env, gamma, p_max_w)) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            band.feasible = true;
            band.h_min_m = hi;
            return band;
        }
        prev_ok = ok;
        prev_h = h;
    }
    return band;  // empty range: no altitude serves this link at the cap
}

PowerSolution joint_power_association(const std::vector<Vec3>& uavs,
                                      const std::vector<Vec3>& devices,
                                      const ChannelMap& map,
                                      const Environment& env,
                                      double gamma,
                                      double p_max_w,
                                      const std::vector<double>* initial_power) {
    if (uavs.empty()) {
        throw std::invalid_argument("joint_power_association: no UAVs");
    }
    const std::size_t n_dev = devices.size();
    const std::size_t n_uav = uavs.size();

    PowerSolution sol;
    sol.assoc.assign(n_dev, -1);
    sol.power_w.assign(n_dev, p_max_w);
    sol.served.assign(n_dev, 0);
    if (n_dev == 0) {
        sol.converged = true;
        return sol;
    }
    if (initial_power != nullptr) {
        sol.power_w = *initial_power;
    }

    // Gains are static for fixed geometry: precompute the device x UAV table.
    std::vector<double> gain(n_dev * n_uav);
    for (std::size_t i = 0; i < n_dev; ++i) {
        for (std::size_t j = 0; j < n_uav; ++j) {
            gain[i * n_uav + j] = avg_gain(devices[i], uavs[j], env);
        }
    }
    std::vector<std::vector<std::size_t>> interferers(n_dev);
    for (std::size_t i = 0; i < n_dev; ++i) {
        interferers[i] = interference_set(i, map);
    }

    // Absolute cap-scaled test plus a relative one: low-power devices must
    // also settle, or their SINR would miss the target at its tolerance.
    constexpr int kMaxIter = 10000;
    const double tol = 1e-9 * p_max_w;
    std::vector<double> next(n_dev);
    for (int iter = 1; iter <= kMaxIter; ++iter) {
        double max_delta = 0.0;
        double max_rel = 0.0;
        for (std::size_t i = 0; i < n_dev; ++i) {
            double best = std::numeric_limits<double>::infinity();
            int best_j = -1;
            for (std::size_t j = 0; j < n_uav; ++j) {
                double interference = 0.0;
                for (std::size_t k : interferers[i]) {
                    interference += sol.power_w[k] * gain[k * n_uav + j];
                }
                const double rho = (env.noise_w + interference) / gain[i * n_uav + j];
                if (rho < best) {  // strict: ties keep the lowest UAV index
                    best = rho;
                    best_j = static_cast<int>(j);
                }
            }
            sol.assoc[i] = best_j;
            next[i] = std::min(gamma * best, p_max_w);
            const double delta = std::fabs(next[i] - sol.power_w[i]);
            max_delta = std::max(max_delta, delta);
            max_rel = std::max(max_rel, delta / std::max(next[i], 1e-300));
        }
        sol.power_w = next;
        sol.iterations = iter;
        if (max_delta < tol && max_rel < 1e-8) {
            sol.converged = true;
            break;
        }
    }

    for (std::size_t i = 0; i < n_dev; ++i) {
        const std::size_t j = static_cast<std::size_t>(sol.assoc[i]);
        double interference = 0.0;
        for (std::size_t k : interferers[i]) {
            interference += sol.power_w[k] * gain[k * n_uav + j];
        }
        const double s = sol.power_w[i] * gain[i * n_uav + j] / (interference + env.noise_w);
        sol.served[i] = (s >= gamma * (1.0 - 1e-6)) ? 1 : 0;
    }
    return sol;
}

InterferenceFreeResult interference_free_assignment(const std::vector<Vec3>& uavs,
                                                    const std::vector<Vec3>& devices,
                                                    const Environment& env,
                                                    double gamma,
                                                    double p_max_w) {
    const std::size_t n_dev = devices.size();
    const std::size_t n_uav = uavs.size();
    InterferenceFreeResult result;
    result.solution.assoc.assign(n_dev, -1);
    result.solution.power_w.assign(n_dev, 0.0);
    result.solution.served.assign(n_dev, 0);
    result.solution.converged = true;
    if (n_dev == 0) {
        result.feasible = true;
        return result;
    }

    std::vector<double> loss(n_dev * n_uav);
    for (std::size_t i = 0; i < n_dev; ++i) {
        for (std::size_t j = 0; j < n_uav; ++j) {
            loss[i * n_uav + j] = avg_path_loss(devices[i], uavs[j], env);
        }
    }
    const double cap = p_max_w / (gamma * env.noise_w);

    // Each UAV contributes one column slot per device, so sharing a UAV stays
    // legal; dummy rows pad the matrix square and links over the cap get the
    // sentinel. Because a UAV's slots are identical columns and every UAV has
    // a slot per device, the matching optimum equals the per-device feasible
    // argmin; large instances take that route directly.
    const std::size_t n = n_dev * n_uav;
    std::vector<std::size_t> pick(n_dev);
    std::vector<char> pick_feasible(n_dev, 0);
    if (n <= 150) {
        CostMatrix costs(n);
        for (std::size_t i = 0; i < n_dev; ++i) {
            for (std::size_t j = 0; j < n_uav; ++j) {
                const double c = (loss[i * n_uav + j] <= cap) ? loss[i * n_uav + j]
                                                              : CostMatrix::kInfeasible;
                for (std::size_t s = 0; s < n_dev; ++s) {
                    costs.at(i, j * n_dev + s) = c;
                }
            }
        }
        const AssignmentResult matching = hungarian(costs);
        for (std::size_t i = 0; i < n_dev; ++i) {
            pick[i] = matching.col_of_row[i] / n_dev;
            pick_feasible[i] = costs.at(i, matching.col_of_row[i]) < CostMatrix::kInfeasible;
        }
    } else {
        for (std::size_t i = 0; i < n_dev; ++i) {
            std::size_t arg = n_uav;
            for (std::size_t j = 0; j < n_uav; ++j) {
                if (loss[i * n_uav + j] > cap) continue;
                if (arg == n_uav || loss[i * n_uav + j] < loss[i * n_uav + arg]) arg = j;
            }
            pick_feasible[i] = arg < n_uav;
            pick[i] = pick_feasible[i] ? arg : 0;
        }
    }

    result.feasible = true;
    for (std::size_t i = 0; i < n_dev; ++i) {
        if (!pick_feasible[i]) {
            // Unservable anywhere; keep the least-loss UAV as data.
            std::size_t arg = 0;
            for (std::size_t jj = 1; jj < n_uav; ++jj) {
                if (loss[i * n_uav + jj] < loss[i * n_uav + arg]) arg = jj;
            }
            result.solution.assoc[i] = static_cast<int>(arg);
            result.solution.power_w[i] = p_max_w;
            result.solution.served[i] = 0;
            result.feasible = false;
            result.unservable.push_back(i);
        } else {
            result.solution.assoc[i] = static_cast<int>(pick[i]);
            result.solution.power_w[i] = gamma * env.noise_w * loss[i * n_uav + pick[i]];
            result.solution.served[i] = 1;
        }
    }
    return result;
}

}  // namespace uavnet
