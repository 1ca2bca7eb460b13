#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "uavnet/assoc_power.hpp"
#include "uavnet/channel.hpp"
#include "uavnet/geometry.hpp"
#include "uavnet/spectrum.hpp"

namespace uavnet {

/// Convex quadratic surrogate q(d) ~= alpha1*d^2 + alpha2 of the per-device
/// required power at a fixed altitude, fitted by least squares on a distance
/// grid. The worst relative residual over the grid is recorded.
struct QuadFit {
    double alpha1 = 0.0;  // W / m^2
    double alpha2 = 0.0;  // W
    double altitude_m = 0.0;
    double d_min_m = 0.0;
    double d_max_m = 0.0;
    double max_rel_err = 0.0;
};

/// Interference-free power a device at 3D distance d needs toward a UAV at
/// altitude h (d >= h).
double required_power(double d, double altitude_m, const Environment& env, double gamma);

QuadFit fit_quadratic(double altitude_m, const Environment& env, double gamma,
                      double d_min_m, double d_max_m, int n_samples = 200);

/// Largest 3D service distance at which the required power stays within the
/// cap; required_power is strictly increasing in d, so the radius is unique.
struct ServiceRadius {
    bool feasible = false;  // false when even the overhead link exceeds the cap
    double d_m = 0.0;
};
ServiceRadius service_radius(double altitude_m, const Environment& env, double gamma,
                             double cap_w);

enum class PlaceStatus { ok, infeasible, no_progress };

struct PlacementResult {
    PlaceStatus status = PlaceStatus::infeasible;
    Vec3 position;
    double objective_w = 0.0;
    std::vector<double> dual_vars;
    int iterations = 0;
};

/// Fixed-altitude 2D placement: minimize the summed squared distances to the
/// member devices subject to per-device service radii derived from their
/// power caps. Solved through the concave Lagrange dual, whose minimizer is a
/// multiplier-weighted centroid available in closed form.
/// caps_w[i] <= 0 disables the constraint for member i (it still attracts).
/// `warm_lambda` (optional, resized on return) seeds and returns the
/// multipliers for warm-started scans.
PlacementResult qcqp_dual_place(const std::vector<Vec3>& members,
                                const std::vector<double>& caps_w,
                                double altitude_m, const Environment& env, double gamma,
                                std::vector<double>* warm_lambda = nullptr);

struct AltitudeSearch {
    bool feasible = false;
    double h_star_m = 0.0;
    PlacementResult placement;
    QuadFit fit;
};

/// Grid search over candidate altitudes; each is scored by the quadratic
/// surrogate evaluated at the dual solution's offset from the member centroid.
AltitudeSearch optimal_altitude(const std::vector<Vec3>& members,
                                const std::vector<double>& caps_w,
                                const Environment& env, double gamma,
                                const std::vector<double>& h_grid_m,
                                double fit_radius_m);

struct SqpOptions {
    double h_lo_m = 1.0;
    double h_hi_m = 1.0e7;
    double max_step_m = 300.0;
    int max_iterations = 60;
    double kkt_tol = 1e-6;  // on the internally scaled problem
};

/// One UAV's placement subproblem in the interference case. `members` are the
/// devices currently associated here; each carries its co-channel interferer
/// geometry and powers (frozen during the solve) plus a power cap. Members
/// with cap <= 0 participate in the objective without a constraint.
struct SqpProblem {
    std::vector<Vec3> members;
    std::vector<double> caps_w;
    std::vector<std::vector<Vec3>> interferer_pos;  // per member
    std::vector<std::vector<double>> interferer_pw;
};

/// Sequential quadratic programming descent on the summed required powers,
/// keeping every constrained member at or below its cap. Returns the start
/// point with a no-progress status when no acceptable step exists.
PlacementResult sqp_place(const SqpProblem& problem, const Vec3& start,
                          const Environment& env, double gamma, const SqpOptions& opts);

struct PlaceAllOptions {
    double h_lo_m = 100.0;
    double h_hi_m = 400.0;
    int h_grid_points = 21;
    double fit_radius_m = 200.0;
    SqpOptions sqp;
};

/// Sweeps the UAVs in index order, relocating each and refreshing its
/// members' powers. `caps_w` carries the per-device power ceilings from the
/// previous alternation round (the global cap on the first); a move is
/// accepted only when every served member stays under its cap and the
/// members' recorded total does not rise. Returns the total over all devices
/// (unserved devices count at their pinned power).
double place_all(std::vector<Vec3>& uavs, const std::vector<Vec3>& devices,
                 const ChannelMap& map, PowerSolution& sol,
                 const std::vector<double>& caps_w, const Environment& env,
                 double gamma, double p_max_w, const PlaceAllOptions& opts);

namespace detail {
/// Per-member required-power values and gradients at UAV position v.
/// Exposed for the finite-difference checks in the test suite.
void objective_terms(const SqpProblem& problem, const Vec3& v, const Environment& env,
                     double gamma, std::vector<double>* values,
                     std::vector<std::array<double, 3>>* gradients);
}  // namespace detail

}  // namespace uavnet
