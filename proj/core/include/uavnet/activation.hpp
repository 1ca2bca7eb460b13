#pragma once

#include <cstdint>
#include <stdexcept>
#include <variant>
#include <vector>

namespace uavnet {

/// Regularized incomplete beta function I_x(kappa, omega).
double reg_inc_beta(double x, double kappa, double omega);

/// Inverse of I_x(kappa, omega): returns x with |I_x - p| <= 1e-10.
double inv_reg_inc_beta(double p, double kappa, double omega);

struct BetaActivation {
    double kappa = 3.0;
    double omega = 4.0;
};

struct PeriodicActivation {
    std::vector<double> periods_s;  // one activation period per device
};

struct ActivationModel {
    std::variant<BetaActivation, PeriodicActivation> variant = BetaActivation{};
    double horizon_s = 3600.0;
};

struct UpdateSchedule {
    std::vector<double> times_s;   // strictly increasing, last <= horizon
    std::vector<double> targets;   // expected (beta) or exact (periodic) counts
};

struct InfeasibleScheduleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Update instants t_n such that on average `targets[n]` of `n_devices`
/// beta-activated devices fall in each inter-update interval.
UpdateSchedule update_times(const std::vector<double>& targets,
                            std::size_t n_devices,
                            const BetaActivation& model,
                            double horizon_s);

/// Exact number of distinct devices with at least one periodic activation in
/// [t_{n-1}, t_n); the first interval starts at 0.
std::vector<std::size_t> exact_periodic_counts(const std::vector<double>& times_s,
                                               const std::vector<double>& periods_s);

/// Per-update sets of device indices that activate in [t_{n-1}, t_n).
/// Beta-activated devices draw a single activation instant; periodic devices
/// are enumerated deterministically. Fixed seed gives identical output.
std::vector<std::vector<std::size_t>> sample_active_sets(const ActivationModel& model,
                                                         const UpdateSchedule& schedule,
                                                         std::size_t n_devices,
                                                         std::uint64_t seed);

/// Cached quantile table for fast deterministic beta sampling.
class BetaSampler {
  public:
    BetaSampler(double kappa, double omega, std::size_t table_size = 8193);

    /// Quantile at p in [0,1] by linear interpolation of the cached table.
    double quantile(double p) const;

  private:
    std::vector<double> table_;
};

}  // namespace uavnet
