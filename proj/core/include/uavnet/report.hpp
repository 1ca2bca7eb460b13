#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "uavnet/orchestrator.hpp"

namespace uavnet {

/// One metrics line per (run, update time). `uav_energy_j` is the
/// semicolon-joined per-UAV leg energy of the step.
struct MetricsRow {
    int run = 0;
    std::string variant;  // proposed | stationary
    double t_s = 0.0;
    double total_power_w = 0.0;
    std::size_t n_active = 0;
    std::size_t n_served = 0;
    bool served_all = false;
    std::string uav_energy_j;
    int outer_iterations = 0;
};

extern const char* const kMetricsHeader;
extern const char* const kSweepHeader;
extern const char* const kOracleHeader;

std::vector<MetricsRow> metrics_rows(int run, const std::string& variant,
                                     const HorizonRun& horizon);

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows);

struct SweepRow {
    std::string axis;
    double value = 0.0;
    MetricsRow metrics;
    std::string status = "ok";  // or error:<message>
};

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

struct OracleRow {
    int instance = 0;
    std::size_t n_devices = 0;
    double proposed_w = 0.0;
    double oracle_w = 0.0;
    double gap_rel = 0.0;
    double proposed_ms = 0.0;
    double oracle_ms = 0.0;
};

void write_oracle_csv(std::ostream& out, const std::vector<OracleRow>& rows);

/// Structured-text dump of one deployment: per-UAV coordinates, per-device
/// association, power and channel.
void write_deployment(std::ostream& out, const Deployment& deployment);

std::string format_double(double value);

}  // namespace uavnet
