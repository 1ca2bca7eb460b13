#include "uavnet/report.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>

namespace uavnet {

const char* const kMetricsHeader =
    "run,variant,t_s,total_power_w,n_active,n_served,served_all,uav_energy_j,outer_iterations";
const char* const kSweepHeader =
    "axis,value,run,variant,t_s,total_power_w,n_active,n_served,served_all,uav_energy_j,"
    "outer_iterations,status";
const char* const kOracleHeader =
    "instance,n_devices,proposed_w,oracle_w,gap_rel,proposed_ms,oracle_ms";

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", value);
    return buf;
}

std::vector<MetricsRow> metrics_rows(int run, const std::string& variant,
                                     const HorizonRun& horizon) {
    std::vector<MetricsRow> rows;
    for (std::size_t n = 0; n < horizon.deployments.size(); ++n) {
        const Deployment& dep = horizon.deployments[n];
        MetricsRow row;
        row.run = run;
        row.variant = variant;
        row.t_s = dep.t_s;
        row.total_power_w = dep.total_power_w;
        row.n_active = dep.active.size();
        row.n_served = dep.solution.n_served();
        row.served_all = row.n_served == row.n_active;
        row.outer_iterations = dep.outer_iterations;
        std::ostringstream energy;
        if (n < horizon.relocations.size()) {
            const auto& leg = horizon.relocations[n].leg_energy_j;
            for (std::size_t u = 0; u < leg.size(); ++u) {
                if (u > 0) energy << ';';
                energy << format_double(leg[u]);
            }
        }
        row.uav_energy_j = energy.str();
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

void write_metrics_fields(std::ostream& out, const MetricsRow& r) {
    out << r.run << ',' << r.variant << ',' << format_double(r.t_s) << ','
        << format_double(r.total_power_w) << ',' << r.n_active << ',' << r.n_served << ','
        << (r.served_all ? 1 : 0) << ',' << r.uav_energy_j << ',' << r.outer_iterations;
}

}  // namespace

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
    out << kMetricsHeader << '\n';
    for (const MetricsRow& r : rows) {
        write_metrics_fields(out, r);
        out << '\n';
    }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << kSweepHeader << '\n';
    for (const SweepRow& r : rows) {
        out << r.axis << ',' << format_double(r.value) << ',';
        write_metrics_fields(out, r.metrics);
        out << ',' << r.status << '\n';
    }
}

void write_oracle_csv(std::ostream& out, const std::vector<OracleRow>& rows) {
    out << kOracleHeader << '\n';
    for (const OracleRow& r : rows) {
        out << r.instance << ',' << r.n_devices << ',' << format_double(r.proposed_w) << ','
            << format_double(r.oracle_w) << ',' << format_double(r.gap_rel) << ','
            << format_double(r.proposed_ms) << ',' << format_double(r.oracle_ms) << '\n';
    }
}

void write_deployment(std::ostream& out, const Deployment& dep) {
    out << "t_s = " << format_double(dep.t_s) << '\n';
    out << "n_uavs = " << dep.uav_locs.size() << '\n';
    out << "n_devices = " << dep.active.size() << '\n';
    for (std::size_t j = 0; j < dep.uav_locs.size(); ++j) {
        const Vec3& v = dep.uav_locs[j];
        out << "uav " << j << ": x_m=" << format_double(v.x) << " y_m=" << format_double(v.y)
            << " h_m=" << format_double(v.h) << '\n';
    }
    for (std::size_t k = 0; k < dep.active.size(); ++k) {
        out << "device " << dep.active[k] << ": assoc=" << dep.solution.assoc[k]
            << " power_w=" << format_double(dep.solution.power_w[k])
            << " served=" << (dep.solution.served[k] ? 1 : 0)
            << " channel=" << dep.channel_map.channel_of[k] << '\n';
    }
}

}  // namespace uavnet
