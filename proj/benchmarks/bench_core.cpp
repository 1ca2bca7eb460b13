#include <benchmark/benchmark.h>

#include <numeric>
#include <random>
#include <vector>

#include "uavnet/assignment.hpp"
#include "uavnet/assoc_power.hpp"
#include "uavnet/channel.hpp"
#include "uavnet/orchestrator.hpp"
#include "uavnet/placement.hpp"
#include "uavnet/rng.hpp"
#include "uavnet/spectrum.hpp"

namespace {

using namespace uavnet;

void bm_avg_path_loss(benchmark::State& state) {
    Environment env;
    const Vec3 device{120.0, -40.0, 0.0};
    const Vec3 uav{300.0, 150.0, 220.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(avg_path_loss(device, uav, env));
    }
}
BENCHMARK(bm_avg_path_loss);

void bm_hungarian(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 gen(5);
    CostMatrix costs(n);
    for (std::size_t i = 0; i < n * n; ++i) {
        costs.cost[i] = uniform_range(gen, 0.0, 100.0);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(hungarian(costs));
    }
}
BENCHMARK(bm_hungarian)->Arg(8)->Arg(32)->Arg(128);

void bm_power_control(benchmark::State& state) {
    const std::size_t n_dev = static_cast<std::size_t>(state.range(0));
    Environment env;
    const double gamma = 3.1622776601683795;
    const auto devices = scatter_devices(n_dev, 1000.0, 1000.0, 7);
    const auto uavs = initial_grid(5, 1000.0, 1000.0, 250.0);
    const auto map = assign_channels(devices, 20, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            joint_power_association(uavs, devices, map, env, gamma, 0.2));
    }
}
BENCHMARK(bm_power_control)->Arg(50)->Arg(100)->Arg(200);

void bm_qcqp_place(benchmark::State& state) {
    Environment env;
    const double gamma = 3.1622776601683795;
    std::mt19937_64 gen(9);
    std::vector<Vec3> members;
    std::vector<double> caps;
    for (int i = 0; i < 20; ++i) {
        members.push_back({uniform_range(gen, -250, 250), uniform_range(gen, -250, 250), 0});
        caps.push_back(required_power(uniform_range(gen, 320, 500), 180.0, env, gamma));
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(qcqp_dual_place(members, caps, 180.0, env, gamma));
    }
}
BENCHMARK(bm_qcqp_place);

void bm_snapshot(benchmark::State& state) {
    Scenario s;
    s.n_uavs = 5;
    s.n_channels = 20;
    s.devices = scatter_devices(100, 1000.0, 1000.0, 11);
    std::vector<std::size_t> active(100);
    std::iota(active.begin(), active.end(), std::size_t{0});
    const auto grid = initial_grid(5, 1000.0, 1000.0, initial_altitude(s));
    for (auto _ : state) {
        benchmark::DoNotOptimize(optimize_snapshot(s, active, grid));
    }
}
BENCHMARK(bm_snapshot);

}  // namespace

BENCHMARK_MAIN();
