#include <cmath>

#include "doctest.h"
#include "uavnet/assoc_power.hpp"
#include "uavnet/rng.hpp"

using namespace uavnet;

namespace {

ChannelMap trivial_map(std::size_t n, int channels) {
    ChannelMap map;
    map.n_channels = channels;
    map.n_clusters = 1;
    map.cluster_of.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) map.channel_of.push_back(static_cast<int>(i));
    return map;
}

}  // namespace

TEST_CASE("altitude bounds") {
    Environment env;
    const double gamma = std::pow(10.0, 0.5);
    const double p_max = 0.2;

    SUBCASE("upper bound matches the closed form") {
        const long double ko = 4.0L * 3.14159265358979323846264338327950288L * 2.0e9L /
                               299792458.0L;
        const long double oracle =
            sqrtl(0.2L / (powl(10.0L, 0.5L) * ko * ko * 1e-16L * powl(10.0L, 0.3L)));
        CHECK(altitude_upper_bound(env, gamma, p_max) ==
              doctest::Approx(static_cast<double>(oracle)).epsilon(1e-12));
        const AltitudeBand band = altitude_bounds({0, 0, 0}, 100.0, 0.0, env, gamma, p_max);
        CHECK(band.h_max_m == doctest::Approx(static_cast<double>(oracle)).epsilon(1e-12));
    }

    SUBCASE("zero ground offset needs no minimum altitude") {
        const AltitudeBand band = altitude_bounds({0, 0, 0}, 0.0, 0.0, env, gamma, p_max);
        CHECK(band.feasible);
        CHECK(band.h_min_m == doctest::Approx(0.0));
    }

    SUBCASE("upper bound shrinks with the SINR target") {
        double prev = altitude_upper_bound(env, gamma, p_max);
        for (double g = 10.0; g < 1e6; g *= 10.0) {
            const double h = altitude_upper_bound(env, g, p_max);
            CHECK(h < prev);
            prev = h;
        }
    }

    SUBCASE("minimum altitude grows with ground distance") {
        // Tight power budget so the LoS requirement binds.
        const double tight = 4e-6;
        double prev = -1.0;
        for (double r = 50.0; r <= 200.0; r += 50.0) {
            const AltitudeBand band = altitude_bounds({0, 0, 0}, r, 0.0, env, gamma, tight);
            REQUIRE(band.feasible);
            CHECK(band.h_min_m >= prev);
            prev = band.h_min_m;
        }
        CHECK(prev > 0.0);
    }
}

TEST_CASE("joint power control and association") {
    Environment env;
    const double gamma = std::pow(10.0, 0.5);
    const double p_max = 0.2;

    SUBCASE("single device reaches the closed-form power") {
        const std::vector<Vec3> uavs = {{0, 0, 150}};
        const std::vector<Vec3> devices = {{40, -30, 0}};
        const auto sol = joint_power_association(uavs, devices, trivial_map(1, 4), env, gamma,
                                                 p_max);
        CHECK(sol.converged);
        CHECK(sol.served[0] == 1);
        CHECK(sol.assoc[0] == 0);
        const double expected = gamma * env.noise_w * avg_path_loss(devices[0], uavs[0], env);
        CHECK(sol.power_w[0] == doctest::Approx(expected).epsilon(1e-9));
    }

    SUBCASE("symmetric co-channel pair matches a scalar fixed point") {
        const std::vector<Vec3> uavs = {{-200, 0, 150}, {200, 0, 150}};
        const std::vector<Vec3> devices = {{-250, 0, 0}, {250, 0, 0}};
        ChannelMap map;
        map.n_channels = 1;
        map.n_clusters = 2;
        map.cluster_of = {0, 1};
        map.channel_of = {0, 0};

        const auto sol = joint_power_association(uavs, devices, map, env, gamma, p_max);
        REQUIRE(sol.converged);
        CHECK(sol.assoc[0] == 0);
        CHECK(sol.assoc[1] == 1);
        CHECK(sol.power_w[0] == doctest::Approx(sol.power_w[1]).epsilon(1e-9));

        // Independent scalar iteration on the same two-variable map.
        const double g00 = avg_gain(devices[0], uavs[0], env);
        const double g10 = avg_gain(devices[1], uavs[0], env);
        double p0 = p_max, p1 = p_max;
        for (int it = 0; it < 100000; ++it) {
            const double n0 = std::min(gamma * (env.noise_w + p1 * g10) / g00, p_max);
            const double n1 = std::min(gamma * (env.noise_w + p0 * g10) / g00, p_max);
            if (std::fabs(n0 - p0) < 1e-18 && std::fabs(n1 - p1) < 1e-18) break;
            p0 = n0;
            p1 = n1;
        }
        CHECK(sol.power_w[0] == doctest::Approx(p0).epsilon(1e-10));
    }

    SUBCASE("devices beyond the cap are pinned and flagged") {
        const std::vector<Vec3> uavs = {{0, 0, 150}};
        const std::vector<Vec3> devices = {{5000, 5000, 0}};
        const double tiny_cap = 1e-9;
        const auto sol =
            joint_power_association(uavs, devices, trivial_map(1, 4), env, gamma, tiny_cap);
        CHECK(sol.served[0] == 0);
        CHECK(sol.power_w[0] == doctest::Approx(tiny_cap));
    }

    SUBCASE("served devices sit exactly on the SINR target") {
        std::mt19937_64 gen(3);
        std::vector<Vec3> devices;
        for (int i = 0; i < 24; ++i) {
            devices.push_back({uniform_range(gen, 0, 800), uniform_range(gen, 0, 800), 0});
        }
        const std::vector<Vec3> uavs = {{200, 200, 150}, {600, 600, 150}, {200, 600, 150}};
        const auto map = assign_channels(devices, 6, 1);
        const auto sol = joint_power_association(uavs, devices, map, env, gamma, p_max);
        REQUIRE(sol.converged);
        for (std::size_t i = 0; i < devices.size(); ++i) {
            if (!sol.served[i]) continue;
            const double s = sinr(i, devices, uavs, sol.assoc, sol.power_w,
                                  interference_set(i, map), env);
            CHECK(std::fabs(s - gamma) / gamma < 1e-6);
        }

        // Fixed-point idempotence: re-solving from the solution moves nothing.
        const auto again = joint_power_association(uavs, devices, map, env, gamma, p_max,
                                                   &sol.power_w);
        CHECK(again.assoc == sol.assoc);
        for (std::size_t i = 0; i < devices.size(); ++i) {
            CHECK(std::fabs(again.power_w[i] - sol.power_w[i]) < 1e-9);
        }
    }
}

TEST_CASE("interference-free assignment") {
    Environment env;
    const double gamma = std::pow(10.0, 0.5);
    const double p_max = 0.2;

    SUBCASE("one device picks the lower-loss UAV") {
        const std::vector<Vec3> uavs = {{0, 0, 150}, {500, 0, 150}};
        const std::vector<Vec3> devices = {{450, 0, 0}};
        const auto r = interference_free_assignment(uavs, devices, env, gamma, p_max);
        CHECK(r.feasible);
        CHECK(r.solution.assoc[0] == 1);
    }

    SUBCASE("separated pairs match the permutation brute force") {
        std::mt19937_64 gen(8);
        for (int rep = 0; rep < 10; ++rep) {
            const std::size_t k = 2 + gen() % 4;  // up to 6 per the factorial oracle
            std::vector<Vec3> uavs, devices;
            for (std::size_t j = 0; j < k; ++j) {
                const double cx = 1000.0 * static_cast<double>(j);
                uavs.push_back({cx + uniform_range(gen, -50, 50),
                                uniform_range(gen, -50, 50), 150.0});
                devices.push_back({cx + uniform_range(gen, -50, 50),
                                   uniform_range(gen, -50, 50), 0.0});
            }
            const auto r = interference_free_assignment(uavs, devices, env, gamma, p_max);
            REQUIRE(r.feasible);
            for (std::size_t i = 0; i < k; ++i) {
                CHECK(r.solution.assoc[i] == static_cast<int>(i));  // nearest pairing
            }
        }
    }

    SUBCASE("links beyond the cap are unservable") {
        const std::vector<Vec3> uavs = {{0, 0, 150}};
        const std::vector<Vec3> devices = {{100, 0, 0}, {200, 0, 0}};
        const auto r = interference_free_assignment(uavs, devices, env, gamma, 1e-12);
        CHECK(!r.feasible);
        CHECK(r.unservable.size() == 2);
        CHECK(r.solution.served[0] == 0);
    }

    SUBCASE("matching equals the per-device feasible argmin on both routes") {
        // Below the size threshold the op runs the slot matching, above it
        // the equivalent argmin scan; both must coincide with the oracle.
        std::mt19937_64 gen(55);
        for (std::size_t n_dev : {12ULL, 60ULL}) {  // 12*3=36 slots vs 60*3=180
            std::vector<Vec3> devices;
            for (std::size_t i = 0; i < n_dev; ++i) {
                devices.push_back({uniform_range(gen, 0, 900), uniform_range(gen, 0, 900), 0});
            }
            const std::vector<Vec3> uavs = {{200, 200, 150}, {700, 200, 250}, {450, 700, 180}};
            const auto r = interference_free_assignment(uavs, devices, env, gamma, p_max);
            REQUIRE(r.feasible);
            for (std::size_t i = 0; i < n_dev; ++i) {
                std::size_t arg = 0;
                double best = avg_path_loss(devices[i], uavs[0], env);
                for (std::size_t j = 1; j < uavs.size(); ++j) {
                    const double c = avg_path_loss(devices[i], uavs[j], env);
                    if (c < best) {
                        best = c;
                        arg = j;
                    }
                }
                CHECK(r.solution.assoc[i] == static_cast<int>(arg));
                CHECK(r.solution.power_w[i] ==
                      doctest::Approx(gamma * env.noise_w * best).epsilon(1e-12));
            }
        }
    }

    SUBCASE("agrees with the iterative solver when both apply") {
        std::mt19937_64 gen(21);
        std::vector<Vec3> devices;
        for (int i = 0; i < 10; ++i) {
            devices.push_back({uniform_range(gen, 0, 900), uniform_range(gen, 0, 900), 0});
        }
        const std::vector<Vec3> uavs = {{250, 250, 180}, {700, 650, 180}};
        const auto map = assign_channels(devices, 16, 1);  // 10 <= 16: no interference
        const auto direct = interference_free_assignment(uavs, devices, env, gamma, 0.2);
        const auto iterative = joint_power_association(uavs, devices, map, env, gamma, 0.2);
        REQUIRE(direct.feasible);
        for (std::size_t i = 0; i < devices.size(); ++i) {
            CHECK(direct.solution.power_w[i] ==
                  doctest::Approx(iterative.power_w[i]).epsilon(1e-9));
        }
        CHECK(direct.solution.total_power_w() ==
              doctest::Approx(iterative.total_power_w()).epsilon(1e-9));
    }
}
