#include "uavnet/spectrum.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "uavnet/rng.hpp"

namespace uavnet {

namespace {

struct ClusterRun {
    std::vector<int> cluster_of;
    double variance = std::numeric_limits<double>::infinity();
};

double sq_dist(const Vec3& a, const Vec3& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

// One size-capped k-means run. Assignment happens in a greedy pass ordered by
// each point's margin between its best and second-best centroid, so the
// points that care most about their placement claim capacity first.
ClusterRun run_once(const std::vector<Vec3>& pts, int n_clusters, int cap,
                    std::uint64_t seed) {
    const std::size_t n = pts.size();
    std::mt19937_64 gen(seed);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = n; i > 1; --i) {
        std::swap(order[i - 1], order[gen() % i]);
    }
    std::vector<Vec3> centroids;
    centroids.reserve(static_cast<std::size_t>(n_clusters));
    for (int c = 0; c < n_clusters; ++c) {
        centroids.push_back(pts[order[static_cast<std::size_t>(c) % n]]);
    }

    ClusterRun run;
    run.cluster_of.assign(n, -1);
    std::vector<int> sizes(static_cast<std::size_t>(n_clusters), 0);

    for (int iter = 0; iter < 100; ++iter) {
        // Margin-ordered greedy assignment under the size cap.
        struct Entry {
            std::size_t point;
            double margin;
        };
        std::vector<Entry> entries;
        entries.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            double second = std::numeric_limits<double>::infinity();
            for (const Vec3& c : centroids) {
                const double d = sq_dist(pts[i], c);
                if (d < best) {
                    second = best;
                    best = d;
                } else if (d < second) {
                    second = d;
                }
            }
            entries.push_back({i, second - best});
        }
        std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
            return a.margin > b.margin;
        });

        std::vector<int> next(n, -1);
        std::fill(sizes.begin(), sizes.end(), 0);
        for (const Entry& e : entries) {
            int pick = -1;
            double pick_d = std::numeric_limits<double>::infinity();
            for (int c = 0; c < n_clusters; ++c) {
                if (sizes[static_cast<std::size_t>(c)] >= cap) continue;
                const double d = sq_dist(pts[e.point], centroids[static_cast<std::size_t>(c)]);
                if (d < pick_d) {
                    pick_d = d;
                    pick = c;
                }
            }
            next[e.point] = pick;
            ++sizes[static_cast<std::size_t>(pick)];
        }

        const bool unchanged = (next == run.cluster_of);
        run.cluster_of = std::move(next);
        if (unchanged) break;

        std::vector<Vec3> sums(static_cast<std::size_t>(n_clusters));
        std::vector<int> counts(static_cast<std::size_t>(n_clusters), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(run.cluster_of[i]);
            sums[c].x += pts[i].x;
            sums[c].y += pts[i].y;
            ++counts[c];
        }
        for (int c = 0; c < n_clusters; ++c) {
            const auto ci = static_cast<std::size_t>(c);
            if (counts[ci] > 0) {
                centroids[ci].x = sums[ci].x / counts[ci];
                centroids[ci].y = sums[ci].y / counts[ci];
            }
        }
    }

    std::vector<Vec3> sums(static_cast<std::size_t>(n_clusters));
    std::vector<int> counts(static_cast<std::size_t>(n_clusters), 0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = static_cast<std::size_t>(run.cluster_of[i]);
        sums[c].x += pts[i].x;
        sums[c].y += pts[i].y;
        ++counts[c];
    }
    run.variance = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = static_cast<std::size_t>(run.cluster_of[i]);
        Vec3 mean{sums[c].x / counts[c], sums[c].y / counts[c], 0.0};
        run.variance += sq_dist(pts[i], mean);
    }
    return run;
}

}  // namespace

ChannelMap assign_channels(const std::vector<Vec3>& positions, int n_channels,
                           std::uint64_t seed) {
    if (n_channels < 1) {
        throw std::invalid_argument("assign_channels: need at least one channel");
    }
    const std::size_t n = positions.size();
    if (n == 0) {
        throw std::invalid_argument("assign_channels: no devices");
    }

    const int n_clusters =
        static_cast<int>((n + static_cast<std::size_t>(n_channels) - 1) /
                         static_cast<std::size_t>(n_channels));

    ClusterRun best;
    constexpr int kRestarts = 10;
    for (int r = 0; r < kRestarts; ++r) {
        ClusterRun run = run_once(positions, n_clusters, n_channels, derive_seed(seed, static_cast<std::uint64_t>(r)));
        if (run.variance < best.variance) {
            best = std::move(run);
        }
    }

    ChannelMap map;
    map.n_channels = n_channels;
    map.n_clusters = n_clusters;
    map.cluster_of = best.cluster_of;
    map.channel_of.assign(n, -1);
    // Distinct channels inside each cluster, handed out in device-index order.
    std::vector<int> next_channel(static_cast<std::size_t>(n_clusters), 0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = static_cast<std::size_t>(map.cluster_of[i]);
        map.channel_of[i] = next_channel[c]++;
    }
    return map;
}

std::vector<std::size_t> interference_set(std::size_t device, const ChannelMap& map) {
    if (device >= map.channel_of.size() || map.channel_of[device] < 0) {
        throw std::invalid_argument("interference_set: device not mapped");
    }
    std::vector<std::size_t> out;
    const int ch = map.channel_of[device];
    for (std::size_t j = 0; j < map.channel_of.size(); ++j) {
        if (j != device && map.channel_of[j] == ch) {
            out.push_back(j);
        }
    }
    return out;
}

}  // namespace uavnet
