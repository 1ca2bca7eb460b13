#pragma once

#include <cstdint>
#include <vector>

#include "uavnet/geometry.hpp"

namespace uavnet {

/// Channel and cluster assignment over the currently active devices
/// (indices are positions in the active-device vector, not global ids).
struct ChannelMap {
    std::vector<int> channel_of;  // device -> channel id in [0, n_channels)
    std::vector<int> cluster_of;  // device -> cluster id
    int n_channels = 0;
    int n_clusters = 0;
};

/// Proximity clustering with a per-cluster size cap equal to the channel
/// count; devices inside one cluster receive pairwise-distinct channels.
/// Deterministic for a fixed seed.
ChannelMap assign_channels(const std::vector<Vec3>& positions, int n_channels,
                           std::uint64_t seed = 0);

/// All other devices sharing device i's channel.
std::vector<std::size_t> interference_set(std::size_t device, const ChannelMap& map);

}  // namespace uavnet
