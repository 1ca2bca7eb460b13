#pragma once

#include <cstddef>
#include <vector>

namespace uavnet {

/// Dense square cost matrix for minimum-cost perfect matching. Entries set to
/// kInfeasible mark forbidden pairings; they are never selected unless the
/// problem admits no sentinel-free perfect matching.
struct CostMatrix {
    static constexpr double kInfeasible = 1e30;

    std::size_t n = 0;
    std::vector<double> cost;  // row-major n*n

    explicit CostMatrix(std::size_t size)
        : n(size), cost(size * size, 0.0) {}

    double& at(std::size_t row, std::size_t col) { return cost[row * n + col]; }
    double at(std::size_t row, std::size_t col) const { return cost[row * n + col]; }
};

struct AssignmentResult {
    bool feasible = false;
    std::vector<std::size_t> col_of_row;  // matched column per row
    double total_cost = 0.0;
    std::vector<std::size_t> infeasible_rows;  // rows forced onto sentinels
};

/// O(n^3) Hungarian method. The matching always exists (matrix is square);
/// feasibility means no matched edge carries the sentinel cost.
AssignmentResult hungarian(const CostMatrix& costs);

}  // namespace uavnet
