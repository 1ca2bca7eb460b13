#include "uavnet/assignment.hpp"

#include <limits>

namespace uavnet {

AssignmentResult hungarian(const CostMatrix& costs) {
    const std::size_t n = costs.n;
    AssignmentResult result;
    if (n == 0) {
        result.feasible = true;
        return result;
    }

    constexpr double kInf = std::numeric_limits<double>::infinity();
    // Potentials-based shortest augmenting path formulation, 1-indexed.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> match(n + 1, 0);  // row matched to column j
    std::vector<std::size_t> way(n + 1, 0);

    for (std::size_t i = 1; i <= n; ++i) {
        match[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = match[j0];
            double delta = kInf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = costs.at(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    result.col_of_row.assign(n, 0);
    result.total_cost = 0.0;
    result.feasible = true;
    for (std::size_t j = 1; j <= n; ++j) {
        const std::size_t row = match[j] - 1;
        result.col_of_row[row] = j - 1;
        const double c = costs.at(row, j - 1);
        result.total_cost += c;
        if (c >= CostMatrix::kInfeasible) {
            result.feasible = false;
            result.infeasible_rows.push_back(row);
        }
    }
    return result;
}

}  // namespace uavnet
