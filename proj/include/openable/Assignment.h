// SPDX-License-Identifier: MIT
#pragma once

#include <vector>

#include <Eigen/Core>

namespace openable {

struct AssignmentResult {
    std::vector<int> row_to_col;  // -1 for unassigned rows (when rows > cols)
    double cost = 0.0;
};

/// Minimum-cost assignment on a rectangular cost matrix (Hungarian method
/// with potentials, O(n^2 m)). Every row is assigned when rows <= cols,
/// every column otherwise.
AssignmentResult solve_assignment(const Eigen::MatrixXd& cost);

/// Balanced transportation problem with integer supplies and demands
/// (sums must agree), solved exactly by successive shortest paths.
/// Returns the flow matrix; `total_cost` receives sum(cost .* flow).
Eigen::MatrixXd solve_transport(const std::vector<long>& supply, const std::vector<long>& demand,
                                const Eigen::MatrixXd& cost, double* total_cost = nullptr);

}  // namespace openable
