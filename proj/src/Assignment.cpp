// SPDX-License-Identifier: MIT
#include "openable/Assignment.h"

#include <algorithm>
#include <limits>
#include <numeric>

#include "openable/Error.h"

namespace openable {

AssignmentResult solve_assignment(const Eigen::MatrixXd& cost) {
    const bool transpose = cost.rows() > cost.cols();
    const Eigen::MatrixXd a = transpose ? Eigen::MatrixXd(cost.transpose()) : cost;
    const int n = static_cast<int>(a.rows());
    const int m = static_cast<int>(a.cols());
    AssignmentResult result;
    result.row_to_col.assign(static_cast<std::size_t>(cost.rows()), -1);
    if (n == 0) return result;

    constexpr double kInf = std::numeric_limits<double>::infinity();
    // 1-based potentials; p[j] is the row matched to column j.
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<int> p(m + 1, 0), way(m + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(m + 1, kInf);
        std::vector<char> used(m + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            double delta = kInf;
            int j1 = 0;
            for (int j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    for (int j = 1; j <= m; ++j) {
        if (p[j] == 0) continue;
        const int row = p[j] - 1;
        const int col = j - 1;
        if (transpose) {
            result.row_to_col[static_cast<std::size_t>(col)] = row;
        } else {
            result.row_to_col[static_cast<std::size_t>(row)] = col;
        }
        result.cost += a(row, col);
    }
    return result;
}

Eigen::MatrixXd solve_transport(const std::vector<long>& supply, const std::vector<long>& demand,
                                const Eigen::MatrixXd& cost, double* total_cost) {
    const int n = static_cast<int>(supply.size());
    const int m = static_cast<int>(demand.size());
    if (cost.rows() != n || cost.cols() != m) {
        throw Error(ErrorKind::ShapeMismatch, "transport cost matrix does not match supplies/demands");
    }
    if (std::accumulate(supply.begin(), supply.end(), 0L) != std::accumulate(demand.begin(), demand.end(), 0L)) {
        throw Error(ErrorKind::ShapeMismatch, "transport supplies and demands differ in total");
    }
    Eigen::MatrixXd flow = Eigen::MatrixXd::Zero(n, m);
    std::vector<long> s = supply, d = demand;
    const double eps = 1e-12 * std::max(1.0, cost.size() ? cost.cwiseAbs().maxCoeff() : 0.0);
    constexpr double kInf = std::numeric_limits<double>::infinity();
    // Nodes: rows 0..n-1, columns n..n+m-1. Residual edges: row->col always
    // (cost c), col->row where flow > 0 (cost -c).
    while (true) {
        std::vector<double> dist(static_cast<std::size_t>(n + m), kInf);
        std::vector<int> prev(static_cast<std::size_t>(n + m), -1);
        for (int i = 0; i < n; ++i) {
            if (s[i] > 0) dist[i] = 0.0;
        }
        // Bellman-Ford; strict improvement by eps rules out zero-cost cycling.
        for (int round = 0; round < n + m; ++round) {
            bool changed = false;
            for (int i = 0; i < n; ++i) {
                if (dist[i] == kInf) continue;
                for (int j = 0; j < m; ++j) {
                    const double nd = dist[i] + cost(i, j);
                    if (nd < dist[n + j] - eps) {
                        dist[n + j] = nd;
                        prev[n + j] = i;
                        changed = true;
                    }
                }
            }
            for (int j = 0; j < m; ++j) {
                if (dist[n + j] == kInf) continue;
                for (int i = 0; i < n; ++i) {
                    if (flow(i, j) <= 0.0) continue;
                    const double nd = dist[n + j] - cost(i, j);
                    if (nd < dist[i] - eps) {
                        dist[i] = nd;
                        prev[i] = n + j;
                        changed = true;
                    }
                }
            }
            if (!changed) break;
        }
        int sink = -1;
        for (int j = 0; j < m; ++j) {
            if (d[j] <= 0 || dist[n + j] == kInf) continue;
            if (sink < 0 || dist[n + j] < dist[sink]) sink = n + j;
        }
        if (sink < 0) break;
        long amount = d[sink - n];
        int x = sink;
        while (prev[x] >= 0) {
            const int px = prev[x];
            if (px >= n) amount = std::min(amount, static_cast<long>(flow(x, px - n)));
            x = px;
        }
        amount = std::min(amount, s[x]);
        if (amount <= 0) {
            throw Error(ErrorKind::ShapeMismatch, "transport solver found no augmenting capacity");
        }
        const int source = x;
        x = sink;
        while (prev[x] >= 0) {
            const int px = prev[x];
            if (px < n) {
                flow(px, x - n) += static_cast<double>(amount);
            } else {
                flow(x, px - n) -= static_cast<double>(amount);
            }
            x = px;
        }
        s[source] -= amount;
        d[sink - n] -= amount;
    }
    if (total_cost) *total_cost = (cost.array() * flow.array()).sum();
    return flow;
}

}  // namespace openable
