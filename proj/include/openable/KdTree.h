// SPDX-License-Identifier: MIT
#pragma once

#include <span>
#include <vector>

#include "openable/Mesh.h"

namespace openable {

struct Neighbor {
    std::int32_t index = -1;
    double distance2 = 0.0;
};

/// Squared Euclidean distance, evaluated as ((dx*dx + dy*dy) + dz*dz).
inline double squared_distance(const Vec3& a, const Vec3& b) {
    const double dx = a.x() - b.x();
    const double dy = a.y() - b.y();
    const double dz = a.z() - b.z();
    return dx * dx + dy * dy + dz * dz;
}

/// Static 3D kd-tree (median splits on the widest axis). The point array
/// must outlive the tree.
class KdTree {
public:
    struct Node {
        Vec3 lo;
        Vec3 hi;
        std::int32_t first = 0;   // range in order()
        std::int32_t count = 0;
        std::int32_t left = -1;   // -1 for leaves
        std::int32_t right = -1;
    };

    explicit KdTree(std::span<const Vec3> points, std::int32_t leaf_size = 16);

    /// The k nearest points ordered by (distance, index). Exact, including
    /// ties at the k-th distance, which resolve to lower indices.
    std::vector<Neighbor> knn(const Vec3& query, std::size_t k) const;

    std::size_t size() const { return points_.size(); }
    std::span<const Vec3> points() const { return points_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<std::int32_t>& order() const { return order_; }

private:
    std::int32_t build(std::int32_t first, std::int32_t count);

    std::span<const Vec3> points_;
    std::int32_t leaf_size_;
    std::vector<std::int32_t> order_;
    std::vector<Node> nodes_;
};

/// Lower bound of squared_distance(p, q) over q in [lo, hi]; never exceeds
/// the value squared_distance returns for any such q.
double box_distance2(const Vec3& p, const Vec3& lo, const Vec3& hi);

}  // namespace openable
