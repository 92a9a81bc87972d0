// SPDX-License-Identifier: MIT
#include "openable/KdTree.h"

#include <algorithm>
#include <queue>

namespace openable {

double box_distance2(const Vec3& p, const Vec3& lo, const Vec3& hi) {
    double d[3];
    for (int k = 0; k < 3; ++k) {
        if (p[k] < lo[k]) {
            d[k] = lo[k] - p[k];
        } else if (p[k] > hi[k]) {
            d[k] = p[k] - hi[k];
        } else {
            d[k] = 0.0;
        }
    }
    return d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
}

KdTree::KdTree(std::span<const Vec3> points, std::int32_t leaf_size)
    : points_(points), leaf_size_(std::max<std::int32_t>(1, leaf_size)) {
    order_.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) order_[i] = static_cast<std::int32_t>(i);
    nodes_.reserve(2 * points.size() / static_cast<std::size_t>(leaf_size_) + 2);
    if (!points.empty()) build(0, static_cast<std::int32_t>(points.size()));
}

std::int32_t KdTree::build(std::int32_t first, std::int32_t count) {
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();
    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = -lo;
    for (std::int32_t i = first; i < first + count; ++i) {
        lo = lo.cwiseMin(points_[order_[i]]);
        hi = hi.cwiseMax(points_[order_[i]]);
    }
    nodes_[id].lo = lo;
    nodes_[id].hi = hi;
    nodes_[id].first = first;
    nodes_[id].count = count;
    if (count <= leaf_size_ || (hi - lo).maxCoeff() <= 0.0) return id;

    int axis = 0;
    (hi - lo).maxCoeff(&axis);
    const std::int32_t half = count / 2;
    auto begin = order_.begin() + first;
    std::nth_element(begin, begin + half, begin + count, [&](std::int32_t a, std::int32_t b) {
        const double pa = points_[a][axis];
        const double pb = points_[b][axis];
        return pa < pb || (pa == pb && a < b);
    });
    const std::int32_t left = build(first, half);
    const std::int32_t right = build(first + half, count - half);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
}

std::vector<Neighbor> KdTree::knn(const Vec3& query, std::size_t k) const {
    std::vector<Neighbor> out;
    if (k == 0 || nodes_.empty()) return out;
    auto worse = [](const Neighbor& a, const Neighbor& b) {
        return a.distance2 < b.distance2 || (a.distance2 == b.distance2 && a.index < b.index);
    };
    // Max-heap on (distance, index): top is the current worst candidate.
    std::priority_queue<Neighbor, std::vector<Neighbor>, decltype(worse)> heap(worse);

    std::int32_t stack[128];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const Node& node = nodes_[stack[--top]];
        const double bound = box_distance2(query, node.lo, node.hi);
        if (heap.size() == k && bound > heap.top().distance2) continue;
        if (node.left < 0) {
            for (std::int32_t i = node.first; i < node.first + node.count; ++i) {
                const Neighbor cand{order_[i], squared_distance(query, points_[order_[i]])};
                if (heap.size() < k) {
                    heap.push(cand);
                } else if (worse(cand, heap.top())) {
                    heap.pop();
                    heap.push(cand);
                }
            }
            continue;
        }
        const Node& l = nodes_[node.left];
        const Node& r = nodes_[node.right];
        const double dl = box_distance2(query, l.lo, l.hi);
        const double dr = box_distance2(query, r.lo, r.hi);
        // Push the farther child first so the nearer one is visited next.
        if (dl <= dr) {
            stack[top++] = node.right;
            stack[top++] = node.left;
        } else {
            stack[top++] = node.left;
            stack[top++] = node.right;
        }
    }
    out.resize(heap.size());
    for (std::size_t i = out.size(); i-- > 0;) {
        out[i] = heap.top();
        heap.pop();
    }
    return out;
}

}  // namespace openable
