// SPDX-License-Identifier: MIT
#include "openable/SpatialIndex.h"

#include <algorithm>
#include <array>
#include <cmath>

#include "openable/Error.h"

namespace openable {

namespace {

constexpr std::int32_t kLeafSize = 4;
constexpr int kBins = 16;
constexpr int kMaxSahDepth = 48;

// gamma(3) from Pharr et al.; inflates the far slab distance so the box
// test never rejects a ray the triangle test would accept.
constexpr double kBoxSlack = 1.0 + 2.0 * (3.0 * 0.5 * std::numeric_limits<double>::epsilon()) /
                                           (1.0 - 3.0 * 0.5 * std::numeric_limits<double>::epsilon());

bool better(double t, std::int32_t id, double best_t, std::int32_t best_id) {
    return t < best_t || (t == best_t && id < best_id);
}

}  // namespace

Ray::Ray(const Vec3& origin, const Vec3& direction) : origin_(origin), direction_(direction) {
    for (int k = 0; k < 3; ++k) inv_direction_[k] = 1.0 / direction[k];
    Eigen::Index kz = 0;
    direction.cwiseAbs().maxCoeff(&kz);
    kz_ = static_cast<int>(kz);
    kx_ = (kz_ + 1) % 3;
    ky_ = (kx_ + 1) % 3;
    if (direction[kz_] < 0.0) std::swap(kx_, ky_);
    sx_ = direction[kx_] / direction[kz_];
    sy_ = direction[ky_] / direction[kz_];
    sz_ = 1.0 / direction[kz_];
}

std::optional<double> Ray::intersect(const Vec3& a, const Vec3& b, const Vec3& c,
                                     double t_min, double t_max) const {
    const Vec3 A = a - origin_;
    const Vec3 B = b - origin_;
    const Vec3 C = c - origin_;
    const double ax = A[kx_] - sx_ * A[kz_];
    const double ay = A[ky_] - sy_ * A[kz_];
    const double bx = B[kx_] - sx_ * B[kz_];
    const double by = B[ky_] - sy_ * B[kz_];
    const double cx = C[kx_] - sx_ * C[kz_];
    const double cy = C[ky_] - sy_ * C[kz_];
    double u = cx * by - cy * bx;
    double v = ax * cy - ay * cx;
    double w = bx * ay - by * ax;
    if (u == 0.0 || v == 0.0 || w == 0.0) {
        // Edge cases are re-evaluated in extended precision so that rays
        // through shared edges resolve identically for both neighbours.
        using LD = long double;
        u = static_cast<double>(LD(cx) * LD(by) - LD(cy) * LD(bx));
        v = static_cast<double>(LD(ax) * LD(cy) - LD(ay) * LD(cx));
        w = static_cast<double>(LD(bx) * LD(ay) - LD(by) * LD(ax));
    }
    if ((u < 0.0 || v < 0.0 || w < 0.0) && (u > 0.0 || v > 0.0 || w > 0.0)) return std::nullopt;
    const double det = u + v + w;
    if (det == 0.0) return std::nullopt;
    const double az = sz_ * A[kz_];
    const double bz = sz_ * B[kz_];
    const double cz = sz_ * C[kz_];
    const double t = (u * az + v * bz + w * cz) / det;
    if (!(t >= t_min && t <= t_max)) return std::nullopt;
    return t;
}

std::optional<double> Ray::intersect_box(const Vec3& lo, const Vec3& hi, double t_min,
                                         double t_max) const {
    double t0 = t_min;
    double t1 = t_max;
    for (int k = 0; k < 3; ++k) {
        double near = (lo[k] - origin_[k]) * inv_direction_[k];
        double far = (hi[k] - origin_[k]) * inv_direction_[k];
        if (std::isnan(near) || std::isnan(far)) {
            // Direction component is zero and the origin lies on a slab
            // boundary; the slab is then either fully in or out.
            if (origin_[k] < lo[k] || origin_[k] > hi[k]) return std::nullopt;
            continue;
        }
        if (near > far) std::swap(near, far);
        far *= kBoxSlack;
        t0 = near > t0 ? near : t0;
        t1 = far < t1 ? far : t1;
        if (t0 > t1) return std::nullopt;
    }
    return t0;
}

SpatialIndex::SpatialIndex(const TriMesh& mesh)
    : vertices_(mesh.vertices), triangles_(mesh.triangles) {
    if (mesh.triangles.empty()) {
        throw Error(ErrorKind::EmptyMesh, "cannot index a mesh without triangles");
    }
    const auto n = static_cast<std::int32_t>(triangles_.size());
    order_.resize(n);
    std::vector<Vec3> centroids(n);
    for (std::int32_t t = 0; t < n; ++t) {
        order_[t] = t;
        const Tri& tri = triangles_[t];
        centroids[t] = (vertices_[tri[0]] + vertices_[tri[1]] + vertices_[tri[2]]) / 3.0;
    }
    nodes_.reserve(2 * static_cast<std::size_t>(n) / kLeafSize + 1);
    nodes_.push_back({});
    build(0, 0, n, centroids, 0);
    bounds_ = Aabb::from_min_max(nodes_[0].lo, nodes_[0].hi);
}

void SpatialIndex::build(std::int32_t node, std::int32_t first, std::int32_t count,
                         std::vector<Vec3>& centroids, int depth) {
    Aabb box;
    Aabb centroid_box;
    for (std::int32_t i = first; i < first + count; ++i) {
        const Tri& tri = triangles_[order_[i]];
        for (int k = 0; k < 3; ++k) box.extend(vertices_[tri[k]]);
        centroid_box.extend(centroids[order_[i]]);
    }
    nodes_[node].lo = box.min;
    nodes_[node].hi = box.max;
    if (count <= kLeafSize) {
        nodes_[node].left_or_first = first;
        nodes_[node].count = count;
        return;
    }

    Eigen::Index axis = 0;
    const Vec3 span = centroid_box.max - centroid_box.min;
    span.maxCoeff(&axis);
    std::int32_t mid = first + count / 2;
    bool partitioned = false;
    // Past kMaxSahDepth fall back to median splits so the traversal stack
    // stays bounded.
    if (span[axis] > 0.0 && depth < kMaxSahDepth) {
        // Binned surface-area heuristic along the widest centroid axis.
        struct Bin {
            Aabb box;
            std::int32_t count = 0;
        };
        std::array<Bin, kBins> bins{};
        const double scale = kBins / span[axis];
        auto bin_of = [&](std::int32_t t) {
            const int b = static_cast<int>((centroids[t][axis] - centroid_box.min[axis]) * scale);
            return std::clamp(b, 0, kBins - 1);
        };
        for (std::int32_t i = first; i < first + count; ++i) {
            Bin& bin = bins[bin_of(order_[i])];
            const Tri& tri = triangles_[order_[i]];
            for (int k = 0; k < 3; ++k) bin.box.extend(vertices_[tri[k]]);
            ++bin.count;
        }
        auto area = [](const Aabb& b) {
            if (!b.valid()) return 0.0;
            const Vec3 e = b.extent();
            return e.x() * e.y() + e.y() * e.z() + e.z() * e.x();
        };
        std::array<double, kBins - 1> left_cost{};
        Aabb acc;
        std::int32_t acc_count = 0;
        for (int b = 0; b < kBins - 1; ++b) {
            acc.extend(bins[b].box);
            acc_count += bins[b].count;
            left_cost[b] = area(acc) * acc_count;
        }
        acc = Aabb{};
        acc_count = 0;
        double best_cost = std::numeric_limits<double>::infinity();
        int best_split = -1;
        for (int b = kBins - 1; b > 0; --b) {
            acc.extend(bins[b].box);
            acc_count += bins[b].count;
            const double cost = left_cost[b - 1] + area(acc) * acc_count;
            if (acc_count > 0 && acc_count < count && cost < best_cost) {
                best_cost = cost;
                best_split = b;
            }
        }
        if (best_split > 0) {
            auto* begin = order_.data() + first;
            auto* split = std::partition(begin, begin + count,
                                         [&](std::int32_t t) { return bin_of(t) < best_split; });
            mid = static_cast<std::int32_t>(split - order_.data());
            partitioned = true;
        }
    }
    if (!partitioned) {
        std::nth_element(order_.begin() + first, order_.begin() + mid,
                         order_.begin() + first + count, [&](std::int32_t a, std::int32_t b) {
                             return centroids[a][axis] < centroids[b][axis];
                         });
    }

    const auto left = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back({});
    nodes_.push_back({});
    nodes_[node].left_or_first = left;
    nodes_[node].count = 0;
    build(left, first, mid - first, centroids, depth + 1);
    build(left + 1, mid, first + count - mid, centroids, depth + 1);
}

std::optional<RayHit> SpatialIndex::traverse(const Ray& ray, double t_min, double t_max,
                                             bool any_hit) const {
    double best_t = std::numeric_limits<double>::infinity();
    std::int32_t best_id = -1;
    std::array<std::int32_t, 128> stack{};
    int top = 0;
    if (!ray.intersect_box(nodes_[0].lo, nodes_[0].hi, t_min, t_max)) return std::nullopt;
    stack[top++] = 0;
    while (top > 0) {
        const Node& node = nodes_[stack[--top]];
        if (node.count > 0) {
            for (std::int32_t i = node.left_or_first; i < node.left_or_first + node.count; ++i) {
                const std::int32_t id = order_[i];
                const Tri& tri = triangles_[id];
                const auto t = ray.intersect(vertices_[tri[0]], vertices_[tri[1]],
                                             vertices_[tri[2]], t_min, std::min(t_max, best_t));
                if (t && better(*t, id, best_t, best_id)) {
                    best_t = *t;
                    best_id = id;
                    if (any_hit) return RayHit{best_t, best_id, ray.origin() + best_t * ray.direction()};
                }
            }
            continue;
        }
        const std::int32_t a = node.left_or_first;
        const std::int32_t b = a + 1;
        const double limit = std::min(t_max, best_t);
        const auto ta = ray.intersect_box(nodes_[a].lo, nodes_[a].hi, t_min, limit);
        const auto tb = ray.intersect_box(nodes_[b].lo, nodes_[b].hi, t_min, limit);
        if (ta && tb) {
            // Push the farther child first so the nearer one is visited next.
            if (*ta <= *tb) {
                stack[top++] = b;
                stack[top++] = a;
            } else {
                stack[top++] = a;
                stack[top++] = b;
            }
        } else if (ta) {
            stack[top++] = a;
        } else if (tb) {
            stack[top++] = b;
        }
    }
    if (best_id < 0) return std::nullopt;
    return RayHit{best_t, best_id, ray.origin() + best_t * ray.direction()};
}

namespace {

void check_ray(const Vec3& direction, double t_min, double t_max) {
    if (!std::isfinite(direction.squaredNorm()) || std::abs(direction.norm() - 1.0) > 1e-6) {
        throw Error(ErrorKind::InvalidDirection, "ray direction must be unit length");
    }
    if (!(t_min >= 0.0 && t_min < t_max)) {
        throw Error(ErrorKind::InvalidDirection, "ray range must satisfy 0 <= t_min < t_max");
    }
}

}  // namespace

std::optional<RayHit> SpatialIndex::ray_cast(const Vec3& origin, const Vec3& direction,
                                             double t_min, double t_max) const {
    check_ray(direction, t_min, t_max);
    return traverse(Ray(origin, direction), t_min, t_max, false);
}

std::optional<RayHit> SpatialIndex::ray_cast_brute_force(const Vec3& origin,
                                                         const Vec3& direction, double t_min,
                                                         double t_max) const {
    check_ray(direction, t_min, t_max);
    const Ray ray(origin, direction);
    double best_t = std::numeric_limits<double>::infinity();
    std::int32_t best_id = -1;
    for (std::size_t id = 0; id < triangles_.size(); ++id) {
        const Tri& tri = triangles_[id];
        const auto t = ray.intersect(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]],
                                     t_min, t_max);
        if (t && better(*t, static_cast<std::int32_t>(id), best_t, best_id)) {
            best_t = *t;
            best_id = static_cast<std::int32_t>(id);
        }
    }
    if (best_id < 0) return std::nullopt;
    return RayHit{best_t, best_id, origin + best_t * direction};
}

bool SpatialIndex::occluded(const Vec3& origin, const Vec3& direction, double t_min,
                            double t_max) const {
    return traverse(Ray(origin, direction), t_min, t_max, true).has_value();
}

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    // Voronoi-region walk (Ericson, Real-Time Collision Detection 5.1.5).
    const Vec3 ab = b - a;
    const Vec3 ac = c - a;
    const Vec3 ap = p - a;
    const double d1 = ab.dot(ap);
    const double d2 = ac.dot(ap);
    if (d1 <= 0.0 && d2 <= 0.0) return a;
    const Vec3 bp = p - b;
    const double d3 = ab.dot(bp);
    const double d4 = ac.dot(bp);
    if (d3 >= 0.0 && d4 <= d3) return b;
    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + (d1 / (d1 - d3)) * ab;
    const Vec3 cp = p - c;
    const double d5 = ab.dot(cp);
    const double d6 = ac.dot(cp);
    if (d6 >= 0.0 && d5 <= d6) return c;
    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + (d2 / (d2 - d6)) * ac;
    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
        return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
    }
    const double denom = 1.0 / (va + vb + vc);
    return a + ab * (vb * denom) + ac * (vc * denom);
}

NearestTriangle SpatialIndex::nearest_triangle(const Vec3& point) const {
    NearestTriangle best{std::numeric_limits<double>::infinity(), -1, Vec3::Zero()};
    double best_d2 = std::numeric_limits<double>::infinity();
    auto box_d2 = [&](const Node& node) {
        const Vec3 d = (node.lo - point).cwiseMax(point - node.hi).cwiseMax(0.0);
        return d.squaredNorm();
    };
    std::array<std::int32_t, 128> stack{};
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const Node& node = nodes_[stack[--top]];
        if (box_d2(node) > best_d2) continue;
        if (node.count > 0) {
            for (std::int32_t i = node.left_or_first; i < node.left_or_first + node.count; ++i) {
                const std::int32_t id = order_[i];
                const Tri& tri = triangles_[id];
                const Vec3 q = closest_point_on_triangle(point, vertices_[tri[0]],
                                                         vertices_[tri[1]], vertices_[tri[2]]);
                const double d2 = (q - point).squaredNorm();
                if (better(d2, id, best_d2, best.triangle_id)) {
                    best_d2 = d2;
                    best.triangle_id = id;
                    best.point = q;
                }
            }
            continue;
        }
        const std::int32_t a = node.left_or_first;
        const std::int32_t b = a + 1;
        if (box_d2(nodes_[a]) <= box_d2(nodes_[b])) {
            stack[top++] = b;
            stack[top++] = a;
        } else {
            stack[top++] = a;
            stack[top++] = b;
        }
    }
    best.distance = std::sqrt(best_d2);
    return best;
}

NearestTriangle SpatialIndex::nearest_triangle_brute_force(const Vec3& point) const {
    NearestTriangle best{std::numeric_limits<double>::infinity(), -1, Vec3::Zero()};
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t id = 0; id < triangles_.size(); ++id) {
        const Tri& tri = triangles_[id];
        const Vec3 q =
                closest_point_on_triangle(point, vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
        const double d2 = (q - point).squaredNorm();
        if (better(d2, static_cast<std::int32_t>(id), best_d2, best.triangle_id)) {
            best_d2 = d2;
            best.triangle_id = static_cast<std::int32_t>(id);
            best.point = q;
        }
    }
    best.distance = std::sqrt(best_d2);
    return best;
}

}  // namespace openable
