// SPDX-License-Identifier: MIT
#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "openable/Mesh.h"

namespace openable {

struct RayHit {
    double distance = 0.0;
    std::int32_t triangle_id = -1;
    Vec3 point = Vec3::Zero();
};

struct NearestTriangle {
    double distance = 0.0;
    std::int32_t triangle_id = -1;
    Vec3 point = Vec3::Zero();
};

/// Ray with the shear constants of the watertight intersection test
/// precomputed. Direction need not be normalized here; the public
/// ray_cast entry point enforces unit length.
class Ray {
public:
    Ray(const Vec3& origin, const Vec3& direction);

    const Vec3& origin() const { return origin_; }
    const Vec3& direction() const { return direction_; }

    /// Watertight ray/triangle test. Returns the hit distance in units of
    /// |direction| if it lies in [t_min, t_max].
    std::optional<double> intersect(const Vec3& a, const Vec3& b, const Vec3& c,
                                    double t_min, double t_max) const;

    /// Conservative slab test; returns the entry distance or nullopt.
    std::optional<double> intersect_box(const Vec3& lo, const Vec3& hi,
                                        double t_min, double t_max) const;

private:
    Vec3 origin_;
    Vec3 direction_;
    Vec3 inv_direction_;
    int kx_ = 0, ky_ = 1, kz_ = 2;
    double sx_ = 0.0, sy_ = 0.0, sz_ = 0.0;
};

/// Bounding volume hierarchy over a triangle mesh. Immutable after
/// construction; every query is const and safe to call concurrently.
class SpatialIndex {
public:
    explicit SpatialIndex(const TriMesh& mesh);

    /// Nearest hit with distance in [t_min, t_max]. Equal distances resolve
    /// to the lower triangle id. Throws InvalidDirection unless |direction|
    /// is 1 within 1e-6, and InvalidDirection for a bad t range.
    std::optional<RayHit> ray_cast(const Vec3& origin, const Vec3& direction,
                                   double t_min = 0.0,
                                   double t_max = std::numeric_limits<double>::infinity()) const;

    /// Same contract as ray_cast, evaluated by visiting every triangle.
    std::optional<RayHit> ray_cast_brute_force(
            const Vec3& origin, const Vec3& direction, double t_min = 0.0,
            double t_max = std::numeric_limits<double>::infinity()) const;

    /// True if any triangle is hit in [t_min, t_max]. Skips validation.
    bool occluded(const Vec3& origin, const Vec3& direction, double t_min, double t_max) const;

    NearestTriangle nearest_triangle(const Vec3& point) const;
    NearestTriangle nearest_triangle_brute_force(const Vec3& point) const;

    const Aabb& bounds() const { return bounds_; }
    std::size_t num_triangles() const { return triangles_.size(); }

private:
    struct Node {
        Vec3 lo;
        Vec3 hi;
        std::int32_t left_or_first = 0;  // child index for inner nodes
        std::int32_t count = 0;          // > 0 marks a leaf
    };

    void build(std::int32_t node, std::int32_t first, std::int32_t count,
               std::vector<Vec3>& centroids, int depth);
    std::optional<RayHit> traverse(const Ray& ray, double t_min, double t_max,
                                   bool any_hit) const;

    std::vector<Vec3> vertices_;
    std::vector<Tri> triangles_;
    std::vector<std::int32_t> order_;  // leaf slot -> triangle id
    std::vector<Node> nodes_;
    Aabb bounds_;
};

inline SpatialIndex build_bvh(const TriMesh& mesh) { return SpatialIndex(mesh); }

inline std::optional<RayHit> ray_cast(const SpatialIndex& index, const Vec3& origin,
                                      const Vec3& direction, double t_min, double t_max) {
    return index.ray_cast(origin, direction, t_min, t_max);
}

/// Closest point to `p` on triangle (a, b, c).
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

}  // namespace openable
