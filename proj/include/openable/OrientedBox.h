// SPDX-License-Identifier: MIT
#pragma once

#include <array>
#include <span>

#include "openable/Mesh.h"

namespace openable {

enum class BoxAxis { Right = 0, Front = 1, Up = 2 };

/// Box with orthonormal axes stored as columns (right, front, up).
struct OrientedBox {
    Vec3 center = Vec3::Zero();
    Eigen::Matrix3d axes = Eigen::Matrix3d::Identity();
    Vec3 half_extents = Vec3::Zero();

    Vec3 axis(BoxAxis a) const { return axes.col(static_cast<int>(a)); }
    double half_extent(BoxAxis a) const { return half_extents[static_cast<int>(a)]; }
    Vec3 right() const { return axes.col(0); }
    Vec3 front() const { return axes.col(1); }
    Vec3 up() const { return axes.col(2); }

    /// Corner i uses sign bit k of i for axis k (1 = positive side).
    std::array<Vec3, 8> corners() const;
    Aabb aabb() const;
    double diagonal() const { return 2.0 * half_extents.norm(); }
    double volume() const { return 8.0 * half_extents.prod(); }
    bool contains(const Vec3& p, double tol = 0.0) const;
    /// Coordinates of p in the box basis, relative to the center.
    Vec3 local(const Vec3& p) const { return axes.transpose() * (p - center); }
    /// Same box with front and right negated (a half turn about up).
    OrientedBox turned() const;

    void validate() const;
};

/// Gravity-aligned box: up axis = frame.up, yaw chosen by rotating calipers
/// on the horizontal convex hull to minimise footprint area (ties resolve to
/// the smallest yaw in [0, 90) degrees). The front axis is the horizontal
/// box axis best aligned with frame.front. Throws EmptyInput.
OrientedBox gravity_obb(std::span<const Vec3> points, const Frame& frame);

/// Yaw of the box's horizontal axes relative to frame.front, in degrees,
/// reduced to [0, 90).
double box_yaw_degrees(const OrientedBox& box, const Frame& frame);

/// 2D convex hull (counter-clockwise, no collinear points).
std::vector<Vec2> convex_hull_2d(std::vector<Vec2> points);

}  // namespace openable
