// SPDX-License-Identifier: MIT
#include "openable/OrientedBox.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "openable/Error.h"

namespace openable {

std::array<Vec3, 8> OrientedBox::corners() const {
    std::array<Vec3, 8> out;
    for (int i = 0; i < 8; ++i) {
        Vec3 p = center;
        for (int k = 0; k < 3; ++k) {
            p += ((i >> k) & 1 ? 1.0 : -1.0) * half_extents[k] * axes.col(k);
        }
        out[i] = p;
    }
    return out;
}

Aabb OrientedBox::aabb() const {
    const auto c = corners();
    return Aabb::from_points(c);
}

bool OrientedBox::contains(const Vec3& p, double tol) const {
    const Vec3 q = local(p);
    return (q.cwiseAbs().array() <= half_extents.array() + tol).all();
}

OrientedBox OrientedBox::turned() const {
    OrientedBox out = *this;
    out.axes.col(0) = -axes.col(0);
    out.axes.col(1) = -axes.col(1);
    out.half_extents = half_extents;
    return out;
}

void OrientedBox::validate() const {
    for (int k = 0; k < 3; ++k) {
        if (std::abs(axes.col(k).norm() - 1.0) > 1e-6) {
            throw Error(ErrorKind::DegenerateBox, "box axes must be unit length");
        }
        if (half_extents[k] < 0.0) {
            throw Error(ErrorKind::DegenerateBox, "box half extents must be nonnegative");
        }
        for (int j = k + 1; j < 3; ++j) {
            if (std::abs(axes.col(k).dot(axes.col(j))) > 1e-6) {
                throw Error(ErrorKind::DegenerateBox, "box axes must be orthogonal");
            }
        }
    }
}

std::vector<Vec2> convex_hull_2d(std::vector<Vec2> points) {
    std::sort(points.begin(), points.end(), [](const Vec2& a, const Vec2& b) {
        return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
    });
    points.erase(std::unique(points.begin(), points.end()), points.end());
    if (points.size() < 3) return points;
    auto cross = [](const Vec2& o, const Vec2& a, const Vec2& b) {
        return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
    };
    std::vector<Vec2> hull(2 * points.size());
    std::size_t k = 0;
    for (const auto& p : points) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], points[i]) <= 0.0) --k;
        hull[k++] = points[i];
    }
    hull.resize(k - 1);
    return hull;
}

OrientedBox gravity_obb(std::span<const Vec3> points, const Frame& frame) {
    if (points.empty()) throw Error(ErrorKind::EmptyInput, "gravity_obb needs at least one point");
    const Vec3 up = frame.up.normalized();
    const Vec3 u = (frame.front - frame.front.dot(up) * up).normalized();
    const Vec3 v = up.cross(u);

    std::vector<Vec2> planar;
    planar.reserve(points.size());
    for (const auto& p : points) planar.emplace_back(p.dot(u), p.dot(v));
    const std::vector<Vec2> hull = convex_hull_2d(std::move(planar));

    constexpr double kQuarter = 0.5 * std::numbers::pi;
    auto footprint = [&](double yaw) {
        const Vec2 e1(std::cos(yaw), std::sin(yaw));
        const Vec2 e2(-e1.y(), e1.x());
        double lo1 = std::numeric_limits<double>::infinity(), hi1 = -lo1;
        double lo2 = lo1, hi2 = -lo1;
        for (const auto& h : hull) {
            const double a = h.dot(e1);
            const double b = h.dot(e2);
            lo1 = std::min(lo1, a);
            hi1 = std::max(hi1, a);
            lo2 = std::min(lo2, b);
            hi2 = std::max(hi2, b);
        }
        return (hi1 - lo1) * (hi2 - lo2);
    };

    double best_yaw = 0.0;
    if (hull.size() >= 2) {
        double scale2 = 0.0;
        for (const auto& h : hull) scale2 = std::max(scale2, (h - hull[0]).squaredNorm());
        const double tol = 1e-9 * scale2;
        double best_area = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < hull.size(); ++i) {
            const Vec2 edge = hull[(i + 1) % hull.size()] - hull[i];
            double yaw = std::fmod(std::atan2(edge.y(), edge.x()), kQuarter);
            if (yaw < 0.0) yaw += kQuarter;
            if (yaw > kQuarter - 1e-12) yaw = 0.0;
            const double area = footprint(yaw);
            if (area < best_area - tol ||
                (std::abs(area - best_area) <= tol && yaw < best_yaw)) {
                best_area = std::min(area, best_area);
                best_yaw = yaw;
            }
        }
    }

    const Vec3 e1 = std::cos(best_yaw) * u + std::sin(best_yaw) * v;
    const Vec3 e2 = up.cross(e1);
    const std::array<Vec3, 4> candidates{e1, e2, -e1, -e2};
    Vec3 front = candidates[0];
    double best_dot = -2.0;
    for (const auto& c : candidates) {
        const double d = c.dot(frame.front);
        if (d > best_dot + 1e-12) {
            best_dot = d;
            front = c;
        }
    }

    OrientedBox box;
    box.axes.col(0) = front.cross(up);
    box.axes.col(1) = front;
    box.axes.col(2) = up;
    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = -lo;
    for (const auto& p : points) {
        const Vec3 q = box.axes.transpose() * p;
        lo = lo.cwiseMin(q);
        hi = hi.cwiseMax(q);
    }
    box.center = box.axes * (0.5 * (lo + hi));
    box.half_extents = 0.5 * (hi - lo);
    return box;
}

double box_yaw_degrees(const OrientedBox& box, const Frame& frame) {
    const Vec3 up = frame.up.normalized();
    const Vec3 u = (frame.front - frame.front.dot(up) * up).normalized();
    const Vec3 v = up.cross(u);
    double yaw = std::atan2(box.front().dot(v), box.front().dot(u)) * 180.0 / std::numbers::pi;
    yaw = std::fmod(yaw, 90.0);
    if (yaw < 0.0) yaw += 90.0;
    if (yaw > 90.0 - 1e-9) yaw = 0.0;
    return yaw;
}

}  // namespace openable
