// SPDX-License-Identifier: MIT
#include "openable/Giou.h"

#include "openable/Error.h"

namespace openable {

namespace {

double intersection_volume(const Aabb& a, const Aabb& b) {
    const Vec3 lo = a.min.cwiseMax(b.min);
    const Vec3 hi = a.max.cwiseMin(b.max);
    const Vec3 e = (hi - lo).cwiseMax(0.0);
    return e.x() * e.y() * e.z();
}

void check_box(const Aabb& box) {
    if (!box.valid()) throw Error(ErrorKind::ZeroVolume, "box has negative extent");
}

}  // namespace

double iou3d(const Aabb& a, const Aabb& b) {
    check_box(a);
    check_box(b);
    const double inter = intersection_volume(a, b);
    const double uni = a.volume() + b.volume() - inter;
    if (uni <= 0.0) throw Error(ErrorKind::ZeroVolume, "both boxes have zero volume");
    return inter / uni;
}

double giou3d(const Aabb& a, const Aabb& b) {
    check_box(a);
    check_box(b);
    const double inter = intersection_volume(a, b);
    const double uni = a.volume() + b.volume() - inter;
    if (uni <= 0.0) throw Error(ErrorKind::ZeroVolume, "both boxes have zero volume");
    Aabb hull = a;
    hull.extend(b);
    const double hull_volume = hull.volume();
    return inter / uni - (hull_volume - uni) / hull_volume;
}

}  // namespace openable
