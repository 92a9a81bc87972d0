// SPDX-License-Identifier: MIT
#include <doctest.h>

#include "Fixtures.h"
#include "Oracles.h"
#include "openable/Error.h"
#include "openable/Interior.h"
#include "openable/Motion.h"
#include "openable/SpatialIndex.h"

using namespace openable;
using namespace openable::testing;

namespace {

OrientedBox front_box() {
    OrientedBox b;
    b.center = Vec3(0, 0.24, 0.5);
    b.axes.col(0) = Vec3::UnitX();
    b.axes.col(1) = Vec3::UnitY();
    b.axes.col(2) = Vec3::UnitZ();
    b.half_extents = Vec3(0.3, 0.01, 0.1);
    return b;
}

}  // namespace

TEST_CASE("classification margin") {
    CHECK(classify_drawer({0.5, 0.4, 0.4}) == DrawerKind::Standard);
    CHECK(classify_drawer({0.51, 0.4, 0.4}) == DrawerKind::Corner);
    CHECK(classify_drawer({0.51, 0.4, 0.4}, 1.3) == DrawerKind::Standard);
}

TEST_CASE("default wall thickness is clamped") {
    OrientedBox b = front_box();
    CHECK(default_wall_thickness(b) == doctest::Approx(0.004));
    b.half_extents = Vec3(5, 0.01, 5);
    CHECK(default_wall_thickness(b) == doctest::Approx(0.02));
    b.half_extents = Vec3(0.01, 0.01, 0.01);
    CHECK(default_wall_thickness(b) == doctest::Approx(0.001));
}

TEST_CASE("standard body slabs") {
    const OrientedBox b = front_box();
    const TriMesh body = build_drawer_body(b, {0.4, 0.4, 0.4}, DrawerKind::Standard, 0.01);
    const auto segs = connectivity_segments(body, 0.0);
    CHECK(segs.size() == 4);
    for (const auto& s : segs) CHECK(is_closed_manifold(submesh(body, s.triangle_ids)));
    const Aabb bb = bounding_box(body);
    CHECK(bb.max.y() <= 0.23 + 1e-12);
    CHECK(bb.min.y() == doctest::Approx(0.23 - 0.39));
    CHECK(bb.min.x() == doctest::Approx(-0.3));
    CHECK(bb.max.x() == doctest::Approx(0.3));
    CHECK_THROWS_AS(build_drawer_body(b, {0.015, 0.4, 0.4}, DrawerKind::Standard, 0.01), Error);
}

TEST_CASE("corner body slabs") {
    const TriMesh body = build_drawer_body(front_box(), {0.8, 0.3, 0.3}, DrawerKind::Corner, 0.01);
    const auto segs = connectivity_segments(body, 0.0);
    CHECK(segs.size() == 5);
    for (const auto& s : segs) CHECK(is_closed_manifold(submesh(body, s.triangle_ids)));
    CHECK(bounding_box(body).min.y() > 0.23 - 0.8);
}

TEST_CASE("depth probe on a dresser") {
    const Fixture f = dresser(1, 0.8, 0.5, 0.5);
    const TriMesh base = submesh(f.mesh, f.gt.base_triangles);
    const TriMesh front = submesh(f.mesh, f.gt.parts[0].triangle_ids);
    const OrientedBox box = gravity_obb(front.vertices, f.frame);
    const DepthProbe p = probe_drawer_depth(SpatialIndex(base), box, bounding_box(f.mesh));
    CHECK_FALSE(p.clamped_center);
    CHECK(p.d_center == doctest::Approx(p.d_left));
    CHECK(p.d_center == doctest::Approx(p.d_right));
    CHECK(classify_drawer(p) == DrawerKind::Standard);
}

TEST_CASE("completion only touches prismatic drawers") {
    const Fixture f = drawer_over_door(HandleSide::Right);
    const ArticulatedObject obj = build_articulated(f.mesh, f.gt, f.frame, "x");
    std::vector<std::string> diag;
    const ArticulatedObject done = complete_interiors(obj, {}, &diag);
    CHECK(diag.empty());
    for (std::size_t i = 0; i < obj.parts.size(); ++i) {
        const bool drawer = obj.parts[i].label == PartLabel::Drawer;
        CHECK((done.parts[i].mesh.num_triangles() > obj.parts[i].mesh.num_triangles()) == drawer);
    }
    CHECK(done.base.num_triangles() == obj.base.num_triangles());
}

TEST_CASE("connectivity segments weld only when asked") {
    TriMesh m = box({0, 0, 0}, {1, 1, 1});
    TriMesh split;
    for (std::size_t t = 0; t < m.num_triangles(); ++t) {
        const std::int32_t id = static_cast<std::int32_t>(t);
        append(split, submesh(m, std::span<const std::int32_t>(&id, 1)));
    }
    CHECK(connectivity_segments(split, 0.0).size() == 12);
    CHECK(connectivity_segments(split, 1e-6).size() == 1);
}

TEST_CASE("fibonacci directions are unit and spread") {
    const auto dirs = fibonacci_directions(64);
    CHECK(dirs.size() == 64);
    Vec3 sum = Vec3::Zero();
    for (const auto& d : dirs) {
        CHECK(d.norm() == doctest::Approx(1.0));
        sum += d;
    }
    CHECK(sum.norm() < 1.0);
}

TEST_CASE("countertop is only added when the top is open") {
    const Frame frame = fixture_frame();
    const TriMesh closed = carcass({0.8, 0.5, 0.9, 0.02, true, true, {}});
    CHECK(top_coverage(closed, frame) > 0.9);
    CHECK(add_countertop(closed, frame).num_triangles() == closed.num_triangles());
    const TriMesh open = carcass({0.8, 0.5, 0.9, 0.02, false, true, {}});
    const TriMesh topped = add_countertop(open, frame);
    CHECK(topped.num_triangles() == open.num_triangles() + 12);
    CHECK(bounding_box(topped).max.z() == doctest::Approx(0.9));
}
