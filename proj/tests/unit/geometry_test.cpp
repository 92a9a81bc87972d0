// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <algorithm>
#include <numbers>
#include <random>

#include "Fixtures.h"
#include "Oracles.h"
#include "openable/Error.h"
#include "openable/Giou.h"
#include "openable/KdTree.h"
#include "openable/OrientedBox.h"
#include "openable/SpatialIndex.h"

using namespace openable;
using openable::testing::box;

namespace {

Eigen::Matrix3d yaw(double degrees) {
    return Eigen::AngleAxisd(degrees * std::numbers::pi / 180.0, Vec3::UnitZ()).toRotationMatrix();
}

}  // namespace

TEST_CASE("make_box is closed with outward normals") {
    const TriMesh m = make_box(Aabb::from_min_max(Vec3(0, 0, 0), Vec3(1, 2, 3)));
    CHECK(m.num_triangles() == 12);
    CHECK(testing::is_closed_manifold(m));
    CHECK(total_area(m) == doctest::Approx(2 * (2 + 3 + 6)));
    const Vec3 c = bounding_box(m).center();
    for (std::size_t t = 0; t < m.num_triangles(); ++t) {
        CHECK(triangle_normal(m, t).dot(triangle_centroid(m, t) - c) > 0.0);
    }
}

TEST_CASE("make_prism over a triangle") {
    const std::vector<Vec3> base{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    const TriMesh m = make_prism(base, Vec3::UnitZ(), 2.0);
    CHECK(testing::is_closed_manifold(m));
    CHECK(total_area(m) == doctest::Approx(0.5 * 2 + 2 * (1 + 1 + std::sqrt(2.0))));
    const Vec3 c(1.0 / 3, 1.0 / 3, 1.0);
    for (std::size_t t = 0; t < m.num_triangles(); ++t) {
        CHECK(triangle_normal(m, t).dot(triangle_centroid(m, t) - c) > 0.0);
    }
}

TEST_CASE("submesh and append") {
    TriMesh m = box({0, 0, 0}, {1, 1, 1});
    append(m, box({2, 0, 0}, {3, 1, 1}));
    CHECK(m.num_triangles() == 24);
    const std::vector<std::int32_t> ids{12, 13, 0};
    const TriMesh s = submesh(m, ids);
    CHECK(s.num_triangles() == 3);
    CHECK(triangle_centroid(s, 0).isApprox(triangle_centroid(m, 12)));
    CHECK(triangle_centroid(s, 2).isApprox(triangle_centroid(m, 0)));
    s.validate();
}

TEST_CASE("validate rejects bad indices") {
    TriMesh m = box({0, 0, 0}, {1, 1, 1});
    m.triangles[0] = Tri(0, 1, 99);
    CHECK_THROWS_AS(m.validate(), Error);
}

TEST_CASE("convex hull drops interior and collinear points") {
    std::vector<Vec2> pts{{0, 0}, {1, 0}, {2, 0}, {2, 2}, {0, 2}, {1, 1}, {0, 1}};
    const auto hull = convex_hull_2d(pts);
    CHECK(hull.size() == 4);
}

TEST_CASE("gravity_obb recovers a yawed box") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Frame frame{Vec3::UnitZ(), Vec3::UnitY()};
    for (int trial = 0; trial < 50; ++trial) {
        const double angle = -40.0 + 80.0 * u(rng);
        const Vec3 half(0.2 + u(rng), 0.1 + 0.05 * u(rng), 0.3 + u(rng));
        const Vec3 center(u(rng), u(rng), u(rng));
        const TriMesh m = transformed(box(-half, half), yaw(angle), center);
        const OrientedBox b = gravity_obb(m.vertices, frame);
        CHECK(b.up().isApprox(Vec3::UnitZ()));
        CHECK(b.center.isApprox(center, 1e-9));
        CHECK(b.volume() == doctest::Approx(8 * half.prod()).epsilon(1e-9));
        CHECK(box_yaw_degrees(b, frame) == doctest::Approx(std::fmod(angle + 90.0, 90.0)).epsilon(1e-6));
        CHECK(std::abs(b.front().dot(frame.front)) >= std::abs(b.right().dot(frame.front)));
        for (const auto& p : m.vertices) CHECK(b.contains(p, 1e-9));
    }
}

TEST_CASE("gravity_obb needs points") {
    std::vector<Vec3> none;
    CHECK_THROWS_AS(gravity_obb(none, Frame{}), Error);
}

TEST_CASE("oriented box corners and turn") {
    OrientedBox b;
    b.center = Vec3(1, 2, 3);
    b.half_extents = Vec3(1, 2, 3);
    const auto c = b.corners();
    CHECK(c[0].isApprox(Vec3(0, 0, 0)));
    CHECK(c[7].isApprox(Vec3(2, 4, 6)));
    const OrientedBox t = b.turned();
    CHECK(t.front().isApprox(-b.front()));
    CHECK(t.right().isApprox(-b.right()));
    CHECK(t.up().isApprox(b.up()));
}

TEST_CASE("ray casting agrees with brute force") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    TriMesh m;
    for (int i = 0; i < 40; ++i) {
        const Vec3 lo(u(rng), u(rng), u(rng));
        append(m, box(lo, lo + Vec3::Constant(0.2)));
    }
    const SpatialIndex index(m);
    for (int i = 0; i < 500; ++i) {
        const Vec3 o = 2.0 * Vec3(u(rng), u(rng), u(rng));
        const Vec3 d = Vec3(u(rng), u(rng), u(rng)).normalized();
        const auto a = index.ray_cast(o, d);
        const auto b = index.ray_cast_brute_force(o, d);
        REQUIRE(a.has_value() == b.has_value());
        if (a) {
            CHECK(a->triangle_id == b->triangle_id);
            CHECK(a->distance == doctest::Approx(b->distance));
            CHECK(index.occluded(o, d, 0.0, a->distance + 1e-9));
        }
        const Vec3 q = 1.5 * Vec3(u(rng), u(rng), u(rng));
        CHECK(index.nearest_triangle(q).distance == doctest::Approx(index.nearest_triangle_brute_force(q).distance));
    }
    CHECK_THROWS_AS(index.ray_cast(Vec3::Zero(), Vec3(2, 0, 0)), Error);
}

TEST_CASE("kd-tree knn matches brute force with ties") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> g(0, 5);
    std::vector<Vec3> pts(400);
    for (auto& p : pts) p = Vec3(g(rng), g(rng), g(rng));  // lattice: many ties
    const KdTree tree(pts, 4);
    for (int q = 0; q < 100; ++q) {
        const Vec3 query(g(rng) + 0.5, g(rng), g(rng));
        std::vector<Neighbor> all;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            all.push_back({static_cast<std::int32_t>(i), squared_distance(query, pts[i])});
        }
        std::sort(all.begin(), all.end(), [](const Neighbor& a, const Neighbor& b) {
            return a.distance2 != b.distance2 ? a.distance2 < b.distance2 : a.index < b.index;
        });
        const auto got = tree.knn(query, 7);
        REQUIRE(got.size() == 7);
        for (int k = 0; k < 7; ++k) CHECK(got[k].index == all[k].index);
    }
}

TEST_CASE("GIoU properties") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto random_box = [&] {
        const Vec3 lo(u(rng), u(rng), u(rng));
        return Aabb::from_min_max(lo, lo + Vec3(0.01 + u(rng), 0.01 + u(rng), 0.01 + u(rng)));
    };
    for (int i = 0; i < 200; ++i) {
        const Aabb a = random_box(), b = random_box();
        const double g = giou3d(a, b);
        CHECK(g == doctest::Approx(giou3d(b, a)));
        CHECK(g <= iou3d(a, b) + 1e-12);
        CHECK(g >= -1.0);
        CHECK(g <= 1.0);
        CHECK(giou3d(a, a) == doctest::Approx(1.0));
    }
    const Aabb flat = Aabb::from_min_max(Vec3(0, 0, 0), Vec3(1, 1, 0));
    CHECK_THROWS_AS(giou3d(flat, flat), Error);
    CHECK(giou3d(flat, Aabb::from_min_max(Vec3::Zero(), Vec3::Ones())) == doctest::Approx(0.0));
}
