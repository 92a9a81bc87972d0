// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <random>

#include "Fixtures.h"
#include "Oracles.h"
#include "openable/Error.h"
#include "openable/Sampling.h"

using namespace openable;

namespace {

bool on_triangle(const TriMesh& m, std::int32_t t, const Vec3& p) {
    const Vec3 a = m.vertices[m.triangles[t][0]], b = m.vertices[m.triangles[t][1]], c = m.vertices[m.triangles[t][2]];
    const Vec3 n = (b - a).cross(c - a);
    if (std::abs(n.normalized().dot(p - a)) > 1e-9) return false;
    const double area = n.norm();
    const double s = (b - p).cross(c - p).norm() + (c - p).cross(a - p).norm() + (a - p).cross(b - p).norm();
    return std::abs(s - area) <= 1e-9 * std::max(1.0, area);
}

}  // namespace

TEST_CASE("surface samples lie on their source triangles") {
    const TriMesh m = testing::grid_box({0, 0, 0}, {2, 1, 0.5}, 4, 2, 1);
    const SampledPointCloud c = sample_surface(m, 5000, true, 42);
    c.validate(m.num_triangles());
    CHECK(c.size() == 5000 + m.num_vertices());
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(on_triangle(m, c.source_triangle[i], c.positions[i]));
    for (std::size_t i = 5000; i < c.size(); ++i) CHECK(c.vertex_id[i] >= 0);
}

TEST_CASE("sampling is deterministic per seed and area proportional") {
    TriMesh m = testing::box({0, 0, 0}, {1, 1, 1});
    append(m, testing::box({2, 0, 0}, {4, 2, 2}));  // 4x the area
    const SampledPointCloud a = sample_surface(m, 20000, false, 7);
    const SampledPointCloud b = sample_surface(m, 20000, false, 7);
    const SampledPointCloud c = sample_surface(m, 20000, false, 8);
    CHECK(a.positions == b.positions);
    CHECK(a.positions != c.positions);
    std::size_t big = 0;
    for (auto t : a.source_triangle) big += t >= 12;
    CHECK(static_cast<double>(big) / a.size() == doctest::Approx(0.8).epsilon(0.03));
}

TEST_CASE("sampling a zero-area mesh fails") {
    TriMesh m;
    m.vertices = {Vec3::Zero(), Vec3::UnitX(), Vec3(2, 0, 0)};
    m.triangles = {Tri(0, 1, 2)};
    CHECK_THROWS_AS(sample_surface(m, 10, false, 0), Error);
}

TEST_CASE("farthest point sampling") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Vec3> pts(3000);
    for (auto& p : pts) p = Vec3(u(rng), u(rng), u(rng));
    const auto ids = farthest_point_sample(pts, 300);
    CHECK(ids == testing::fps_reference(pts, 300));
    std::vector<std::int32_t> sorted = ids;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
    CHECK_THROWS_AS(farthest_point_sample(pts, 0), Error);
    CHECK_THROWS_AS(farthest_point_sample(pts, 3001), Error);
}

TEST_CASE("knn propagation") {
    SampledPointCloud labeled;
    labeled.positions = {Vec3(0, 0, 0), Vec3(0.1, 0, 0), Vec3(1, 0, 0), Vec3(1.1, 0, 0), Vec3(1.2, 0, 0)};
    labeled.source_triangle.assign(5, 0);
    labeled.vertex_id.assign(5, -1);
    labeled.normals.assign(5, Vec3::UnitZ());
    labeled.labels = std::vector<PointLabel>{
        {0, PartLabel::Door, 1.0}, {0, PartLabel::Door, 1.0}, {1, PartLabel::Drawer, 1.0},
        {1, PartLabel::Drawer, 1.0}, {-1, PartLabel::Base, 0.5}};
    SampledPointCloud query = labeled;
    query.labels.reset();
    query.positions = {Vec3(0.05, 0.01, 0), Vec3(1.05, 0, 0), Vec3(1.2, 0, 0)};
    query.source_triangle.assign(3, 0);
    query.vertex_id.assign(3, -1);
    query.normals.assign(3, Vec3::UnitZ());
    const auto out = knn_propagate(labeled, query, 3);
    CHECK(out[0].instance == 0);
    CHECK(out[1].instance == 1);
    CHECK(out[2].instance == -1);  // exact hit decides
    SampledPointCloud unlabeled = labeled;
    unlabeled.labels.reset();
    CHECK_THROWS_AS(knn_propagate(unlabeled, query, 3), Error);
}

TEST_CASE("per-part sampling covers every part") {
    const auto f = testing::dresser(3);
    const SampledPointCloud c = sample_per_part(f.mesh, f.gt, 2000, 4000, 3);
    REQUIRE(c.labels.has_value());
    CHECK(c.size() == 4000);
    std::vector<int> seen(f.gt.parts.size() + 1, 0);
    for (const auto& l : *c.labels) seen[l.instance + 1] = 1;
    for (int s : seen) CHECK(s == 1);
    const auto owners = f.gt.owners(f.mesh.num_triangles());
    for (std::size_t i = 0; i < c.size(); ++i) CHECK((*c.labels)[i].instance == owners[c.source_triangle[i]]);
}

TEST_CASE("triangle vote and uncovered triangles") {
    const TriMesh m = testing::box({0, 0, 0}, {1, 1, 1});
    SampledPointCloud c = sample_surface(m, 0, true, 0);
    std::vector<PointLabel> labels(c.size(), PointLabel{0, PartLabel::Door, 1.0});
    c.labels = labels;
    const auto votes = triangle_vote(m, c);
    CHECK(votes.size() == 12);
    for (const auto& v : votes) CHECK(v.instance == 0);
    SampledPointCloud sparse;
    sparse.positions = {Vec3::Zero()};
    sparse.normals = {Vec3::UnitZ()};
    sparse.source_triangle = {0};
    sparse.vertex_id = {-1};
    sparse.labels = std::vector<PointLabel>{PointLabel{}};
    CHECK_THROWS_AS(triangle_vote(m, sparse), Error);
}
