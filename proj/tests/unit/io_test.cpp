// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "Fixtures.h"
#include "Oracles.h"
#include "openable/AnnotationIO.h"
#include "openable/Camera.h"
#include "openable/Error.h"
#include "openable/MeshIO.h"
#include "openable/Urdf.h"

using namespace openable;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "openable_unit" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream(path) << text;
}

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::ConfigError;
}

}  // namespace

TEST_CASE("mesh round trip through OBJ and PLY") {
    const fs::path dir = scratch("mesh_io");
    TriMesh m = testing::grid_box({0, 0, 0}, {1, 0.5, 0.25}, 3, 2, 2);
    m.colors.assign(m.num_vertices(), Vec3(64, 128, 191) / 255.0);  // 8-bit representable
    for (const char* ext : {".obj", ".ply"}) {
        const fs::path path = dir / (std::string("m") + ext);
        save_mesh(m, path);
        const TriMesh back = load_mesh(path);
        REQUIRE(back.num_triangles() == m.num_triangles());
        CHECK(testing::same_geometry(back, m, 1e-6));
        CHECK(total_area(back) == doctest::Approx(total_area(m)));
    }
    const TriMesh ply = load_mesh(dir / "m.ply");
    CHECK(ply.colors == m.colors);
}

TEST_CASE("OBJ polygons are fan triangulated and negative indices resolve") {
    const fs::path dir = scratch("obj_quads");
    write_text(dir / "q.obj", "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\nf -4 -3 -2\n");
    const TriMesh m = load_mesh(dir / "q.obj");
    CHECK(m.num_triangles() == 3);
    CHECK(m.triangles[0] == Tri(0, 1, 2));
    CHECK(m.triangles[1] == Tri(0, 2, 3));
    CHECK(total_area(m) == doctest::Approx(1.5));
}

TEST_CASE("mesh loading errors") {
    const fs::path dir = scratch("mesh_errors");
    write_text(dir / "bad.obj", "v 0 0 0\nv 1 0 0\nf 1 2 9\n");
    write_text(dir / "junk.obj", "v zero 0 0\n");
    write_text(dir / "x.stl", "solid\n");
    write_text(dir / "penta.obj", "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0.5 2 0\nv 0 1 0\nf 1 2 3 4 5\n");
    CHECK(kind_of([&] { load_mesh(dir / "penta.obj"); }) == ErrorKind::UnsupportedFace);
    CHECK(kind_of([&] { load_mesh(dir / "bad.obj"); }) == ErrorKind::ParseError);
    CHECK(kind_of([&] { load_mesh(dir / "junk.obj"); }) == ErrorKind::ParseError);
    CHECK_THROWS_AS(load_mesh(dir / "x.stl"), Error);
    CHECK_THROWS_AS(load_mesh(dir / "missing.obj"), Error);
}

TEST_CASE("annotation round trip") {
    const auto f = testing::overlay_door_cabinet(testing::HandleSide::Right);
    const fs::path dir = scratch("annotation");
    save_annotation(dir / "a.json", f.gt, f.frame);
    const Annotation a = load_annotation(dir / "a.json", f.mesh);
    CHECK(a.frame.up.isApprox(f.frame.up));
    CHECK(a.frame.front.isApprox(f.frame.front));
    REQUIRE(a.segmentation.parts.size() == f.gt.parts.size());
    for (std::size_t i = 0; i < f.gt.parts.size(); ++i) {
        const auto& p = a.segmentation.parts[i];
        const auto& q = f.gt.parts[i];
        CHECK(p.id == q.id);
        CHECK(p.label == q.label);
        CHECK(p.triangle_ids == q.triangle_ids);
        REQUIRE(p.motion.has_value());
        CHECK(p.motion->type == q.motion->type);
        CHECK(p.motion->axis.isApprox(q.motion->axis));
        CHECK(p.motion->origin->isApprox(*q.motion->origin));
    }
    CHECK(a.segmentation.base_triangles == f.gt.base_triangles);
}

TEST_CASE("annotation schema errors") {
    using nlohmann::json;
    const json overlap = {{"parts",
                           {{{"id", "a"}, {"label", "door"}, {"triangles", {0, 1}}},
                            {{"id", "b"}, {"label", "door"}, {"triangles", {1, 2}}}}}};
    CHECK(kind_of([&] { parse_annotation(overlap, 4); }) == ErrorKind::OverlapError);
    const json range = {{"parts", {{{"id", "a"}, {"label", "door"}, {"triangles", {7}}}}}};
    CHECK(kind_of([&] { parse_annotation(range, 4); }) == ErrorKind::IndexOutOfRange);
    const json label = {{"parts", {{{"id", "a"}, {"label", "window"}, {"triangles", {0}}}}}};
    CHECK_THROWS_AS(parse_annotation(label, 4), Error);
    const json motion = {{"parts",
                          {{{"id", "a"},
                            {"label", "door"},
                            {"triangles", {0}},
                            {"motion", {{"type", "revolute"}, {"axis", {0, 0, 1}}}}}}}};
    CHECK(kind_of([&] { parse_annotation(motion, 4); }) == ErrorKind::InvalidMotion);
}

TEST_CASE("RLE round trip") {
    std::mt19937_64 rng(8);
    std::bernoulli_distribution bit(0.3);
    for (int trial = 0; trial < 50; ++trial) {
        const int w = 1 + trial % 13, h = 1 + trial % 7;
        std::vector<std::uint8_t> mask(static_cast<std::size_t>(w * h));
        for (auto& b : mask) b = bit(rng);
        CHECK(rle_decode(rle_encode(mask), w, h) == mask);
    }
    CHECK(rle_encode({1, 1, 0}) == std::vector<std::int64_t>{0, 2, 1});
    CHECK_THROWS_AS(rle_decode({1, 2}, 2, 2), Error);
}

TEST_CASE("view prediction and camera documents") {
    const PinholeCamera cam =
        PinholeCamera::look_at(Vec3(0, -3, 1), Vec3::Zero(), Vec3::UnitZ(), 45.0, 64, 48);
    cam.validate();
    const PinholeCamera back = camera_from_json(camera_to_json(cam));
    CHECK(back.rotation.isApprox(cam.rotation));
    CHECK(back.position.isApprox(cam.position));
    CHECK(back.width == 64);
    CHECK(back.pixel_ray(32, 24).isApprox(cam.pixel_ray(32, 24)));
    // Center pixel looks at the target.
    CHECK(cam.pixel_ray(32, 24).dot((Vec3::Zero() - cam.position).normalized()) > 0.999);

    ViewPrediction vp{"v0", {{PartLabel::Door, 0.95, 4, 2, rle_encode({0, 1, 1, 0, 0, 1, 1, 0})}}, std::nullopt};
    const ViewPrediction pb = parse_view_prediction(view_prediction_to_json(vp));
    REQUIRE(pb.masks.size() == 1);
    CHECK(pb.masks[0].pixels == vp.masks[0].pixels);
    CHECK(pb.masks[0].label == PartLabel::Door);

    nlohmann::json bad = camera_to_json(cam);
    bad["intrinsics"] = {-1.0, 1.0, 0.0, 0.0};
    CHECK(kind_of([&] { camera_from_json(bad); }) == ErrorKind::InvalidCamera);
}

TEST_CASE("URDF export round trip") {
    const auto f = testing::drawer_over_door(testing::HandleSide::Right);
    const ArticulatedObject obj = build_articulated(f.mesh, f.gt, f.frame, "unit_cabinet");
    const fs::path dir = scratch("urdf");
    const UrdfManifest manifest = export_urdf(obj, dir);
    CHECK(manifest.meshes.size() == obj.parts.size() + 1);
    const UrdfModel model = parse_urdf(manifest.urdf);
    CHECK(model.name == "unit_cabinet");
    CHECK(model.links.size() == obj.parts.size() + 1);
    REQUIRE(model.joints.size() == obj.parts.size());
    for (std::size_t i = 0; i < obj.parts.size(); ++i) {
        const auto& part = obj.parts[i];
        const auto& j = model.joints[i];
        CHECK(j.type == (part.motion.type == MotionType::Revolute ? "revolute" : "prismatic"));
        CHECK(j.axis.isApprox(part.motion.axis, 1e-6));
        const MotionRange r = default_motion_range(part);
        CHECK(j.lower == doctest::Approx(r.lower));
        CHECK(j.upper == doctest::Approx(r.upper));
        if (part.motion.origin) CHECK(j.origin_xyz.isApprox(*part.motion.origin, 1e-6));
        // Visual offset restores object coordinates.
        const UrdfLink* link = nullptr;
        for (const auto& l : model.links) {
            if (l.name == j.child) link = &l;
        }
        REQUIRE(link != nullptr);
        CHECK((j.origin_xyz + link->visual_xyz).norm() < 1e-6);
        const TriMesh m = load_mesh(dir / link->mesh);
        CHECK(testing::same_geometry(m, part.mesh, 1e-6));
    }
}
