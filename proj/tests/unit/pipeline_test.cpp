// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "Fixtures.h"
#include "openable/AnnotationIO.h"
#include "openable/Camera.h"
#include "openable/MeshIO.h"
#include "openable/Pipeline.h"

using namespace openable;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Workspace {
    fs::path root, meshes, segs;
    std::vector<testing::Fixture> fixtures;
};

Workspace make_workspace(const std::string& name) {
    Workspace w;
    w.root = fs::temp_directory_path() / "openable_unit" / name;
    fs::remove_all(w.root);
    w.meshes = w.root / "meshes";
    w.segs = w.root / "segs";
    fs::create_directories(w.meshes);
    fs::create_directories(w.segs);
    using namespace openable::testing;
    w.fixtures = {dresser(3), overlay_door_cabinet(HandleSide::Left), chest(true),
                  drawer_over_door(HandleSide::Right), double_door_cabinet()};
    for (std::size_t i = 0; i < w.fixtures.size(); ++i) {
        auto& f = w.fixtures[i];
        f.name = "obj" + std::to_string(i);
        save_mesh(f.mesh, w.meshes / (f.name + ".obj"));
        save_annotation(w.segs / (f.name + ".json"), f.gt, f.frame);
    }
    return w;
}

PipelineInputs inputs_for(const Workspace& w, const std::string& out) {
    return {w.meshes, w.segs, w.root / out, std::nullopt};
}

}  // namespace

TEST_CASE("batch run over ground-truth segmentations") {
    const Workspace w = make_workspace("pipeline_gt");
    PipelineConfig config;
    config.workers = 2;
    const PipelineManifest m = run_pipeline(inputs_for(w, "out"), config);
    CHECK(m.succeeded() == 5);
    CHECK(m.exit_code() == 0);
    for (const auto& f : w.fixtures) {
        const fs::path dir = w.root / "out" / f.name;
        CHECK(fs::exists(dir / (f.name + ".urdf")));
        const TriMesh mesh = load_mesh(w.meshes / (f.name + ".obj"));
        const Annotation a = load_annotation(dir / "segmentation.json", mesh);
        REQUIRE(a.segmentation.parts.size() == f.gt.parts.size());
        for (std::size_t i = 0; i < f.gt.parts.size(); ++i) {
            CHECK(a.segmentation.parts[i].triangle_ids == f.gt.parts[i].triangle_ids);
            REQUIRE(a.segmentation.parts[i].motion.has_value());
            CHECK(a.segmentation.parts[i].motion->type == f.gt.parts[i].motion->type);
        }
        const std::string log = slurp(dir / "log.txt");
        for (const char* stage : {"load", "segmentation", "motion", "interior", "export"}) {
            CHECK(log.find(fmt::format("object={} stage={} status=", f.name, stage)) != std::string::npos);
        }
    }
    const auto doc = read_json(w.root / "out" / "manifest.json");
    CHECK(doc.at("schema_version") == 1);
    CHECK(doc.at("succeeded") == 5);

    // Same inputs, different worker count: byte-identical outputs.
    config.workers = 1;
    run_pipeline(inputs_for(w, "again"), config);
    CHECK(slurp(w.root / "out" / "manifest.json").size() > 0);
    for (const auto& f : w.fixtures) {
        for (const char* file : {"segmentation.json", "log.txt"}) {
            CHECK(slurp(w.root / "out" / f.name / file) == slurp(w.root / "again" / f.name / file));
        }
    }
    auto strip_workers = [](nlohmann::json j) {
        j["config"].erase("workers");
        return j;
    };
    CHECK(strip_workers(read_json(w.root / "out" / "manifest.json")) ==
          strip_workers(read_json(w.root / "again" / "manifest.json")));
}

TEST_CASE("a corrupt mesh fails only its own object") {
    const Workspace w = make_workspace("pipeline_corrupt");
    std::ofstream(w.meshes / "obj2.obj") << "v 0 0 0\nf 1 2 x\n";
    const PipelineManifest m = run_pipeline(inputs_for(w, "out"), PipelineConfig{});
    CHECK(m.succeeded() == 4);
    CHECK(m.failed() == 1);
    CHECK(m.exit_code() == 2);
    const auto doc = read_json(w.root / "out" / "manifest.json");
    const auto& bad = doc.at("objects").at(2);
    CHECK(bad.at("id") == "obj2");
    CHECK(bad.at("status") == "failed");
    CHECK(bad.contains("error_kind"));
    CHECK(slurp(w.root / "out" / "obj2" / "log.txt").find("stage=load status=failed") != std::string::npos);
}

TEST_CASE("missing inputs are global errors") {
    const Workspace w = make_workspace("pipeline_missing");
    PipelineInputs in = inputs_for(w, "out");
    in.seg_dir = w.root / "nowhere";
    CHECK_THROWS_AS(run_pipeline(in, PipelineConfig{}), Error);
    PipelineConfig bad;
    bad.merge_iou = -1.0;
    CHECK_THROWS_AS(run_pipeline(inputs_for(w, "out"), bad), Error);
}

TEST_CASE("view predictions drawn from ground truth recover the parts") {
    const Workspace w = make_workspace("pipeline_views");
    PipelineConfig config;
    config.source = SegmentationSource::Views;
    config.view_width = config.view_height = 160;
    const auto& f = w.fixtures[0];  // dresser
    for (std::size_t i = 1; i < w.fixtures.size(); ++i) fs::remove(w.meshes / (w.fixtures[i].name + ".obj"));
    write_json(w.segs / (f.name + ".frame.json"), {{"up", {0, 0, 1}}, {"front", {0, 1, 0}}});
    const auto cams = default_cameras(f.mesh, f.frame, 3, 160, 160);
    const auto maps = render_index_maps(f.mesh, cams);
    const auto owners = f.gt.owners(f.mesh.num_triangles());
    fs::create_directories(w.segs / f.name);
    for (std::size_t v = 0; v < maps.size(); ++v) {
        ViewPrediction vp{"view_" + std::to_string(v), {}, std::nullopt};
        for (std::size_t p = 0; p < f.gt.parts.size(); ++p) {
            std::vector<std::uint8_t> bits(maps[v].ids.size());
            for (std::size_t k = 0; k < bits.size(); ++k) {
                bits[k] = maps[v].ids[k] >= 0 && owners[maps[v].ids[k]] == static_cast<std::int32_t>(p);
            }
            vp.masks.push_back({f.gt.parts[p].label, 0.99 - 0.01 * p, 160, 160, rle_encode(bits)});
        }
        write_json(w.segs / f.name / fmt::format("view_{}.json", v), view_prediction_to_json(vp));
    }
    const PipelineManifest m = run_pipeline(inputs_for(w, "out"), config);
    REQUIRE(m.succeeded() == 1);
    CHECK(m.objects[0].parts == f.gt.parts.size());
    CHECK(m.objects[0].parts_with_motion == f.gt.parts.size());
}
