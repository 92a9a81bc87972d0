// SPDX-License-Identifier: MIT
#include "openable/Pipeline.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "openable/AnnotationIO.h"
#include "openable/Camera.h"
#include "openable/Fusion.h"
#include "openable/Interior.h"
#include "openable/MeshIO.h"
#include "openable/Sampling.h"
#include "openable/Urdf.h"

namespace openable {
namespace fs = std::filesystem;

namespace {

std::uint64_t object_seed(std::uint64_t seed, const std::string& id) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : id) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return seed ^ h;
}

Frame prediction_frame(const PipelineInputs& inputs, const std::string& id) {
    fs::path path = inputs.seg_dir / (id + ".frame.json");
    if (!fs::exists(path)) return Frame{};
    return frame_from_json(read_json(path));
}

PartSegmentation segment_from_point_cloud(const TriMesh& mesh, const std::string& id,
                                          const PipelineInputs& inputs, const PipelineConfig& config) {
    PointCloudPrediction pred = load_pc_prediction(inputs.seg_dir / (id + ".pc.json"));
    SampledPointCloud cloud = load_point_cloud(inputs.seg_dir / (id + ".pc.ply"));
    SampledPointCloud full = sample_surface(mesh, config.sample_points, true, object_seed(config.seed, id));
    return reconcile_pc_masks(pred, cloud, mesh, &full, static_cast<std::size_t>(config.knn_k), config.merge_iou);
}

PartSegmentation segment_from_views(const TriMesh& mesh, const Frame& frame, const std::string& id,
                                    const PipelineInputs& inputs, const PipelineConfig& config) {
    fs::path dir = inputs.seg_dir / id;
    if (!fs::is_directory(dir)) throw Error(ErrorKind::IoError, "missing view directory " + dir.string());
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        const auto name = e.path().filename().string();
        if (e.is_regular_file() && name.rfind("view_", 0) == 0 && e.path().extension() == ".json") {
            files.push_back(e.path());
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw Error(ErrorKind::EmptyInput, "no view predictions in " + dir.string());

    std::vector<ViewPrediction> preds;
    for (const auto& f : files) preds.push_back(load_view_prediction(f));
    auto defaults = default_cameras(mesh, frame, static_cast<int>(preds.size()), config.view_width,
                                    config.view_height);
    std::vector<PinholeCamera> cameras;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        cameras.push_back(preds[i].camera ? camera_from_json(*preds[i].camera) : defaults[i]);
    }
    auto maps = render_index_maps(mesh, cameras);
    std::vector<ViewMask> masks;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        auto lifted = lift_view_masks(maps[i], preds[i], config.confidence_threshold);
        masks.insert(masks.end(), std::make_move_iterator(lifted.begin()), std::make_move_iterator(lifted.end()));
    }
    return reconcile_view_masks(std::move(masks), mesh, config.merge_iou);
}

class ObjectLog {
public:
    explicit ObjectLog(std::string id) : id_(std::move(id)) {}

    void stage(std::string_view name, std::string_view status, const std::string& detail = {}) {
        std::string line = fmt::format("object={} stage={} status={}", id_, name, status);
        if (!detail.empty()) line += " " + detail;
        lines_.push_back(line);
        if (status == "ok") {
            spdlog::info("{}", line);
        } else {
            spdlog::warn("{}", line);
        }
    }

    void write(const fs::path& path) const {
        std::ofstream out(path);
        for (const auto& l : lines_) out << l << '\n';
    }

private:
    std::string id_;
    std::vector<std::string> lines_;
};

}  // namespace

std::size_t PipelineManifest::succeeded() const {
    return static_cast<std::size_t>(
        std::count_if(objects.begin(), objects.end(), [](const ObjectOutcome& o) { return o.ok; }));
}

std::size_t PipelineManifest::failed() const { return objects.size() - succeeded(); }

int PipelineManifest::exit_code() const { return failed() == 0 ? 0 : 2; }

nlohmann::json PipelineManifest::to_json() const {
    nlohmann::json doc;
    doc["schema_version"] = 1;
    doc["total"] = objects.size();
    doc["succeeded"] = succeeded();
    doc["failed"] = failed();
    doc["config"] = config.to_json();
    doc["objects"] = nlohmann::json::array();
    for (const auto& o : objects) {
        nlohmann::json j = {{"id", o.id}, {"status", o.ok ? "ok" : "failed"}};
        if (o.ok) {
            j["urdf"] = o.urdf.generic_string();
            j["parts"] = o.parts;
            j["parts_with_motion"] = o.parts_with_motion;
        } else {
            j["error"] = o.error;
            if (o.error_kind) j["error_kind"] = std::string(to_string(*o.error_kind));
        }
        j["diagnostics"] = o.diagnostics;
        doc["objects"].push_back(std::move(j));
    }
    return doc;
}

std::vector<fs::path> list_meshes(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw Error(ErrorKind::IoError, "not a directory: " + dir.string());
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        auto ext = e.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
        if (ext == ".obj" || ext == ".ply" || ext == ".glb" || ext == ".gltf") out.push_back(e.path());
    }
    std::sort(out.begin(), out.end(), [](const fs::path& a, const fs::path& b) {
        return a.stem() != b.stem() ? a.stem() < b.stem() : a < b;
    });
    return out;
}

ObjectOutcome process_object(const fs::path& mesh_path, const PipelineInputs& inputs, const PipelineConfig& config,
                             const MotionTypeStats& stats) {
    ObjectOutcome out;
    out.id = mesh_path.stem().string();
    ObjectLog log(out.id);
    const fs::path obj_dir = inputs.out_dir / out.id;
    std::string stage = "load";
    try {
        fs::create_directories(obj_dir);
        TriMesh mesh = load_mesh(mesh_path);
        log.stage(stage, "ok", fmt::format("triangles={}", mesh.num_triangles()));

        stage = "segmentation";
        PartSegmentation seg;
        Frame frame;
        switch (config.source) {
            case SegmentationSource::GroundTruth: {
                Annotation a = load_annotation(inputs.seg_dir / (out.id + ".json"), mesh);
                seg = std::move(a.segmentation);
                frame = a.frame;
                break;
            }
            case SegmentationSource::PointCloud:
                frame = prediction_frame(inputs, out.id);
                seg = segment_from_point_cloud(mesh, out.id, inputs, config);
                break;
            case SegmentationSource::Views:
                frame = prediction_frame(inputs, out.id);
                seg = segment_from_views(mesh, frame, out.id, inputs, config);
                break;
        }
        log.stage(stage, "ok", fmt::format("source={} parts={}", to_string(config.source), seg.parts.size()));

        stage = "motion";
        MotionOptions mopts;
        mopts.handle.bins = config.handle_bins;
        mopts.handle.min_fraction = config.handle_min_fraction;
        mopts.handle.max_area_fraction = config.handle_max_area_fraction;
        std::vector<std::string> diag;
        seg = predict_motion(seg, mesh, frame, stats, mopts, &diag);
        out.parts = seg.parts.size();
        out.parts_with_motion = static_cast<std::size_t>(
            std::count_if(seg.parts.begin(), seg.parts.end(), [](const PartInstance& p) { return p.motion.has_value(); }));
        log.stage(stage, diag.empty() ? "ok" : "partial",
                  fmt::format("with_motion={}/{}", out.parts_with_motion, out.parts));
        out.diagnostics.insert(out.diagnostics.end(), diag.begin(), diag.end());
        save_annotation(obj_dir / "segmentation.json", seg, frame);

        stage = "interior";
        ArticulatedObject obj = build_articulated(mesh, seg, frame, out.id);
        if (config.complete_interior) {
            diag.clear();
            obj = complete_interiors(obj, {config.corner_margin, config.wall_thickness}, &diag);
            log.stage(stage, diag.empty() ? "ok" : "partial");
            out.diagnostics.insert(out.diagnostics.end(), diag.begin(), diag.end());
        } else {
            log.stage(stage, "skipped");
        }

        stage = "export";
        UrdfManifest files = export_urdf(obj, obj_dir);
        out.urdf = fs::relative(files.urdf, inputs.out_dir);
        log.stage(stage, "ok", fmt::format("links={}", obj.parts.size() + 1));
        out.ok = true;
    } catch (const Error& e) {
        out.error = e.what();
        out.error_kind = e.kind();
        log.stage(stage, "failed", fmt::format("error=\"{}\"", e.what()));
    } catch (const std::exception& e) {
        out.error = e.what();
        log.stage(stage, "failed", fmt::format("error=\"{}\"", e.what()));
    }
    try {
        log.write(obj_dir / "log.txt");
    } catch (const std::exception& e) {
        spdlog::warn("could not write log for '{}': {}", out.id, e.what());
    }
    return out;
}

PipelineManifest run_pipeline(const PipelineInputs& inputs, const PipelineConfig& config) {
    config.validate();
    if (!fs::is_directory(inputs.seg_dir)) {
        throw Error(ErrorKind::ConfigError, "segmentation directory not found: " + inputs.seg_dir.string());
    }
    MotionTypeStats stats = MotionTypeStats::defaults();
    if (inputs.stats) {
        try {
            stats = MotionTypeStats::from_json(read_json(*inputs.stats));
        } catch (const Error& e) {
            throw Error(ErrorKind::ConfigError, fmt::format("bad stats file: {}", e.what()));
        }
    }
    std::vector<fs::path> meshes;
    try {
        meshes = list_meshes(inputs.mesh_dir);
        fs::create_directories(inputs.out_dir);
    } catch (const fs::filesystem_error& e) {
        throw Error(ErrorKind::IoError, e.what());
    }

    PipelineManifest manifest;
    manifest.config = config;
    manifest.objects.resize(meshes.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < meshes.size(); i = next++) {
            manifest.objects[i] = process_object(meshes[i], inputs, config, stats);
        }
    };
    const int n = std::max(1, std::min<int>(config.workers, static_cast<int>(meshes.size())));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    std::stable_sort(manifest.objects.begin(), manifest.objects.end(),
                     [](const ObjectOutcome& a, const ObjectOutcome& b) { return a.id < b.id; });
    write_json(inputs.out_dir / "manifest.json", manifest.to_json());
    spdlog::info("pipeline finished: {}/{} objects succeeded", manifest.succeeded(), manifest.objects.size());
    return manifest;
}

int workers_from_env(int fallback) {
    const char* v = std::getenv("OPENABLE_WORKERS");
    if (!v || !*v) return fallback;
    char* end = nullptr;
    long n = std::strtol(v, &end, 10);
    if (*end != '\0' || n <= 0 || n > 4096) {
        throw Error(ErrorKind::ConfigError, fmt::format("OPENABLE_WORKERS='{}' is not a positive integer", v));
    }
    return static_cast<int>(n);
}

}  // namespace openable
