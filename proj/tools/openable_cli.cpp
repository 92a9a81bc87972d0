// SPDX-License-Identifier: MIT
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "openable/AnnotationIO.h"
#include "openable/Config.h"
#include "openable/Fusion.h"
#include "openable/Interior.h"
#include "openable/MeshIO.h"
#include "openable/Metrics.h"
#include "openable/Motion.h"
#include "openable/Pipeline.h"
#include "openable/Sampling.h"
#include "openable/Urdf.h"

namespace fs = std::filesystem;
using namespace openable;

namespace {

Frame load_frame(const std::string& frame_path, const std::string& seg_path) {
    if (!frame_path.empty()) {
        auto doc = read_json(frame_path);
        return frame_from_json(doc.contains("frame") ? doc["frame"] : doc);
    }
    if (!seg_path.empty()) {
        auto doc = read_json(seg_path);
        if (doc.contains("frame")) return frame_from_json(doc["frame"]);
    }
    return Frame{};
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Openable part segmentation, motion prediction and interior completion for furniture meshes"};
    app.require_subcommand(1);
    std::string log_level = "info";
    app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off")->capture_default_str();

    // sample
    auto* sample = app.add_subcommand("sample", "Sample a point cloud from a mesh surface");
    std::string s_mesh, s_seg, s_out;
    std::size_t s_points = 1'000'000, s_fps = 0, s_per_part = 0;
    bool s_no_vertices = false;
    std::uint64_t s_seed = 0;
    sample->add_option("--mesh", s_mesh, "Input mesh")->required();
    sample->add_option("-n,--points", s_points, "Number of surface samples")->capture_default_str();
    sample->add_option("--fps", s_fps, "Downsample to this many points by farthest point sampling");
    sample->add_option("--seg", s_seg, "Annotation used to label the points");
    sample->add_option("--per-part", s_per_part, "Samples per part before FPS (needs --seg and --fps)");
    sample->add_flag("--no-vertices", s_no_vertices, "Do not append mesh vertices");
    sample->add_option("--seed", s_seed)->capture_default_str();
    sample->add_option("-o,--out", s_out, "Output PLY")->required();

    // fuse-views
    auto* fv = app.add_subcommand("fuse-views", "Lift per-view 2D masks to a mesh segmentation");
    std::string fv_mesh, fv_frame, fv_out;
    std::vector<std::string> fv_views;
    double fv_threshold = 0.9, fv_merge = 0.8;
    int fv_width = 512, fv_height = 512;
    fv->add_option("--mesh", fv_mesh)->required();
    fv->add_option("--views", fv_views, "View prediction JSON files (sorted by name)")->required();
    fv->add_option("--frame", fv_frame, "Frame JSON {up, front}");
    fv->add_option("--threshold", fv_threshold, "Mask confidence threshold")->capture_default_str();
    fv->add_option("--merge-iou", fv_merge)->capture_default_str();
    fv->add_option("--width", fv_width, "Default camera width")->capture_default_str();
    fv->add_option("--height", fv_height, "Default camera height")->capture_default_str();
    fv->add_option("-o,--out", fv_out, "Output annotation JSON")->required();

    // fuse-pc
    auto* fp = app.add_subcommand("fuse-pc", "Map point-cloud instances back to mesh triangles");
    std::string fp_mesh, fp_pred, fp_cloud, fp_frame, fp_out;
    std::size_t fp_points = 1'000'000, fp_k = 3;
    double fp_merge = 0.8;
    std::uint64_t fp_seed = 0;
    fp->add_option("--mesh", fp_mesh)->required();
    fp->add_option("--pred", fp_pred, "Instance prediction JSON")->required();
    fp->add_option("--cloud", fp_cloud, "Point cloud PLY the prediction refers to")->required();
    fp->add_option("--frame", fp_frame, "Frame JSON {up, front}");
    fp->add_option("--points", fp_points, "Dense resample size (0 votes with the cloud directly)")
        ->capture_default_str();
    fp->add_option("-k", fp_k, "Neighbors for label propagation")->capture_default_str();
    fp->add_option("--merge-iou", fp_merge)->capture_default_str();
    fp->add_option("--seed", fp_seed)->capture_default_str();
    fp->add_option("-o,--out", fp_out, "Output annotation JSON")->required();

    // predict-motion
    auto* pm = app.add_subcommand("predict-motion", "Predict joint parameters for every openable part");
    std::string pm_mesh, pm_seg, pm_stats, pm_out;
    int pm_bins = 32;
    pm->add_option("--mesh", pm_mesh)->required();
    pm->add_option("--seg", pm_seg, "Annotation JSON with frame")->required();
    pm->add_option("--stats", pm_stats, "Motion-type statistics {label: {prismatic: n, revolute: n}}");
    pm->add_option("--bins", pm_bins, "Handle depth histogram bins")->capture_default_str();
    pm->add_option("-o,--out", pm_out, "Output annotation JSON")->required();

    // complete-interior
    auto* ci = app.add_subcommand("complete-interior", "Add drawer bodies behind prismatic parts");
    std::string ci_mesh, ci_seg, ci_out, ci_urdf;
    double ci_margin = 1.25, ci_thickness = 0.0;
    ci->add_option("--mesh", ci_mesh)->required();
    ci->add_option("--seg", ci_seg, "Annotation JSON with motions")->required();
    ci->add_option("--corner-margin", ci_margin)->capture_default_str();
    ci->add_option("--thickness", ci_thickness, "Wall thickness (0 picks a default)")->capture_default_str();
    ci->add_option("-o,--out", ci_out, "Output mesh with the completed interiors");
    ci->add_option("--urdf", ci_urdf, "Also export a URDF into this directory");

    // strip-interior
    auto* si = app.add_subcommand("strip-interior", "Remove geometry that is not visible from outside");
    std::string si_mesh, si_out;
    int si_views = 64, si_res = 512;
    si->add_option("--mesh", si_mesh)->required();
    si->add_option("--views", si_views)->capture_default_str();
    si->add_option("--res", si_res)->capture_default_str();
    si->add_option("-o,--out", si_out)->required();

    // add-countertop
    auto* ct = app.add_subcommand("add-countertop", "Close an open top with a thin slab");
    std::string ct_mesh, ct_frame, ct_out;
    int ct_grid = 32;
    ct->add_option("--mesh", ct_mesh)->required();
    ct->add_option("--frame", ct_frame, "Frame or annotation JSON");
    ct->add_option("--grid", ct_grid)->capture_default_str();
    ct->add_option("-o,--out", ct_out)->required();

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "Score predicted segmentations and motions");
    std::string ev_gt, ev_pred, ev_meshes, ev_out, ev_table, ev_config;
    ev->add_option("--gt-dir", ev_gt, "Directory of <id>.json annotations")->required();
    ev->add_option("--pred-dir", ev_pred, "Directory of <id>.json predictions")->required();
    ev->add_option("--mesh-dir", ev_meshes, "Directory of <id> meshes (defaults to --gt-dir)");
    ev->add_option("--config", ev_config, "Config JSON for thresholds");
    ev->add_option("--out", ev_out, "Report JSON")->required();
    ev->add_option("--table", ev_table, "Markdown table");

    // export-urdf
    auto* eu = app.add_subcommand("export-urdf", "Write an articulated URDF from a segmentation with motions");
    std::string eu_mesh, eu_seg, eu_out, eu_name;
    eu->add_option("--mesh", eu_mesh)->required();
    eu->add_option("--seg", eu_seg, "Annotation JSON with motions")->required();
    eu->add_option("--name", eu_name, "Robot name (defaults to the mesh stem)");
    eu->add_option("-o,--out", eu_out, "Output directory")->required();

    // pipeline
    auto* pl = app.add_subcommand("pipeline", "Batch segmentation, motion, interior and export");
    std::string pl_meshes, pl_seg, pl_out, pl_config, pl_stats, pl_source, pl_dump;
    std::optional<int> pl_workers;
    std::optional<std::uint64_t> pl_seed;
    std::optional<double> pl_conf, pl_merge;
    std::optional<std::size_t> pl_points;
    pl->add_option("--meshes", pl_meshes, "Mesh directory")->required();
    pl->add_option("--seg-dir", pl_seg, "Segmentation input directory")->required();
    pl->add_option("--seg-source", pl_source, "gt, pc-pred or view-pred");
    pl->add_option("--out", pl_out, "Output directory")->required();
    pl->add_option("--config", pl_config, "Config JSON");
    pl->add_option("--stats", pl_stats, "Motion-type statistics JSON");
    pl->add_option("--workers", pl_workers, "Worker threads (default: OPENABLE_WORKERS or 1)");
    pl->add_option("--seed", pl_seed);
    pl->add_option("--confidence-threshold", pl_conf);
    pl->add_option("--merge-iou", pl_merge);
    pl->add_option("--sample-points", pl_points);
    pl->add_option("--dump-config", pl_dump, "Write the effective config to this file");

    CLI11_PARSE(app, argc, argv);
    spdlog::set_level(spdlog::level::from_str(log_level));

    try {
        if (*sample) {
            TriMesh mesh = load_mesh(s_mesh);
            SampledPointCloud cloud;
            if (s_per_part > 0) {
                if (s_seg.empty() || s_fps == 0) throw Error(ErrorKind::ConfigError, "--per-part needs --seg and --fps");
                Annotation a = load_annotation(s_seg, mesh);
                cloud = sample_per_part(mesh, a.segmentation, s_per_part, s_fps, s_seed);
            } else {
                cloud = sample_surface(mesh, s_points, !s_no_vertices, s_seed);
                if (!s_seg.empty()) {
                    Annotation a = load_annotation(s_seg, mesh);
                    auto owners = a.segmentation.owners(mesh.num_triangles());
                    std::vector<PointLabel> labels(cloud.size());
                    for (std::size_t i = 0; i < cloud.size(); ++i) {
                        std::int32_t o = owners[cloud.source_triangle[i]];
                        if (o >= 0) labels[i] = {o, a.segmentation.parts[o].label, a.segmentation.parts[o].confidence};
                    }
                    cloud.labels = std::move(labels);
                }
                if (s_fps > 0) cloud = subset(cloud, farthest_point_sample(cloud.positions, s_fps));
            }
            save_point_cloud(cloud, s_out);
            spdlog::info("wrote {} points to {}", cloud.size(), s_out);
        } else if (*fv) {
            TriMesh mesh = load_mesh(fv_mesh);
            Frame frame = load_frame(fv_frame, "");
            std::sort(fv_views.begin(), fv_views.end());
            std::vector<ViewPrediction> preds;
            for (const auto& v : fv_views) preds.push_back(load_view_prediction(v));
            auto defaults = default_cameras(mesh, frame, static_cast<int>(preds.size()), fv_width, fv_height);
            std::vector<PinholeCamera> cameras;
            for (std::size_t i = 0; i < preds.size(); ++i) {
                cameras.push_back(preds[i].camera ? camera_from_json(*preds[i].camera) : defaults[i]);
            }
            auto maps = render_index_maps(mesh, cameras);
            std::vector<ViewMask> masks;
            for (std::size_t i = 0; i < preds.size(); ++i) {
                auto lifted = lift_view_masks(maps[i], preds[i], fv_threshold);
                masks.insert(masks.end(), lifted.begin(), lifted.end());
            }
            PartSegmentation seg = reconcile_view_masks(std::move(masks), mesh, fv_merge);
            save_annotation(fv_out, seg, frame);
            spdlog::info("{} parts written to {}", seg.parts.size(), fv_out);
        } else if (*fp) {
            TriMesh mesh = load_mesh(fp_mesh);
            Frame frame = load_frame(fp_frame, "");
            PointCloudPrediction pred = load_pc_prediction(fp_pred);
            SampledPointCloud cloud = load_point_cloud(fp_cloud);
            PartSegmentation seg;
            if (fp_points > 0) {
                SampledPointCloud full = sample_surface(mesh, fp_points, true, fp_seed);
                seg = reconcile_pc_masks(pred, cloud, mesh, &full, fp_k, fp_merge);
            } else {
                seg = reconcile_pc_masks(pred, cloud, mesh, nullptr, fp_k, fp_merge);
            }
            save_annotation(fp_out, seg, frame);
            spdlog::info("{} parts written to {}", seg.parts.size(), fp_out);
        } else if (*pm) {
            TriMesh mesh = load_mesh(pm_mesh);
            Annotation a = load_annotation(pm_seg, mesh);
            MotionTypeStats stats =
                pm_stats.empty() ? MotionTypeStats::defaults() : MotionTypeStats::from_json(read_json(pm_stats));
            MotionOptions opts;
            opts.handle.bins = pm_bins;
            std::vector<std::string> diag;
            PartSegmentation seg = predict_motion(a.segmentation, mesh, a.frame, stats, opts, &diag);
            save_annotation(pm_out, seg, a.frame);
            for (const auto& d : diag) spdlog::warn("{}", d);
        } else if (*ci) {
            if (ci_out.empty() && ci_urdf.empty()) throw Error(ErrorKind::ConfigError, "give --out and/or --urdf");
            TriMesh mesh = load_mesh(ci_mesh);
            Annotation a = load_annotation(ci_seg, mesh);
            ArticulatedObject obj =
                build_articulated(mesh, a.segmentation, a.frame, fs::path(ci_mesh).stem().string());
            std::vector<std::string> diag;
            obj = complete_interiors(obj, {ci_margin, ci_thickness}, &diag);
            for (const auto& d : diag) spdlog::warn("{}", d);
            if (!ci_out.empty()) {
                TriMesh merged = obj.base;
                for (const auto& p : obj.parts) append(merged, p.mesh);
                save_mesh(merged, ci_out);
            }
            if (!ci_urdf.empty()) export_urdf(obj, ci_urdf);
        } else if (*si) {
            TriMesh mesh = load_mesh(si_mesh);
            TriMesh kept = strip_interior(mesh, si_views, si_res, si_res);
            spdlog::info("kept {} of {} triangles", kept.num_triangles(), mesh.num_triangles());
            save_mesh(kept, si_out);
        } else if (*ct) {
            TriMesh mesh = load_mesh(ct_mesh);
            Frame frame = load_frame(ct_frame, "");
            spdlog::info("top coverage {:.3f}", top_coverage(mesh, frame, ct_grid));
            save_mesh(add_countertop(mesh, frame, ct_grid), ct_out);
        } else if (*ev) {
            PipelineConfig cfg = ev_config.empty() ? PipelineConfig{} : PipelineConfig::load(ev_config);
            EvalOptions opts;
            opts.iou_threshold = cfg.iou_threshold;
            opts.tolerances = {cfg.axis_tol_deg, cfg.origin_tol_frac};
            opts.oc_lambda = cfg.oc_lambda;
            opts.oc_beta = cfg.oc_beta;
            auto inputs = discover_eval_inputs(ev_gt, ev_pred, ev_meshes.empty() ? ev_gt : ev_meshes);
            EvalReport report = evaluate(inputs, opts);
            write_json(ev_out, report.to_json());
            if (!ev_table.empty()) write_text(ev_table, report.to_markdown());
            std::cout << report.to_markdown();
        } else if (*eu) {
            TriMesh mesh = load_mesh(eu_mesh);
            Annotation a = load_annotation(eu_seg, mesh);
            std::string name = eu_name.empty() ? fs::path(eu_mesh).stem().string() : eu_name;
            UrdfManifest files = export_urdf(build_articulated(mesh, a.segmentation, a.frame, name), eu_out);
            std::cout << files.urdf.string() << "\n";
        } else if (*pl) {
            PipelineConfig cfg;
            try {
                cfg = pl_config.empty() ? PipelineConfig{} : PipelineConfig::load(pl_config);
                if (pl_config.empty() || !read_json(pl_config).contains("workers")) cfg.workers = workers_from_env(1);
            } catch (const Error& e) {
                throw Error(ErrorKind::ConfigError, e.what());
            }
            if (!pl_source.empty()) cfg.source = parse_segmentation_source(pl_source);
            if (pl_workers) cfg.workers = *pl_workers;
            if (pl_seed) cfg.seed = *pl_seed;
            if (pl_conf) cfg.confidence_threshold = *pl_conf;
            if (pl_merge) cfg.merge_iou = *pl_merge;
            if (pl_points) cfg.sample_points = *pl_points;
            cfg.validate();
            if (!pl_dump.empty()) write_json(pl_dump, cfg.to_json());
            PipelineInputs inputs{pl_meshes, pl_seg, pl_out, std::nullopt};
            if (!pl_stats.empty()) inputs.stats = pl_stats;
            PipelineManifest manifest = run_pipeline(inputs, cfg);
            std::cout << fmt::format("{}/{} objects succeeded, {} failed\n", manifest.succeeded(),
                                     manifest.objects.size(), manifest.failed());
            return manifest.exit_code();
        }
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 1;
    }
    return 0;
}
