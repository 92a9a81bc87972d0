// SPDX-License-Identifier: MIT
#include "openable/Config.h"

#include <type_traits>

#include <fmt/format.h>

#include "openable/AnnotationIO.h"
#include "openable/Error.h"

namespace openable {
namespace {

template <typename T>
void check(bool ok, const char* key, const T& value, const char* expect) {
    if (!ok) throw Error(ErrorKind::ConfigError, fmt::format("{} = {} must be {}", key, value, expect));
}

}  // namespace

std::string_view to_string(SegmentationSource source) {
    switch (source) {
        case SegmentationSource::GroundTruth: return "gt";
        case SegmentationSource::PointCloud: return "pc-pred";
        case SegmentationSource::Views: return "view-pred";
    }
    return "gt";
}

SegmentationSource parse_segmentation_source(std::string_view name) {
    if (name == "gt") return SegmentationSource::GroundTruth;
    if (name == "pc-pred") return SegmentationSource::PointCloud;
    if (name == "view-pred") return SegmentationSource::Views;
    throw Error(ErrorKind::ConfigError, fmt::format("unknown segmentation source '{}'", name));
}

void PipelineConfig::validate() const {
    check(confidence_threshold >= 0.0 && confidence_threshold <= 1.0, "confidence_threshold",
          confidence_threshold, "in [0, 1]");
    check(merge_iou > 0.0 && merge_iou <= 1.0, "merge_iou", merge_iou, "in (0, 1]");
    check(sample_points > 0, "sample_points", sample_points, "positive");
    check(fps_points > 0 && fps_points <= sample_points, "fps_points", fps_points, "in [1, sample_points]");
    check(knn_k > 0, "knn_k", knn_k, "positive");
    check(fusion_views > 0, "fusion_views", fusion_views, "positive");
    check(view_width > 0, "view_width", view_width, "positive");
    check(view_height > 0, "view_height", view_height, "positive");
    check(handle_bins >= 2, "handle_bins", handle_bins, "at least 2");
    check(handle_min_fraction >= 0.0 && handle_min_fraction <= 1.0, "handle_min_fraction", handle_min_fraction,
          "in [0, 1]");
    check(handle_max_area_fraction > 0.0 && handle_max_area_fraction <= 1.0, "handle_max_area_fraction",
          handle_max_area_fraction, "in (0, 1]");
    check(corner_margin >= 1.0, "corner_margin", corner_margin, "at least 1");
    check(wall_thickness >= 0.0, "wall_thickness", wall_thickness, "non-negative");
    check(strip_views > 0, "strip_views", strip_views, "positive");
    check(strip_resolution > 0, "strip_resolution", strip_resolution, "positive");
    check(iou_threshold > 0.0 && iou_threshold <= 1.0, "iou_threshold", iou_threshold, "in (0, 1]");
    check(axis_tol_deg >= 0.0 && axis_tol_deg <= 90.0, "axis_tol_deg", axis_tol_deg, "in [0, 90]");
    check(origin_tol_frac >= 0.0, "origin_tol_frac", origin_tol_frac, "non-negative");
    check(oc_lambda >= 0.0 && oc_lambda <= 1.0, "oc_lambda", oc_lambda, "in [0, 1]");
    check(oc_beta >= 0.0, "oc_beta", oc_beta, "non-negative");
    check(workers > 0, "workers", workers, "positive");
}

nlohmann::json PipelineConfig::to_json() const {
    return {
        {"source", std::string(to_string(source))},
        {"confidence_threshold", confidence_threshold},
        {"merge_iou", merge_iou},
        {"sample_points", sample_points},
        {"fps_points", fps_points},
        {"knn_k", knn_k},
        {"fusion_views", fusion_views},
        {"view_width", view_width},
        {"view_height", view_height},
        {"handle_bins", handle_bins},
        {"handle_min_fraction", handle_min_fraction},
        {"handle_max_area_fraction", handle_max_area_fraction},
        {"corner_margin", corner_margin},
        {"wall_thickness", wall_thickness},
        {"complete_interior", complete_interior},
        {"strip_views", strip_views},
        {"strip_resolution", strip_resolution},
        {"iou_threshold", iou_threshold},
        {"axis_tol_deg", axis_tol_deg},
        {"origin_tol_frac", origin_tol_frac},
        {"oc_lambda", oc_lambda},
        {"oc_beta", oc_beta},
        {"seed", seed},
        {"workers", workers},
    };
}

PipelineConfig PipelineConfig::from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw Error(ErrorKind::ConfigError, "config must be a JSON object");
    PipelineConfig c;
    auto get = [&](const std::string& key, auto& field) {
        using T = std::decay_t<decltype(field)>;
        if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
            if (doc.at(key).is_number() && doc.at(key).get<double>() < 0.0) {
                throw Error(ErrorKind::ConfigError, fmt::format("'{}' must be non-negative", key));
            }
        }
        try {
            doc.at(key).get_to(field);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorKind::ConfigError, fmt::format("bad value for '{}': {}", key, e.what()));
        }
    };
    for (const auto& [key, value] : doc.items()) {
        if (key == "source") {
            if (!value.is_string()) throw Error(ErrorKind::ConfigError, "source must be a string");
            c.source = parse_segmentation_source(value.get<std::string>());
        } else if (key == "confidence_threshold") get(key, c.confidence_threshold);
        else if (key == "merge_iou") get(key, c.merge_iou);
        else if (key == "sample_points") get(key, c.sample_points);
        else if (key == "fps_points") get(key, c.fps_points);
        else if (key == "knn_k") get(key, c.knn_k);
        else if (key == "fusion_views") get(key, c.fusion_views);
        else if (key == "view_width") get(key, c.view_width);
        else if (key == "view_height") get(key, c.view_height);
        else if (key == "handle_bins") get(key, c.handle_bins);
        else if (key == "handle_min_fraction") get(key, c.handle_min_fraction);
        else if (key == "handle_max_area_fraction") get(key, c.handle_max_area_fraction);
        else if (key == "corner_margin") get(key, c.corner_margin);
        else if (key == "wall_thickness") get(key, c.wall_thickness);
        else if (key == "complete_interior") get(key, c.complete_interior);
        else if (key == "strip_views") get(key, c.strip_views);
        else if (key == "strip_resolution") get(key, c.strip_resolution);
        else if (key == "iou_threshold") get(key, c.iou_threshold);
        else if (key == "axis_tol_deg") get(key, c.axis_tol_deg);
        else if (key == "origin_tol_frac") get(key, c.origin_tol_frac);
        else if (key == "oc_lambda") get(key, c.oc_lambda);
        else if (key == "oc_beta") get(key, c.oc_beta);
        else if (key == "seed") get(key, c.seed);
        else if (key == "workers") get(key, c.workers);
        else throw Error(ErrorKind::ConfigError, fmt::format("unknown config key '{}'", key));
    }
    c.validate();
    return c;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
    nlohmann::json doc;
    try {
        doc = read_json(path);
    } catch (const Error& e) {
        throw Error(ErrorKind::ConfigError, e.what());
    }
    return from_json(doc);
}

}  // namespace openable
